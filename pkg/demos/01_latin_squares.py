# Keyed Latin squares: how a pair of real sequences becomes an N x N square.
import numpy as np

from lsic.latin import LatinSquare, fcm, frm, icm, irm, lsg, row_shift, sort_map, validate

# %% sort_map ranks a sequence; the ranks are a permutation of 0..N-1
q1 = [0.1, 0.6, 0.9, 0.7]
q2 = [0.3, 0.9, 0.4, 0.2]
print("sort_map(q1) =", sort_map(q1))
print("sort_map(q2) =", sort_map(q2))

# %% row_shift rotates a row to the left
print("row_shift([0,1,2,3], 1) =", row_shift([0, 1, 2, 3], 1))

# %% the seed row comes from q1, the per-row shifts from q2
L = lsg(q1, q2)
print(L.to_text())
print("valid:", validate(L))

# %% each row and column is a bijection on 0..N-1, with a stored inverse
r, x = 2, 3
y = frm(L, r, x)
print(f"row {r}: {x} -> {y} -> {irm(L, r, y)}")
y = fcm(L, x, r)
print(f"col {r}: {x} -> {y} -> {icm(L, y, r)}")

# %% a broken square is reported, not repaired
bad = LatinSquare.from_cells([[0, 1], [0, 1]])
print("duplicate column valid:", validate(bad))

# %% order 256 squares are what the cipher uses
rng = np.random.default_rng(1)
big = lsg(rng.random(256), rng.random(256))
print("order", big.order, "valid:", validate(big))
