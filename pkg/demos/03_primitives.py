# The building blocks of one round, each shown with its inverse.
import numpy as np

from lsic import primitives as prim
from lsic.latin import lsg

rng = np.random.default_rng(3)
L = lsg([0.1, 0.6, 0.9, 0.7], [0.3, 0.9, 0.4, 0.2])
X = rng.integers(0, 4, (4, 4), dtype=np.uint8)
print("block:\n", X)

# %% whitening flips the block by D % 3 and XORs the square in
W = prim.whiten_encrypt(L, X, D=1)
print("whitened:\n", W)
assert np.array_equal(prim.whiten_decrypt(L, W, D=1), X)

# %% the substitution boxes chain values down columns (row box) or across rows (column box)
S = prim.lsrs_encrypt(L, X)
print("row S-box:\n", S)
assert np.array_equal(prim.lsrs_decrypt(L, S), X)
S = prim.lscs_encrypt(L, X)
print("column S-box:\n", S)
assert np.array_equal(prim.lscs_decrypt(L, S), X)

# %% the permutation box moves pixels without changing their values
P = prim.lsp_encrypt(L, X)
print("permuted:\n", P)
assert sorted(P.ravel()) == sorted(X.ravel())
assert np.array_equal(prim.lsp_decrypt(L, P), X)

# %% one changed input byte: the S-box spreads it along its chain
Y = X.copy()
Y[0, 0] ^= 1
print("S-box difference:\n", (prim.lsrs_encrypt(L, X) != prim.lsrs_encrypt(L, Y)).astype(int))
