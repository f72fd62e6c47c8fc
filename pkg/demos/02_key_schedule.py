# From a 256-bit key to nine round squares and rotation codes.
import time

from lsic.keyschedule import Key256, derive_schedule, kdsg, subkey_div

key = Key256.from_hex("B9B5ED7585C8B15D7454ED271AA3A3A3A07B00321C11759D0FDE340234384BC9")

# %% the key splits into eight big-endian 32-bit subkeys
print([hex(k) for k in subkey_div(key)])

# %% each subkey drives one LCG stream; per round the streams give two sequences of 256 values
pairs = kdsg(key)
print(len(pairs), "rounds; first round Q1 head:", pairs[0].q1[:3], "Q2 head:", pairs[0].q2[:3])

# %% derive the full schedule (timed: it is the fixed cost of every encryption)
t = time.perf_counter()
schedule = derive_schedule(key)
print(f"derived in {1e3 * (time.perf_counter() - t):.1f} ms")
print("rotations:", schedule.rotations)
print("first square, top-left corner:\n", schedule.squares[0].cells[:4, :4])

# %% flipping one key bit changes every square
other = derive_schedule(key.flip_bit(255))
changed = [(a.cells != b.cells).mean() for a, b in zip(schedule.squares, other.squares)]
print("fraction of cells changed per square:", [f"{c:.3f}" for c in changed])
