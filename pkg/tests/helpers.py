import numpy as np

from lsic.latin import LatinSquare, lsg

# the 4x4 square built from Q1=[.1,.6,.9,.7], Q2=[.3,.9,.4,.2]
KNOWN_L4 = [[2, 0, 1, 3], [0, 1, 3, 2], [3, 2, 0, 1], [1, 3, 2, 0]]

# two keys that differ only in their final bit, and a third differing from K2 in its first bit
K1_HEX = "B9B5ED7585C8B15D7454ED271AA3A3A3A07B00321C11759D0FDE340234384BC9"
K2_HEX = "B9B5ED7585C8B15D7454ED271AA3A3A3A07B00321C11759D0FDE340234384BC8"
K3_HEX = "39B5ED7585C8B15D7454ED271AA3A3A3A07B00321C11759D0FDE340234384BC8"


def random_square(rng, n) -> LatinSquare:
    return lsg(rng.random(n), rng.random(n))


def random_block(rng, n=256):
    return rng.integers(0, n, (n, n), dtype=np.uint8)
