"""Latin squares over the symbols ``0..N-1`` and their row/column bijections.

A :class:`LatinSquare` keeps its cells together with two inverse lookup
tables so that the inverse mappings used during decryption are single
table reads instead of searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_ORDER = 256


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def _grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened row and column indices of an n x n array."""
    return tuple(_frozen(a) for a in np.divmod(np.arange(n * n), n))


@dataclass(frozen=True, eq=False)
class LatinSquare:
    """Order-N square with precomputed inverse tables.

    ``row_inv[r, y]`` is the column ``x`` with ``cells[r, x] == y`` and
    ``col_inv[c, y]`` is the row ``x`` with ``cells[x, c] == y``.
    Instances are immutable and safe to share between threads.
    """

    cells: np.ndarray
    row_inv: np.ndarray
    col_inv: np.ndarray

    @classmethod
    def from_cells(cls, cells) -> "LatinSquare":
        """Wrap an N x N array. No validation happens here, see :func:`validate`."""
        cells = np.array(cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError(f"cells must be square, got shape {cells.shape}")
        n = cells.shape[0]
        if not 2 <= n <= MAX_ORDER:
            raise ValueError(f"order must be in [2, {MAX_ORDER}], got {n}")
        if cells.min() < 0 or cells.max() >= n:
            raise ValueError(f"symbols must lie in [0, {n})")
        cells = cells.astype(np.uint8 if n <= 256 else np.uint16)

        # scatter: row_inv[r, cells[r, x]] = x ; col_inv[c, cells[x, c]] = x
        rows, cols = _grid(n)
        flat = cells.ravel().astype(np.intp)
        row_inv = np.zeros(n * n, dtype=cells.dtype)
        col_inv = np.zeros(n * n, dtype=cells.dtype)
        row_inv[rows * n + flat] = cols
        col_inv[cols * n + flat] = rows
        return cls(_frozen(cells), _frozen(row_inv.reshape(n, n)), _frozen(col_inv.reshape(n, n)))

    @property
    def order(self) -> int:
        return self.cells.shape[0]

    def __getitem__(self, rc):
        return int(self.cells[rc])

    def __eq__(self, other):
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.cells.tobytes())

    def __repr__(self):
        return f"LatinSquare(order={self.order})"

    def to_text(self) -> str:
        """Debug dump: N lines of N space-separated symbols."""
        return "".join(" ".join(str(v) for v in row) + "\n" for row in self.cells)

    @classmethod
    def from_text(cls, text: str) -> "LatinSquare":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        return cls.from_cells([[int(v) for v in row] for row in rows])


def sort_map(q: Sequence) -> np.ndarray:
    """Index permutation that sorts ``q`` ascending (stable argsort).

    ``q[p[i]]`` is the i-th smallest value; equal values keep their
    original order.
    """
    if len(q) == 0:
        raise ValueError("empty sequence")
    arr = np.asarray(q)
    if arr.dtype == object:
        return np.array(sorted(range(len(q)), key=q.__getitem__), dtype=np.int64)
    return np.argsort(arr, kind="stable").astype(np.int64)


def row_shift(q: Sequence[int], v: int) -> np.ndarray:
    """Circular left shift: ``out[i] = q[(i + v) % N]``."""
    q = np.asarray(q)
    return np.roll(q, -(int(v) % len(q)))


def lsg(q1: Sequence, q2: Sequence) -> LatinSquare:
    """Build a Latin square from two equal-length sequences.

    Row ``r`` is the seed permutation ``sort_map(q1)`` shifted left by
    ``sort_map(q2)[r]``. Since the shifts form a permutation, every
    column sees each offset once and the result is always Latin.
    """
    if len(q1) != len(q2):
        raise ValueError(f"length mismatch: {len(q1)} != {len(q2)}")
    seed = sort_map(q1)
    shift = sort_map(q2)
    n = len(seed)
    # row r is the window seed2[shift[r] : shift[r] + n]
    windows = np.lib.stride_tricks.sliding_window_view(np.concatenate([seed, seed]), n)
    return LatinSquare.from_cells(windows[shift])


def _check_index(L: LatinSquare, *idx: int) -> None:
    n = L.order
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for order {n}")


def frm(L: LatinSquare, r: int, x: int) -> int:
    """Forward row mapping: ``L(r, x)``."""
    _check_index(L, r, x)
    return int(L.cells[r, x])


def irm(L: LatinSquare, r: int, y: int) -> int:
    """Inverse row mapping: the column of symbol ``y`` in row ``r``."""
    _check_index(L, r, y)
    return int(L.row_inv[r, y])


def fcm(L: LatinSquare, x: int, c: int) -> int:
    """Forward column mapping: ``L(x, c)``."""
    _check_index(L, x, c)
    return int(L.cells[x, c])


def icm(L: LatinSquare, y: int, c: int) -> int:
    """Inverse column mapping: the row of symbol ``y`` in column ``c``."""
    _check_index(L, y, c)
    return int(L.col_inv[c, y])


def validate(L: LatinSquare) -> bool:
    """True iff rows and columns are permutations and the inverse tables agree."""
    cells = np.asarray(L.cells)
    n = cells.shape[0]
    if cells.shape != (n, n) or L.row_inv.shape != (n, n) or L.col_inv.shape != (n, n):
        return False
    if cells.min() < 0 or cells.max() >= n:
        return False
    target = np.arange(n)
    base = target[:, None] * n
    # every (row, symbol) and every (column, symbol) pair must occur exactly once
    if not (np.bincount((base + cells).ravel(), minlength=n * n) == 1).all():
        return False
    if not (np.bincount((base.T + cells).ravel(), minlength=n * n) == 1).all():
        return False
    row_inv = np.asarray(L.row_inv, dtype=np.intp)
    col_inv = np.asarray(L.col_inv, dtype=np.intp)
    if row_inv.min() < 0 or row_inv.max() >= n or col_inv.min() < 0 or col_inv.max() >= n:
        return False
    # rows and columns are permutations, so a one-sided inverse is the inverse
    flat = cells.ravel()
    if not (flat[base + row_inv] == target).all():  # cells[r, row_inv[r, y]] == y
        return False
    return bool((flat[col_inv.T * n + target] == target[:, None]).all())  # cells[col_inv[c, y], c] == y
