"""Whitening, S-box and P-box layers built from one keyed Latin square.

All functions take a :class:`~lsic.latin.LatinSquare` of order N and an
N x N integer block with entries in ``[0, N)`` and return a new block of
the same dtype. Each ``*_encrypt`` / ``*_forward`` has an exact inverse.
"""

from __future__ import annotations

import numpy as np

from .latin import LatinSquare


def _check(L: LatinSquare, X) -> np.ndarray:
    X = np.asarray(X)
    n = L.order
    if X.shape != (n, n):
        raise ValueError(f"block shape {X.shape} does not match square order {n}")
    if X.dtype.kind not in "ui":
        raise TypeError(f"block must hold integers, got {X.dtype}")
    if X.size and (X.min() < 0 or X.max() >= n):
        raise ValueError(f"block symbols must lie in [0, {n})")
    return X


def spatial_rotate(X, d: int) -> np.ndarray:
    """0: identity, 1: flip top/bottom, 2: flip left/right. Each is an involution."""
    X = np.asarray(X)
    if d == 0:
        return X.copy()
    if d == 1:
        return X[::-1, :].copy()
    if d == 2:
        return X[:, ::-1].copy()
    raise ValueError(f"direction must be 0, 1 or 2, got {d}")


def _xor_order(L: LatinSquare) -> None:
    n = L.order
    if n & (n - 1):
        raise ValueError(f"whitening needs a power-of-two order, got {n}")


def whiten_encrypt(L: LatinSquare, P, D: int) -> np.ndarray:
    P = _check(L, P)
    _xor_order(L)
    return spatial_rotate(P, D % 3) ^ L.cells.astype(P.dtype)


def whiten_decrypt(L: LatinSquare, C, D: int) -> np.ndarray:
    C = _check(L, C)
    _xor_order(L)
    return spatial_rotate(C ^ L.cells.astype(C.dtype), D % 3)


def lsrs_encrypt(L: LatinSquare, P) -> np.ndarray:
    """Row S-box: each column is chained top to bottom.

    ``C[0, c] = L[0, P[0, c]]`` and ``C[r, c] = L[C[r-1, c], P[r, c]]``.
    """
    P = _check(L, P)
    n = L.order
    flat = L.cells.ravel().astype(np.intp) * n
    Pi = P.astype(np.intp)
    # rows of Cn hold n * C[r] so each step is a single flat gather
    Cn = np.empty((n, n), dtype=np.intp)
    Cn[0] = flat[Pi[0]]
    for r in range(1, n):
        Cn[r] = flat[Cn[r - 1] + Pi[r]]
    return (Cn // n).astype(P.dtype)


def lsrs_decrypt(L: LatinSquare, C) -> np.ndarray:
    C = _check(L, C)
    inv = L.row_inv
    P = np.empty_like(C)
    P[0] = inv[0, C[0]]
    # no sequential dependency: each symbol needs only two ciphertext symbols
    P[1:] = inv[C[:-1], C[1:]]
    return P


def lscs_encrypt(L: LatinSquare, P) -> np.ndarray:
    """Column S-box: each row is chained left to right.

    ``C[r, 0] = L[P[r, 0], 0]`` and ``C[r, c] = L[P[r, c], C[r, c-1]]``.
    """
    P = _check(L, P)
    n = L.order
    flat = L.cells.ravel()
    # work on columns of P as contiguous rows
    Pt = np.ascontiguousarray(P.T).astype(np.intp) * n
    Ct = np.empty((n, n), dtype=P.dtype)
    prev = flat[Pt[0]]
    Ct[0] = prev
    for c in range(1, n):
        prev = flat[Pt[c] + prev]
        Ct[c] = prev
    return np.ascontiguousarray(Ct.T)


def lscs_decrypt(L: LatinSquare, C) -> np.ndarray:
    C = _check(L, C)
    inv = L.col_inv
    P = np.empty_like(C)
    P[:, 0] = inv[0, C[:, 0]]
    P[:, 1:] = inv[C[:, :-1], C[:, 1:]]
    return P


def lsrp_forward(L: LatinSquare, P) -> np.ndarray:
    """Row P-box: ``C[r, c] = P[r, L[r, c]]``."""
    P = _check(L, P)
    return np.take_along_axis(P, L.cells.astype(np.intp), axis=1)


def lsrp_inverse(L: LatinSquare, C) -> np.ndarray:
    C = _check(L, C)
    return np.take_along_axis(C, L.row_inv.astype(np.intp), axis=1)


def lscp_forward(L: LatinSquare, P) -> np.ndarray:
    """Column P-box: ``C[r, c] = P[L[r, c], c]``."""
    P = _check(L, P)
    return np.take_along_axis(P, L.cells.astype(np.intp), axis=0)


def lscp_inverse(L: LatinSquare, C) -> np.ndarray:
    C = _check(L, C)
    # P[r, c] = C[col_inv[c, r], c]
    return np.take_along_axis(C, L.col_inv.T.astype(np.intp), axis=0)


def lsp_encrypt(L: LatinSquare, P) -> np.ndarray:
    """Row P-box followed by column P-box."""
    return lscp_forward(L, lsrp_forward(L, P))


def lsp_decrypt(L: LatinSquare, C) -> np.ndarray:
    return lsrp_inverse(L, lscp_inverse(L, C))
