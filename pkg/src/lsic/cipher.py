"""Block and image encryption with the eight-round Latin square SPN.

Images are handled plane by plane. Each plane is zero-padded up to a
multiple of 256 in both directions and cut into 256 x 256 tiles that are
encrypted independently with one shared key schedule. Identical tiles
therefore encrypt identically when LSB noise is disabled.
"""

from __future__ import annotations

import secrets
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import primitives as prim
from .keyschedule import (
    LCG_INCREMENT,
    LCG_MULTIPLIER,
    MASK64,
    ROUNDS,
    KeySchedule,
    as_key,
    derive_schedule,
    prng_next,
)

BLOCK = 256

# keeps seeded noise streams apart from key-derived LCG streams
NOISE_DOMAIN = int.from_bytes(b"LSICnois", "big")


@dataclass(frozen=True)
class EncryptOptions:
    embed_noise: bool = True
    noise_seed: Optional[int] = None


class NoiseSource:
    """Random bits for LSB noise, never derived from the key.

    Without a seed the bits come from the OS entropy pool. With a seed they
    come from the top bit of a 64-bit LCG stream; this is a test-mode
    convenience and makes ciphertexts reproducible.
    """

    _LANES = 256

    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self._state = None if seed is None else (seed ^ NOISE_DOMAIN) & MASK64

    def bits(self, n: int) -> np.ndarray:
        if self._state is None:
            raw = np.frombuffer(secrets.token_bytes((n + 7) // 8), dtype=np.uint8)
            return np.unpackbits(raw)[:n]
        return self._lcg_bits(n)

    def _lcg_bits(self, n: int) -> np.ndarray:
        lanes = self._LANES
        first = []
        s = self._state
        for _ in range(min(n, lanes)):
            s = prng_next(s)
            first.append(s)
        if n <= lanes:
            self._state = s
            return (np.array(first, dtype=np.uint64) >> np.uint64(63)).astype(np.uint8)

        # affine map x -> a*x + c applied `lanes` times, so each lane jumps ahead
        a, c = 1, 0
        for _ in range(lanes):
            a, c = (LCG_MULTIPLIER * a) & MASK64, (LCG_MULTIPLIER * c + LCG_INCREMENT) & MASK64
        a, c = np.uint64(a), np.uint64(c)
        rows = -(-n // lanes)
        states = np.empty((rows, lanes), dtype=np.uint64)
        states[0] = first
        with np.errstate(over="ignore"):
            for i in range(1, rows):
                states[i] = states[i - 1] * a + c
        flat = states.reshape(-1)[:n]
        self._state = int(flat[-1])
        return (flat >> np.uint64(63)).astype(np.uint8)


def lsb_noise_embed(P, noise: NoiseSource) -> np.ndarray:
    """XOR one random bit into bit 0 of every pixel."""
    P = np.asarray(P, dtype=np.uint8)
    return P ^ noise.bits(P.size).reshape(P.shape)


def resolve_schedule(key) -> KeySchedule:
    """Accept a KeySchedule as is, otherwise derive one from key material."""
    return key if isinstance(key, KeySchedule) else derive_schedule(as_key(key))


def _block(X) -> np.ndarray:
    X = np.asarray(X)
    if X.shape != (BLOCK, BLOCK):
        raise ValueError(f"block must be {BLOCK}x{BLOCK}, got {X.shape}")
    if X.dtype != np.uint8:
        if X.size and (X.min() < 0 or X.max() > 255):
            raise ValueError("block values must be bytes")
        X = X.astype(np.uint8)
    return X


def encrypt_block(P, schedule: KeySchedule, opts: EncryptOptions | None = None,
                  noise: NoiseSource | None = None) -> np.ndarray:
    """Encrypt one 256 x 256 byte block.

    ``noise`` lets callers share one bit stream across several blocks; when
    omitted a fresh source is built from ``opts``.
    """
    opts = opts or EncryptOptions()
    X = _block(P)
    if opts.embed_noise:
        X = lsb_noise_embed(X, noise or NoiseSource(opts.noise_seed))
    sq, rot = schedule.squares, schedule.rotations
    for n in range(ROUNDS):
        L = sq[n]
        X = prim.whiten_encrypt(L, X, rot[n])
        X = prim.lscs_encrypt(L, X) if n % 2 else prim.lsrs_encrypt(L, X)
        X = prim.lsp_encrypt(L, X)
    return prim.whiten_encrypt(sq[ROUNDS], X, rot[ROUNDS])


def decrypt_block(C, schedule: KeySchedule) -> np.ndarray:
    X = _block(C)
    sq, rot = schedule.squares, schedule.rotations
    X = prim.whiten_decrypt(sq[ROUNDS], X, rot[ROUNDS])
    for n in reversed(range(ROUNDS)):
        L = sq[n]
        X = prim.lsp_decrypt(L, X)
        X = prim.lscs_decrypt(L, X) if n % 2 else prim.lsrs_decrypt(L, X)
        X = prim.whiten_decrypt(L, X, rot[n])
    return X


@dataclass
class PlaneImage:
    """An 8-bit image stored as 1 (gray) or 3 (RGB) planes of shape (height, width)."""

    width: int
    height: int
    planes: list = field(default_factory=list)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.planes) not in (1, 3):
            raise ValueError(f"expected 1 or 3 planes, got {len(self.planes)}")
        planes = []
        for p in self.planes:
            p = np.asarray(p)
            if p.ndim == 1:
                p = p.reshape(self.height, self.width)
            if p.shape != (self.height, self.width):
                raise ValueError(f"plane shape {p.shape} != {(self.height, self.width)}")
            planes.append(p.astype(np.uint8, copy=False))
        self.planes = planes

    @property
    def channels(self) -> int:
        return len(self.planes)

    @classmethod
    def from_array(cls, arr) -> "PlaneImage":
        """From an (h, w) or (h, w, 3) uint8 array."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            return cls(arr.shape[1], arr.shape[0], [arr])
        if arr.ndim == 3 and arr.shape[2] == 3:
            return cls(arr.shape[1], arr.shape[0], [arr[..., i] for i in range(3)])
        raise ValueError(f"unsupported array shape {arr.shape}")

    def to_array(self) -> np.ndarray:
        return self.planes[0].copy() if self.channels == 1 else np.stack(self.planes, axis=-1)

    def __eq__(self, other):
        if not isinstance(other, PlaneImage):
            return NotImplemented
        return (self.width, self.height, self.channels) == (other.width, other.height, other.channels) and all(
            np.array_equal(a, b) for a, b in zip(self.planes, other.planes)
        )


@dataclass
class CipherContainer:
    """Encrypted image: true dimensions plus the padded ciphertext planes."""

    width: int
    height: int
    planes: list
    noise_embedded: bool = False

    @property
    def channels(self) -> int:
        return len(self.planes)

    @property
    def padded_width(self) -> int:
        return padded(self.width)

    @property
    def padded_height(self) -> int:
        return padded(self.height)

    def __eq__(self, other):
        if not isinstance(other, CipherContainer):
            return NotImplemented
        return (self.width, self.height, self.noise_embedded, self.channels) == (
            other.width, other.height, other.noise_embedded, other.channels
        ) and all(np.array_equal(a, b) for a, b in zip(self.planes, other.planes))


def padded(n: int) -> int:
    return -(-n // BLOCK) * BLOCK


def tiles(plane: np.ndarray):
    """(row, col) slices of every 256 x 256 tile, row-major."""
    h, w = plane.shape
    return [
        (slice(r, r + BLOCK), slice(c, c + BLOCK))
        for r in range(0, h, BLOCK)
        for c in range(0, w, BLOCK)
    ]


def _map(fn, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def encrypt_image(img: PlaneImage, key, opts: EncryptOptions | None = None,
                  workers: int | None = None) -> CipherContainer:
    """Encrypt every plane tile by tile.

    ``key`` may be a :class:`Key256`, 32 raw bytes, a hex string, or an
    already derived :class:`KeySchedule`. Noise bits are drawn tile by tile
    in a fixed order before tiles are dispatched, so the output does not
    depend on ``workers``.
    """
    opts = opts or EncryptOptions()
    schedule = resolve_schedule(key)
    noise = NoiseSource(opts.noise_seed) if opts.embed_noise else None
    ph, pw = padded(img.height), padded(img.width)

    jobs = []
    outs = []
    for plane in img.planes:
        buf = np.zeros((ph, pw), dtype=np.uint8)
        buf[: img.height, : img.width] = plane
        out = np.empty_like(buf)
        outs.append(out)
        for sl in tiles(buf):
            block = buf[sl]
            if noise is not None:
                block = lsb_noise_embed(block, noise)
            jobs.append((out, sl, block))

    plain = EncryptOptions(embed_noise=False)

    def run(job):
        out, sl, block = job
        out[sl] = encrypt_block(block, schedule, plain)

    _map(run, jobs, workers)
    return CipherContainer(img.width, img.height, outs, noise_embedded=opts.embed_noise)


def decrypt_image(ct: CipherContainer, key, workers: int | None = None) -> PlaneImage:
    """Invert :func:`encrypt_image`. A wrong key is not detected."""
    schedule = resolve_schedule(key)
    jobs = []
    outs = []
    for plane in ct.planes:
        plane = np.asarray(plane, dtype=np.uint8)
        if plane.shape != (ct.padded_height, ct.padded_width):
            raise ValueError(f"ciphertext plane shape {plane.shape} does not match header")
        out = np.empty_like(plane)
        outs.append(out)
        jobs.extend((out, sl, plane[sl]) for sl in tiles(plane))

    def run(job):
        out, sl, block = job
        out[sl] = decrypt_block(block, schedule)

    _map(run, jobs, workers)
    return PlaneImage(ct.width, ct.height, [o[: ct.height, : ct.width].copy() for o in outs])
