"""Statistics for judging an image cipher, and the experiments built on them.

Pairwise metrics follow the usual conventions: NPCR is the percentage of
positions that differ, UACI the mean absolute difference as a percentage
of the maximum intensity 255. Experiment drivers encrypt with LSB noise
off unless told otherwise, so their results are deterministic.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .cipher import (
    BLOCK,
    CipherContainer,
    EncryptOptions,
    PlaneImage,
    resolve_schedule,
    decrypt_image,
    encrypt_image,
)
from .keyschedule import as_key

MAX_INTENSITY = 255

OFFSETS = {
    "horizontal": (0, 1),
    "vertical": (1, 0),
    "diagonal": (1, 1),
}

# expected scores for two independent uniform byte images
IDEAL_NPCR = 100.0 * (1 - 2.0**-8)
IDEAL_UACI = 100.0 * sum(d * 2 * (256 - d) for d in range(1, 256)) / (256**2 * MAX_INTENSITY)


def _plane(X) -> np.ndarray:
    X = np.asarray(X)
    if X.size == 0:
        raise ValueError("empty plane")
    return X


def histogram(X) -> np.ndarray:
    return np.bincount(_plane(X).astype(np.uint8).ravel(), minlength=256)


def entropy(X) -> float:
    """Shannon entropy in bits of the 256-bin histogram."""
    h = histogram(X)
    p = h[h > 0] / h.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def block_entropies(X, block: int = BLOCK) -> np.ndarray:
    """Entropy of every full ``block`` x ``block`` tile, row-major."""
    X = _plane(X)
    h, w = X.shape
    return np.array(
        [entropy(X[r : r + block, c : c + block])
         for r in range(0, h - block + 1, block)
         for c in range(0, w - block + 1, block)]
    )


def adjacent_pairs(X, direction: str):
    X = _plane(X).astype(np.float64)
    try:
        dr, dc = OFFSETS[direction]
    except KeyError:
        raise ValueError(f"direction must be one of {sorted(OFFSETS)}") from None
    h, w = X.shape
    return X[: h - dr, : w - dc], X[dr:, dc:]


def apc(X, direction: str = "horizontal", samples: Optional[int] = None,
        seed: Optional[int] = None) -> float:
    """Pearson correlation between each pixel and its neighbour.

    All valid pairs are used unless ``samples`` is given, in which case
    that many pair positions are drawn without replacement using ``seed``.
    """
    a, b = adjacent_pairs(X, direction)
    a, b = a.ravel(), b.ravel()
    if samples is not None:
        if samples > a.size:
            raise ValueError(f"only {a.size} pairs available, asked for {samples}")
        pick = np.random.default_rng(seed).choice(a.size, size=samples, replace=False)
        a, b = a[pick], b[pick]
    if a.size < 2:
        raise ValueError("need at least 2 adjacent pairs")
    da, db = a - a.mean(), b - b.mean()
    denom = math.sqrt(float((da * da).sum()) * float((db * db).sum()))
    if denom == 0.0:
        raise ValueError("zero variance")
    return float((da * db).sum() / denom)


def _pair(c1, c2):
    c1, c2 = np.asarray(c1), np.asarray(c2)
    if c1.shape != c2.shape:
        raise ValueError(f"size mismatch: {c1.shape} vs {c2.shape}")
    if c1.size == 0:
        raise ValueError("empty plane")
    return c1.astype(np.int64), c2.astype(np.int64)


def npcr(c1, c2) -> float:
    c1, c2 = _pair(c1, c2)
    return 100.0 * np.count_nonzero(c1 != c2) / c1.size


def uaci(c1, c2) -> float:
    c1, c2 = _pair(c1, c2)
    return 100.0 * np.abs(c1 - c2).sum() / (MAX_INTENSITY * c1.size)


def key_fingerprint(key) -> str:
    return hashlib.sha256(as_key(key).data).hexdigest()[:16]


@dataclass
class AnalysisReport:
    entropy: float
    apc_h: float
    apc_v: float
    apc_d: float
    histogram: list
    npcr: Optional[float] = None
    uaci: Optional[float] = None
    block_entropy_min: Optional[float] = None
    block_entropy_mean: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        meta = d.pop("metadata")
        d.update(meta)
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _safe_apc(X, direction):
    try:
        return apc(X, direction)
    except ValueError:
        return float("nan")


def analyze(X, other=None, **metadata) -> AnalysisReport:
    """Single-plane report; pairwise scores are filled when ``other`` is given.

    Correlations of a constant plane are undefined and reported as NaN.
    """
    X = _plane(X)
    blocks = block_entropies(X)
    rep = AnalysisReport(
        entropy=entropy(X),
        apc_h=_safe_apc(X, "horizontal"),
        apc_v=_safe_apc(X, "vertical"),
        apc_d=_safe_apc(X, "diagonal"),
        histogram=histogram(X).tolist(),
        metadata=dict(metadata),
    )
    if blocks.size:
        rep.block_entropy_min = float(blocks.min())
        rep.block_entropy_mean = float(blocks.mean())
    if other is not None:
        rep.npcr = npcr(X, other)
        rep.uaci = uaci(X, other)
    return rep


def difference_image(c1, c2) -> np.ndarray:
    c1, c2 = _pair(c1, c2)
    return np.abs(c1 - c2).astype(np.uint8)


# -- experiments ------------------------------------------------------------

_NO_NOISE = EncryptOptions(embed_noise=False)


def _image(P) -> PlaneImage:
    return P if isinstance(P, PlaneImage) else PlaneImage.from_array(np.asarray(P, dtype=np.uint8))


def _encrypt_plane(P, key) -> np.ndarray:
    return encrypt_image(_image(P), key, _NO_NOISE).planes[0]


def diffusion_experiment(P, key, pixel, delta: int = 1) -> tuple[float, float]:
    """NPCR/UACI between ciphertexts of ``P`` and ``P`` with one pixel shifted by ``delta`` (mod 256)."""
    P1 = np.asarray(P, dtype=np.uint8)
    r, c = pixel
    P2 = P1.copy()
    P2[r, c] = (int(P2[r, c]) + delta) % 256
    schedule = resolve_schedule(key)
    c1, c2 = _encrypt_plane(P1, schedule), _encrypt_plane(P2, schedule)
    return npcr(c1, c2), uaci(c1, c2)


@dataclass
class KeySensitivityReport:
    bit: int
    npcr: float
    uaci: float
    wrong_key_entropy: float
    wrong_key_block_entropy_min: float
    key_fingerprint: str

    def to_dict(self):
        return asdict(self)


def key_sensitivity_experiment(P, key, bit: int) -> KeySensitivityReport:
    """Encrypt under ``key`` and under ``key`` with one bit flipped.

    Reports the NPCR/UACI between the two ciphertexts and the entropy of
    decrypting the first ciphertext with the flipped key.
    """
    key = as_key(key)
    other = key.flip_bit(bit)
    img = _image(P)
    ct1 = encrypt_image(img, key, _NO_NOISE)
    ct2 = encrypt_image(img, other, _NO_NOISE)
    c1, c2 = ct1.planes[0], ct2.planes[0]
    wrong = decrypt_image(ct1, other)
    # judge the whole padded plane so that padding does not leak structure
    wrong_padded = _decrypt_padded(ct1, other)
    blocks = block_entropies(wrong_padded)
    return KeySensitivityReport(
        bit=bit,
        npcr=npcr(c1, c2),
        uaci=uaci(c1, c2),
        wrong_key_entropy=entropy(wrong.planes[0]),
        wrong_key_block_entropy_min=float(blocks.min()),
        key_fingerprint=key_fingerprint(key),
    )


def _decrypt_padded(ct, key) -> np.ndarray:
    full = CipherContainer(ct.padded_width, ct.padded_height, ct.planes, ct.noise_embedded)
    return decrypt_image(full, key).planes[0]


def corrupt(plane, count: int, rng: np.random.Generator, region=None):
    """Replace ``count`` distinct bytes of ``plane`` with different values.

    ``region`` optionally restricts positions to a ``(row_slice, col_slice)``.
    Returns the corrupted copy and the flat indices that were hit.
    """
    plane = np.asarray(plane, dtype=np.uint8)
    h, w = plane.shape
    mask = np.zeros((h, w), dtype=bool)
    if region is None:
        mask[:] = True
    else:
        mask[region] = True
    candidates = np.flatnonzero(mask)
    if count > candidates.size:
        raise ValueError(f"cannot corrupt {count} of {candidates.size} bytes")
    hit = rng.choice(candidates, size=count, replace=False)
    out = plane.copy().ravel()
    out[hit] ^= rng.integers(1, 256, size=count, dtype=np.uint8)
    return out.reshape(h, w), hit


@dataclass
class NoiseReport:
    corrupted: int
    differing: int
    fraction: float
    bound: int
    outside_region: int
    seed: Optional[int]
    key_fingerprint: str

    def to_dict(self):
        return asdict(self)


def noise_robustness_experiment(P, key, ratio: float, seed: Optional[int] = None,
                                tile: Optional[tuple[int, int]] = None) -> NoiseReport:
    """Corrupt ``ceil(ratio * T)`` ciphertext bytes and compare decryptions.

    ``T`` is the size of the padded ciphertext plane, or of one tile when
    ``tile=(i, j)`` confines the corruption. ``bound`` is ``256 * corrupted``,
    the worst-case spread of the decryption structure.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("ratio must lie in [0, 1]")
    key = as_key(key)
    schedule = resolve_schedule(key)
    ct = encrypt_image(_image(P), schedule, _NO_NOISE)
    cplane = ct.planes[0]
    region = None
    if tile is not None:
        i, j = tile
        region = (slice(i * BLOCK, (i + 1) * BLOCK), slice(j * BLOCK, (j + 1) * BLOCK))
    total = cplane.size if region is None else BLOCK * BLOCK
    count = math.ceil(ratio * total)
    rng = np.random.default_rng(seed)
    noisy, _ = corrupt(cplane, count, rng, region)

    clean = _decrypt_padded(ct, schedule)
    dirty = _decrypt_padded(CipherContainer(ct.width, ct.height, [noisy]), schedule)
    diff = clean != dirty
    outside = 0
    if region is not None:
        inside = np.zeros_like(diff)
        inside[region] = True
        outside = int(np.count_nonzero(diff & ~inside))
    differing = int(np.count_nonzero(diff))
    return NoiseReport(
        corrupted=count,
        differing=differing,
        fraction=differing / diff.size,
        bound=256 * count,
        outside_region=outside,
        seed=seed,
        key_fingerprint=key_fingerprint(key),
    )


def throughput(width: int = 512, height: int = 512, key=None, repeats: int = 3,
               seed: int = 0) -> dict:
    """Encrypt/decrypt speed in megabits per second on a random gray image."""
    key = as_key(key) if key is not None else as_key(bytes(32))
    schedule = resolve_schedule(key)
    img = PlaneImage.from_array(np.random.default_rng(seed).integers(0, 256, (height, width), dtype=np.uint8))
    megabits = width * height * 8 / 1e6
    enc = dec = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        ct = encrypt_image(img, schedule, _NO_NOISE)
        t1 = time.perf_counter()
        decrypt_image(ct, schedule)
        t2 = time.perf_counter()
        enc, dec = min(enc, t1 - t0), min(dec, t2 - t1)
    return {
        "width": width,
        "height": height,
        "encrypt_mbps": megabits / enc,
        "decrypt_mbps": megabits / dec,
        "encrypt_seconds": enc,
        "decrypt_seconds": dec,
    }

