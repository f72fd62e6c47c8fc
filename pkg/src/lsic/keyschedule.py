"""Key translation: a 256-bit key becomes nine keyed order-256 Latin squares.

The sequence generator is a fixed 64-bit linear congruential generator
(Knuth's MMIX constants). Its constants are part of the ciphertext format:
changing them changes every ciphertext.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .latin import LatinSquare, lsg

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
MASK64 = (1 << 64) - 1

KEY_BYTES = 32
ROUNDS = 8
SUBKEYS = 8
STREAM_LEN = 64
HALF = STREAM_LEN // 2


@dataclass(frozen=True)
class Key256:
    """A 32-byte key. Bit 0 is the most significant bit of the first byte."""

    data: bytes

    def __post_init__(self):
        if not isinstance(self.data, (bytes, bytearray)) or len(self.data) != KEY_BYTES:
            raise ValueError(f"key must be exactly {KEY_BYTES} bytes")
        object.__setattr__(self, "data", bytes(self.data))

    @classmethod
    def from_hex(cls, text: str) -> "Key256":
        text = text.strip()
        if len(text) != 2 * KEY_BYTES:
            raise ValueError(f"key must be {2 * KEY_BYTES} hex characters, got {len(text)}")
        try:
            return cls(bytes.fromhex(text))
        except ValueError:
            raise ValueError("key contains non-hex characters") from None

    @classmethod
    def generate(cls) -> "Key256":
        return cls(secrets.token_bytes(KEY_BYTES))

    def hex(self) -> str:
        return self.data.hex().upper()

    def flip_bit(self, bit: int) -> "Key256":
        if not 0 <= bit < 8 * KEY_BYTES:
            raise ValueError(f"bit index must be in [0, {8 * KEY_BYTES}), got {bit}")
        buf = bytearray(self.data)
        buf[bit // 8] ^= 0x80 >> (bit % 8)
        return Key256(bytes(buf))

    def __repr__(self):
        return f"Key256({self.hex()[:8]}...)"


class SequencePair(NamedTuple):
    q1: np.ndarray
    q2: np.ndarray


def as_key(key) -> Key256:
    if isinstance(key, Key256):
        return key
    if isinstance(key, str):
        return Key256.from_hex(key)
    return Key256(bytes(key))


def subkey_div(key: Key256) -> tuple[int, ...]:
    """Split the key into eight big-endian 32-bit words."""
    data = as_key(key).data
    return tuple(int.from_bytes(data[4 * i : 4 * i + 4], "big") for i in range(SUBKEYS))


def prng_next(state: int) -> int:
    return (LCG_MULTIPLIER * state + LCG_INCREMENT) & MASK64


def kdsg(key: Key256, m: int = ROUNDS) -> list[SequencePair]:
    """Expand ``key`` into ``m + 1`` pairs of 256-element sequences.

    Each round seeds eight 64-step LCG streams from the round key's
    subkeys. The first 32 outputs of every stream form ``q1``, the last 32
    form ``q2``, and the low 32 bits of each stream's final output are
    concatenated into the next round key.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    round_key = as_key(key)
    out = []
    for _ in range(m + 1):
        streams = []
        for k in subkey_div(round_key):
            s = prng_next(k)
            stream = [s]
            for _ in range(STREAM_LEN - 1):
                s = prng_next(s)
                stream.append(s)
            streams.append(stream)
        q1 = np.array([v for st in streams for v in st[:HALF]], dtype=np.uint64)
        q2 = np.array([v for st in streams for v in st[HALF:]], dtype=np.uint64)
        out.append(SequencePair(q1, q2))
        round_key = Key256(b"".join((st[-1] & 0xFFFFFFFF).to_bytes(4, "big") for st in streams))
    return out


@dataclass(frozen=True, eq=False)
class KeySchedule:
    """Round squares ``L_0..L_8`` and their rotation parameters ``D_n = L_n(0, 0)``."""

    squares: tuple[LatinSquare, ...]
    rotations: tuple[int, ...]

    def __eq__(self, other):
        if not isinstance(other, KeySchedule):
            return NotImplemented
        return self.squares == other.squares

    def __hash__(self):
        return hash(self.squares)


def derive_schedule(key) -> KeySchedule:
    squares = tuple(lsg(p.q1, p.q2) for p in kdsg(as_key(key), ROUNDS))
    return KeySchedule(squares, tuple(int(L.cells[0, 0]) for L in squares))
