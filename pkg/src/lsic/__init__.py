"""Latin square image cipher.

Keyed Latin squares supply the whitening masks, S-boxes and P-boxes of an
eight-round substitution-permutation network over 256 x 256 byte blocks.
"""

from .analysis import analyze, apc, entropy, npcr, uaci
from .cipher import (
    CipherContainer,
    EncryptOptions,
    PlaneImage,
    decrypt_block,
    decrypt_image,
    encrypt_block,
    encrypt_image,
)
from .keyschedule import Key256, KeySchedule, derive_schedule
from .latin import LatinSquare, lsg, validate

__all__ = [
    "CipherContainer",
    "EncryptOptions",
    "Key256",
    "KeySchedule",
    "LatinSquare",
    "PlaneImage",
    "analyze",
    "apc",
    "decrypt_block",
    "decrypt_image",
    "derive_schedule",
    "encrypt_block",
    "encrypt_image",
    "entropy",
    "lsg",
    "npcr",
    "uaci",
    "validate",
]
