"""Binary PGM/PPM codec and the LSIC ciphertext container.

Container layout (all integers big-endian)::

    offset  size  field
    0       4     magic b"LSIC"
    4       1     version (1)
    5       1     flags (bit 0: LSB noise embedded; other bits must be 0)
    6       1     channels (1 or 3)
    7       1     reserved (0)
    8       4     width
    12      4     height
    16      ...   per channel, the padded plane row-major

Only 8-bit netpbm files are handled; header comments are skipped on read
and never written.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .cipher import CipherContainer, PlaneImage, padded

MAGIC = b"LSIC"
VERSION = 1
HEADER = struct.Struct(">4sBBBBII")
FLAG_NOISE = 0x01

_WS = b" \t\r\n\x0b\x0c"


class FormatError(ValueError):
    """Malformed image or container bytes."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


def _header_fields(data: bytes, count: int, pos: int):
    fields = []
    n = len(data)
    while len(fields) < count:
        while pos < n and (data[pos] in _WS or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise FormatError("truncated header", pos)
        token = data[start:pos]
        if not token.isdigit():
            raise FormatError(f"expected decimal integer, got {token!r}", start)
        fields.append(int(token))
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or data[pos] not in _WS:
        raise FormatError("missing whitespace after header", pos)
    return fields, pos + 1


def read_image(data: bytes) -> PlaneImage:
    """Decode a binary PGM (P5) or PPM (P6) with maxval 255."""
    data = bytes(data)
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FormatError(f"bad magic {magic!r}, expected P5 or P6", 0)
    (width, height, maxval), pos = _header_fields(data, 3, 2)
    if maxval != 255:
        raise FormatError(f"unsupported depth: maxval {maxval}", pos - 1)
    if width < 1 or height < 1:
        raise FormatError(f"invalid dimensions {width}x{height}", pos - 1)
    size = width * height * channels
    if len(data) - pos < size:
        raise FormatError(f"truncated payload: need {size} bytes, have {len(data) - pos}", len(data))
    raster = np.frombuffer(data, dtype=np.uint8, count=size, offset=pos)
    raster = raster.reshape(height, width, channels)
    return PlaneImage(width, height, [raster[..., i].copy() for i in range(channels)])


def write_image(img: PlaneImage) -> bytes:
    magic = {1: b"P5", 3: b"P6"}[img.channels]
    header = magic + f"\n{img.width} {img.height}\n255\n".encode("ascii")
    raster = np.stack(img.planes, axis=-1) if img.channels == 3 else img.planes[0]
    return header + np.ascontiguousarray(raster, dtype=np.uint8).tobytes()


def write_pgm(plane) -> bytes:
    plane = np.asarray(plane, dtype=np.uint8)
    return write_image(PlaneImage(plane.shape[1], plane.shape[0], [plane]))


def write_container(ct: CipherContainer) -> bytes:
    if ct.channels not in (1, 3):
        raise ValueError(f"channels must be 1 or 3, got {ct.channels}")
    flags = FLAG_NOISE if ct.noise_embedded else 0
    parts = [HEADER.pack(MAGIC, VERSION, flags, ct.channels, 0, ct.width, ct.height)]
    shape = (ct.padded_height, ct.padded_width)
    for plane in ct.planes:
        plane = np.asarray(plane, dtype=np.uint8)
        if plane.shape != shape:
            raise ValueError(f"plane shape {plane.shape} != padded shape {shape}")
        parts.append(np.ascontiguousarray(plane).tobytes())
    return b"".join(parts)


def read_container(data: bytes) -> CipherContainer:
    data = bytes(data)
    if len(data) < HEADER.size:
        raise FormatError("truncated container header", len(data))
    magic, version, flags, channels, reserved, width, height = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported container version {version}", 4)
    if flags & ~FLAG_NOISE:
        raise FormatError(f"reserved flag bits set: {flags:#04x}", 5)
    if channels not in (1, 3):
        raise FormatError(f"channels must be 1 or 3, got {channels}", 6)
    if reserved:
        raise FormatError("reserved byte must be 0", 7)
    if width < 1 or height < 1:
        raise FormatError(f"invalid dimensions {width}x{height}", 8)
    ph, pw = padded(height), padded(width)
    expected = HEADER.size + channels * ph * pw
    if len(data) != expected:
        raise FormatError(f"container size {len(data)} != expected {expected}", min(len(data), expected))
    planes = [
        np.frombuffer(data, dtype=np.uint8, count=ph * pw, offset=HEADER.size + i * ph * pw)
        .reshape(ph, pw)
        .copy()
        for i in range(channels)
    ]
    return CipherContainer(width, height, planes, noise_embedded=bool(flags & FLAG_NOISE))


def is_container(data: bytes) -> bool:
    return bytes(data[:4]) == MAGIC


def load_image(path) -> PlaneImage:
    return read_image(Path(path).read_bytes())


def save_image(img: PlaneImage, path) -> None:
    Path(path).write_bytes(write_image(img))


def load_container(path) -> CipherContainer:
    return read_container(Path(path).read_bytes())


def save_container(ct: CipherContainer, path) -> None:
    Path(path).write_bytes(write_container(ct))
