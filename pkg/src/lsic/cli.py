"""Command line entry point: ``lsic <command> [options]``.

Exit status is 0 on success, 1 for usage errors (bad flags, malformed
keys) and 2 for data errors (unreadable files, malformed images or
containers).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .cipher import EncryptOptions, decrypt_image, encrypt_image
from .imageio import (
    FormatError,
    is_container,
    read_container,
    read_image,
    write_container,
    write_image,
    write_pgm,
)
from .keyschedule import Key256


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _key(text: str) -> Key256:
    try:
        return Key256.from_hex(text)
    except ValueError as exc:
        raise UsageError(f"invalid key: {exc}") from None


def _pixel(text: str) -> tuple[int, int]:
    try:
        r, c = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--pixel expects 'row,col', got {text!r}") from None
    return r, c


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _write(path, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _planes(path):
    """Planes of a netpbm image, or the padded planes of a container."""
    data = _read(path)
    try:
        if is_container(data):
            return read_container(data).planes
        return read_image(data).planes
    except FormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def _image(path):
    try:
        return read_image(_read(path))
    except FormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def _gray(path) -> np.ndarray:
    img = _image(path)
    if img.channels != 1:
        raise DataError(f"{path}: experiments need a grayscale (P5) image")
    return img.planes[0]


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


def cmd_keygen(args):
    print(Key256.generate().hex())


def cmd_encrypt(args):
    key = _key(args.key)
    img = _image(args.inp)
    opts = EncryptOptions(embed_noise=not args.no_noise, noise_seed=args.noise_seed)
    ct = encrypt_image(img, key, opts, workers=_threads(args))
    _write(args.out, write_container(ct))


def cmd_decrypt(args):
    key = _key(args.key)
    try:
        ct = read_container(_read(args.inp))
    except FormatError as exc:
        raise DataError(f"{args.inp}: {exc}") from None
    img = decrypt_image(ct, key, workers=_threads(args))
    _write(args.out, write_image(img))


def cmd_analyze(args):
    planes = _planes(args.inp)
    others = _planes(args.pair) if args.pair else None
    if others is not None and (len(others) != len(planes) or others[0].shape != planes[0].shape):
        raise DataError(f"{args.pair}: shape does not match {args.inp}")
    reports = [
        analysis.analyze(p, None if others is None else others[i]).to_dict()
        for i, p in enumerate(planes)
    ]
    if args.diff_out and others is not None:
        _write(args.diff_out, write_pgm(analysis.difference_image(planes[0], others[0])))
    _emit(reports[0] if len(reports) == 1 else {"channels": reports})


def cmd_diffuse(args):
    key = _key(args.key)
    r, c = _pixel(args.pixel)
    P = _gray(args.inp)
    if not (0 <= r < P.shape[0] and 0 <= c < P.shape[1]):
        raise UsageError(f"--pixel {r},{c} outside {P.shape[0]}x{P.shape[1]} image")
    n, u = analysis.diffusion_experiment(P, key, (r, c), args.delta)
    _emit({"npcr": n, "uaci": u, "pixel": [r, c], "delta": args.delta,
           "key_fingerprint": analysis.key_fingerprint(key)})


def cmd_keysense(args):
    key = _key(args.key)
    if not 0 <= args.bit < 256:
        raise UsageError("--bit must lie in [0, 256)")
    rep = analysis.key_sensitivity_experiment(_gray(args.inp), key, args.bit)
    _emit(rep.to_dict())


def cmd_noisetest(args):
    key = _key(args.key)
    if not 0.0 <= args.ratio <= 1.0:
        raise UsageError("--ratio must lie in [0, 1]")
    rep = analysis.noise_robustness_experiment(_gray(args.inp), key, args.ratio, args.seed)
    _emit(rep.to_dict())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lsic", description="Latin square image cipher")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("keygen", help="print a random 256-bit key as hex").set_defaults(func=cmd_keygen)

    def keyed(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--key", required=True, help="64 hex characters")
        sp.add_argument("--in", dest="inp", required=True)
        return sp

    sp = keyed("encrypt", "encrypt a PGM/PPM image into a container")
    sp.add_argument("--out", required=True)
    sp.add_argument("--no-noise", action="store_true", help="disable LSB noise (deterministic output)")
    sp.add_argument("--noise-seed", type=int, default=None)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_encrypt)

    sp = keyed("decrypt", "decrypt a container into a PGM/PPM image")
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("analyze", help="entropy, correlation and histogram report")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--pair", default=None, help="second image for NPCR/UACI")
    sp.add_argument("--diff-out", default=None, help="write |a - b| as PGM")
    sp.set_defaults(func=cmd_analyze)

    sp = keyed("diffuse", "NPCR/UACI after changing one plaintext pixel")
    sp.add_argument("--pixel", required=True, help="row,col")
    sp.add_argument("--delta", type=int, default=1)
    sp.set_defaults(func=cmd_diffuse)

    sp = keyed("keysense", "ciphertext change after flipping one key bit")
    sp.add_argument("--bit", type=int, required=True)
    sp.set_defaults(func=cmd_keysense)

    sp = keyed("noisetest", "decryption damage from corrupted ciphertext bytes")
    sp.add_argument("--ratio", type=float, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_noisetest)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
