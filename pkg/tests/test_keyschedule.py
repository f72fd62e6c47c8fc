import json
from pathlib import Path

import numpy as np
import pytest

from lsic.keyschedule import (
    Key256,
    derive_schedule,
    kdsg,
    prng_next,
    subkey_div,
)
from lsic.latin import validate

from .helpers import K1_HEX, K2_HEX, K3_HEX

DATA = Path(__file__).parent / "data"

# frozen from numpy uint64 wraparound and cross-checked with 32-bit limb products
PRNG_TWICE_FROM_ZERO = 1876011003808476466


def _lcg_numpy(states: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return states * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)


def test_prng_next_known_answers():
    assert prng_next(0) == 1442695040888963407
    assert prng_next(prng_next(0)) == PRNG_TWICE_FROM_ZERO
    assert prng_next(12345) == prng_next(12345)


def test_prng_next_matches_numpy_wraparound(rng):
    seeds = rng.integers(0, 2**63, 200, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    expect = _lcg_numpy(seeds)
    assert [prng_next(int(s)) for s in seeds] == [int(v) for v in expect]


def test_subkey_div():
    assert subkey_div(Key256(bytes(32))) == (0,) * 8
    assert subkey_div(Key256(b"\x00\x00\x00\x01" * 8)) == (1,) * 8
    ks = subkey_div(Key256.from_hex(K1_HEX))
    assert ks[0] == 0xB9B5ED75
    assert b"".join(k.to_bytes(4, "big") for k in ks).hex().upper() == K1_HEX


def test_key_hex_parsing():
    k = Key256.from_hex(K1_HEX.lower())
    assert k.hex() == K1_HEX
    with pytest.raises(ValueError):
        Key256.from_hex("AB" * 31)
    with pytest.raises(ValueError):
        Key256.from_hex("ZZ" * 32)
    with pytest.raises(ValueError):
        Key256(bytes(31))


def test_flip_bit_numbering():
    k1, k2, k3 = (Key256.from_hex(h) for h in (K1_HEX, K2_HEX, K3_HEX))
    assert k1.flip_bit(255) == k2
    assert k2.flip_bit(0) == k3
    assert k1.flip_bit(17).flip_bit(17) == k1


def test_generate_is_random():
    assert Key256.generate() != Key256.generate()


def test_kdsg_shape():
    pairs = kdsg(Key256(bytes(32)), 8)
    assert len(pairs) == 9
    for p in pairs:
        assert p.q1.shape == (256,) and p.q2.shape == (256,)
        assert p.q1.dtype == np.uint64


def test_kdsg_zero_key_golden():
    golden = json.loads((DATA / "kdsg_zero_m0.json").read_text())
    (pair,) = kdsg(Key256(bytes(32)), 0)
    assert [int(v) for v in pair.q1] == golden["q1"]
    assert [int(v) for v in pair.q2] == golden["q2"]


def _kdsg_oracle(key: bytes, m: int):
    # vectorised over the eight subkey streams
    out = []
    for _ in range(m + 1):
        k = np.frombuffer(key, dtype=">u4").astype(np.uint64)
        streams = np.empty((8, 64), dtype=np.uint64)
        cur = _lcg_numpy(k)
        for j in range(64):
            streams[:, j] = cur
            cur = _lcg_numpy(cur)
        out.append((streams[:, :32].ravel(), streams[:, 32:].ravel()))
        key = (streams[:, 63] & np.uint64(0xFFFFFFFF)).astype(">u4").tobytes()
    return out


def test_kdsg_matches_oracle(rng):
    for _ in range(5):
        key = rng.bytes(32)
        for (q1, q2), pair in zip(_kdsg_oracle(key, 8), kdsg(Key256(key), 8)):
            assert np.array_equal(q1, pair.q1)
            assert np.array_equal(q2, pair.q2)


def test_kdsg_one_bit_key_change_hits_affected_stream():
    a = kdsg(Key256.from_hex(K1_HEX), 0)[0]
    b = kdsg(Key256.from_hex(K2_HEX), 0)[0]
    # last bit sits in subkey 7, whose stream fills q1[224:256] and q2[224:256]
    assert np.array_equal(a.q1[:224], b.q1[:224])
    assert (a.q1[224:] != b.q1[224:]).any()
    assert (a.q2[224:] != b.q2[224:]).any()


def test_schedule_structure(zero_schedule):
    assert len(zero_schedule.squares) == 9
    for L, d in zip(zero_schedule.squares, zero_schedule.rotations):
        assert L.order == 256
        assert validate(L)
        assert d == L.cells[0, 0]


def test_schedule_deterministic(zero_key, zero_schedule):
    assert derive_schedule(zero_key) == zero_schedule
    assert derive_schedule(zero_key.data) == zero_schedule


def test_schedule_one_bit_keys_differ():
    s1 = derive_schedule(Key256.from_hex(K1_HEX))
    s2 = derive_schedule(Key256.from_hex(K2_HEX))
    assert s1 != s2
    assert all(not np.array_equal(a.cells, b.cells) for a, b in zip(s1.squares, s2.squares))


def test_schedule_valid_for_random_keys(rng):
    for _ in range(100):
        s = derive_schedule(Key256(rng.bytes(32)))
        assert all(validate(L) for L in s.squares)


def test_schedule_avalanche(rng):
    # fraction of equal cells between L_0 squares of keys one bit apart
    agree = []
    for _ in range(100):
        key = Key256(rng.bytes(32))
        other = key.flip_bit(int(rng.integers(256)))
        a = derive_schedule(key).squares[0].cells
        b = derive_schedule(other).squares[0].cells
        agree.append(np.mean(a == b))
    assert np.mean(agree) < 0.02
