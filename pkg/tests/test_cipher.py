import numpy as np
import pytest

from lsic import primitives as prim
from lsic.analysis import npcr
from lsic.cipher import (
    CipherContainer,
    EncryptOptions,
    NoiseSource,
    PlaneImage,
    decrypt_block,
    decrypt_image,
    encrypt_block,
    encrypt_image,
    lsb_noise_embed,
)
from lsic.keyschedule import Key256

from .helpers import random_block

OFF = EncryptOptions(embed_noise=False)


def reference_encrypt(P, schedule):
    # straight transcription of the round structure, one stage per line
    X = P
    for n in range(8):
        L, D = schedule.squares[n], schedule.rotations[n]
        X = prim.whiten_encrypt(L, X, D)
        X = prim.lscs_encrypt(L, X) if n % 2 != 0 else prim.lsrs_encrypt(L, X)
        X = prim.lsp_encrypt(L, X)
    return prim.whiten_encrypt(schedule.squares[8], X, schedule.rotations[8])


def test_block_matches_reference(rng, zero_schedule):
    P = random_block(rng)
    assert np.array_equal(encrypt_block(P, zero_schedule, OFF), reference_encrypt(P, zero_schedule))


def test_block_round_trip(rng, zero_schedule, k1_schedule):
    for schedule in (zero_schedule, k1_schedule):
        for _ in range(3):
            P = random_block(rng)
            assert np.array_equal(decrypt_block(encrypt_block(P, schedule, OFF), schedule), P)


def test_block_rejects_wrong_shape(zero_schedule):
    with pytest.raises(ValueError):
        encrypt_block(np.zeros((128, 256), np.uint8), zero_schedule, OFF)
    with pytest.raises(ValueError):
        decrypt_block(np.zeros((256, 255), np.uint8), zero_schedule)


def test_noise_changes_only_lsb(rng):
    P = random_block(rng)
    Q = lsb_noise_embed(P, NoiseSource(3))
    assert ((Q ^ P) & 0xFE == 0).all()
    assert 0.45 < np.mean(Q != P) < 0.55


def test_noise_is_involution_with_same_seed(rng):
    P = random_block(rng)
    assert np.array_equal(lsb_noise_embed(lsb_noise_embed(P, NoiseSource(9)), NoiseSource(9)), P)


def test_noise_seeded_stream_is_chunk_independent():
    a = NoiseSource(42).bits(70000)
    src = NoiseSource(42)
    b = np.concatenate([src.bits(5), src.bits(300), src.bits(69695)])
    assert np.array_equal(a, b)
    assert abs(a.mean() - 0.5) < 0.01


def test_noise_unseeded_differs():
    assert not np.array_equal(NoiseSource().bits(4096), NoiseSource().bits(4096))


def test_noise_makes_encryption_probabilistic(rng, zero_schedule):
    P = random_block(rng)
    C1 = encrypt_block(P, zero_schedule)
    C2 = encrypt_block(P, zero_schedule)
    assert not np.array_equal(C1, C2)
    D = decrypt_block(C1, zero_schedule)
    assert ((D ^ P) & 0xFE == 0).all()


def test_seeded_noise_is_deterministic(rng, zero_schedule):
    P = random_block(rng)
    opts = EncryptOptions(noise_seed=11)
    assert np.array_equal(encrypt_block(P, zero_schedule, opts), encrypt_block(P, zero_schedule, opts))


def test_single_pixel_diffusion(rng, zero_schedule):
    P = random_block(rng)
    P2 = P.copy()
    P2[128, 64] ^= 1
    score = npcr(encrypt_block(P, zero_schedule, OFF), encrypt_block(P2, zero_schedule, OFF))
    assert 99.5 <= score <= 99.75


def test_ciphertext_corruption_spreads_at_most_256(rng, zero_schedule):
    P = random_block(rng)
    C = encrypt_block(P, zero_schedule, OFF)
    for _ in range(10):
        C2 = C.copy()
        r, c = rng.integers(256, size=2)
        C2[r, c] ^= int(rng.integers(1, 256))
        assert np.count_nonzero(decrypt_block(C2, zero_schedule) != P) <= 256


@pytest.mark.parametrize("w, h", [(512, 512), (300, 200), (1, 1)])
def test_image_shapes(rng, zero_key, w, h):
    img = PlaneImage.from_array(rng.integers(0, 256, (h, w), dtype=np.uint8))
    ct = encrypt_image(img, zero_key, OFF)
    pw, ph = -(-w // 256) * 256, -(-h // 256) * 256
    assert ct.planes[0].shape == (ph, pw)
    assert (ct.width, ct.height) == (w, h)
    assert decrypt_image(ct, zero_key) == img


def test_color_planes_use_same_schedule(rng, zero_key):
    plane = rng.integers(0, 256, (256, 256), dtype=np.uint8)
    img = PlaneImage(256, 256, [plane, plane, plane])
    ct = encrypt_image(img, zero_key, OFF)
    assert ct.channels == 3
    assert np.array_equal(ct.planes[0], ct.planes[1]) and np.array_equal(ct.planes[1], ct.planes[2])
    assert decrypt_image(ct, zero_key) == img


def test_padding_is_zero_filled(zero_key, zero_schedule):
    img = PlaneImage.from_array(np.full((10, 10), 200, np.uint8))
    ct = encrypt_image(img, zero_key, OFF)
    full = np.zeros((256, 256), np.uint8)
    full[:10, :10] = 200
    assert np.array_equal(ct.planes[0], encrypt_block(full, zero_schedule, OFF))


def test_tile_independence(rng, zero_key):
    arr = rng.integers(0, 256, (256, 512), dtype=np.uint8)
    ct1 = encrypt_image(PlaneImage.from_array(arr), zero_key, OFF)
    arr[5, 5] ^= 1
    ct2 = encrypt_image(PlaneImage.from_array(arr), zero_key, OFF)
    assert np.array_equal(ct1.planes[0][:, 256:], ct2.planes[0][:, 256:])
    assert not np.array_equal(ct1.planes[0][:, :256], ct2.planes[0][:, :256])


def test_noise_round_trip_on_image(rng, zero_key):
    img = PlaneImage.from_array(rng.integers(0, 256, (300, 260, 3), dtype=np.uint8))
    ct = encrypt_image(img, zero_key)
    assert ct.noise_embedded
    out = decrypt_image(ct, zero_key)
    for a, b in zip(out.planes, img.planes):
        assert ((a ^ b) & 0xFE == 0).all()


def test_seeded_noise_differs_between_tiles(zero_key):
    img = PlaneImage.from_array(np.zeros((256, 512), np.uint8))
    ct = encrypt_image(img, zero_key, EncryptOptions(noise_seed=1))
    assert not np.array_equal(ct.planes[0][:, :256], ct.planes[0][:, 256:])


@pytest.mark.parametrize("opts", [OFF, EncryptOptions(noise_seed=5)])
def test_workers_do_not_change_output(rng, zero_key, opts):
    img = PlaneImage.from_array(rng.integers(0, 256, (512, 512), dtype=np.uint8))
    a = encrypt_image(img, zero_key, opts, workers=1)
    b = encrypt_image(img, zero_key, opts, workers=4)
    assert a == b
    assert decrypt_image(a, zero_key, workers=3) == decrypt_image(a, zero_key)


def test_wrong_key_is_not_detected(rng, zero_key):
    img = PlaneImage.from_array(rng.integers(0, 256, (256, 256), dtype=np.uint8))
    ct = encrypt_image(img, zero_key, OFF)
    out = decrypt_image(ct, zero_key.flip_bit(3))
    assert out != img


def test_key_forms_are_interchangeable(rng, zero_key, zero_schedule):
    img = PlaneImage.from_array(rng.integers(0, 256, (20, 20), dtype=np.uint8))
    ref = encrypt_image(img, zero_key, OFF)
    assert encrypt_image(img, bytes(32), OFF) == ref
    assert encrypt_image(img, "00" * 32, OFF) == ref
    assert encrypt_image(img, zero_schedule, OFF) == ref


def test_plane_image_validation():
    with pytest.raises(ValueError):
        PlaneImage(0, 5, [np.zeros((5, 0), np.uint8)])
    with pytest.raises(ValueError):
        PlaneImage(2, 2, [np.zeros((2, 2))] * 2)
    with pytest.raises(ValueError):
        PlaneImage(2, 2, [np.zeros((3, 2))])
    img = PlaneImage(2, 2, [np.arange(4)])
    assert img.planes[0].tolist() == [[0, 1], [2, 3]]


def test_decrypt_rejects_bad_plane_shape(zero_key):
    with pytest.raises(ValueError):
        decrypt_image(CipherContainer(300, 200, [np.zeros((256, 256), np.uint8)]), zero_key)


def test_key_material_types(zero_schedule):
    with pytest.raises(ValueError):
        encrypt_image(PlaneImage.from_array(np.zeros((2, 2), np.uint8)), b"short", OFF)
    assert Key256(bytes(32)) == Key256(bytearray(32))
