# Statistical checks on ciphertexts: entropy, correlation, diffusion, key and noise sensitivity.
import numpy as np
from skimage import data

from lsic import analysis as an
from lsic import EncryptOptions, Key256, PlaneImage, encrypt_image

key = Key256.generate()
P = data.camera()

# %% histogram flatness and neighbour correlation, before and after
C = encrypt_image(PlaneImage.from_array(P), key, EncryptOptions(embed_noise=False)).planes[0]
for name, X in (("plain", P), ("cipher", C)):
    rep = an.analyze(X)
    print(f"{name:6s} entropy {rep.entropy:.5f}  apc h/v/d {rep.apc_h:+.4f} {rep.apc_v:+.4f} {rep.apc_d:+.4f}")

# %% changing one pixel by one
# tiles are encrypted independently, so on a 512 x 512 image only the
# touched quarter changes; inside that tile the change reaches nearly every pixel
n, u = an.diffusion_experiment(P, key, (100, 200), delta=1)
print(f"whole image NPCR {n:.4f}  UACI {u:.4f}")
n, u = an.diffusion_experiment(P[:256, :256], key, (100, 200), delta=1)
print(f"one tile    NPCR {n:.4f} (ideal {an.IDEAL_NPCR:.4f})  UACI {u:.4f} (ideal {an.IDEAL_UACI:.4f})")

# %% flipping one key bit
rep = an.key_sensitivity_experiment(P, key, bit=100)
print(f"key bit 100: NPCR {rep.npcr:.4f}, wrong-key decryption entropy {rep.wrong_key_entropy:.4f}")

# %% corrupting ciphertext bytes: damage stays bounded and local
for ratio in (1 / 65536, 0.001, 0.01):
    rep = an.noise_robustness_experiment(P, key, ratio, seed=0)
    print(f"{rep.corrupted:5d} bytes hit -> {rep.differing:6d} pixels differ (bound {rep.bound})")

# %% speed of this numpy implementation
t = an.throughput()
print(f"encrypt {t['encrypt_mbps']:.2f} Mb/s, decrypt {t['decrypt_mbps']:.2f} Mb/s")
