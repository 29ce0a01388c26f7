"""Block SSIM on the bundled test pair.

The embedder never looks at a sliding-window SSIM map: it scores whole 11x11
blocks. This walk-through shows what those block scores look like for the
asset against itself, against the watermark image, and against a few
degraded versions of itself.
"""
import numpy as np

from ssimmark import data
from ssimmark.attacks import gaussian_noise, jpeg_compress, motion_blur
from ssimmark.ssim import block_ssim, block_stats, local_ssim, mean_ssim

asset, mark = data.standard_pair()

# %% Two hand-made blocks
flat = np.full((11, 11), 128)
ramp = np.add.outer(np.arange(11), np.arange(11)) * 10
print("flat vs flat      ", local_ssim(flat, flat))
print("black vs white    ", local_ssim(np.zeros((11, 11)), np.full((11, 11), 255)))
print("ramp vs inverse   ", local_ssim(ramp, 255 - ramp))
print("ramp stats        ", block_stats(ramp, ramp + 20))

# %% Whole images
print()
print("asset vs asset     ", mean_ssim(asset, asset))
print("asset vs watermark ", mean_ssim(asset, mark))
for name, img in [
    ("jpeg q=75", jpeg_compress(asset, 75)),
    ("motion blur 7", motion_blur(asset, 7)),
    ("noise sigma=5", gaussian_noise(asset, 5.0, seed=0)),
]:
    print(f"asset vs {name:14s}", round(mean_ssim(asset, img), 4))

# %% How many blocks would each thr1 gate let through?
scores = block_ssim(asset, mark)
for thr1 in (0.0, 0.2, 0.4, 0.6, 0.8):
    print(f"thr1={thr1:.1f}: {np.count_nonzero(scores > thr1):4d} of {scores.size} blocks gated")
