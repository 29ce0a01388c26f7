"""Regenerate the bundled 512x512 test pair from scikit-image's sample data.

asset.pgm      grayscale of skimage.data.astronaut() (ITU-R 601 luma, rounded)
watermark.pgm  skimage.data.camera() (the classic cameraman)
"""
from pathlib import Path

import numpy as np
from skimage import data

from ssimmark.image import save_pgm

OUT = Path(__file__).resolve().parents[1] / "src" / "ssimmark" / "data"

rgb = data.astronaut().astype(np.float64)
luma = rgb @ np.array([0.299, 0.587, 0.114])
asset = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)

save_pgm(asset, OUT / "asset.pgm")
save_pgm(data.camera(), OUT / "watermark.pgm")
print("wrote", OUT)
