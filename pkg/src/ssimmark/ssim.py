"""Block-aligned structural similarity.

The luminance, contrast and structure comparisons are evaluated on a uniform
window equal to the whole block (no Gaussian weighting, no sliding), with the
unbiased ``n - 1`` divisor for variances and covariance. Exponents are fixed at
one, so the local index is the plain product ``l * c * s``.

Every term is written in a symmetric form (``2*mx*my``, ``vx + vy``, ...) so
``local_ssim(x, y) == local_ssim(y, x)`` holds bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .image import DEFAULT_BLOCK, as_gray, block_grid, check_same_shape

_K1, _K2, _L = 0.01, 0.03, 255.0


@dataclass(frozen=True)
class SsimParams:
    C1: float = (_K1 * _L) ** 2
    C2: float = (_K2 * _L) ** 2
    C3: float = (_K2 * _L) ** 2 / 2
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    k: int = DEFAULT_BLOCK

    def __post_init__(self):
        if not (self.C1 > 0 and self.C2 > 0 and self.C3 > 0):
            raise ValueError("SSIM stabilizing constants must be positive")
        if (self.alpha, self.beta, self.gamma) != (1.0, 1.0, 1.0):
            raise ValueError("only unit exponents are supported")
        if self.k < 1:
            raise ValueError(f"block size must be >= 1, got {self.k}")


DEFAULT_PARAMS = SsimParams()


@dataclass(frozen=True)
class BlockStats:
    mean_x: float
    mean_y: float
    std_x: float
    std_y: float
    cov_xy: float


def _moments(x: np.ndarray, y: np.ndarray):
    """Means, unbiased variances and covariance over the last two axes."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"block shapes differ: {x.shape} vs {y.shape}")
    n = x.shape[-1] * x.shape[-2]
    mx = x.sum(axis=(-2, -1)) / n
    my = y.sum(axis=(-2, -1)) / n
    dx = x - mx[..., None, None]
    dy = y - my[..., None, None]
    ddof = n - 1 if n > 1 else 1
    vx = (dx * dx).sum(axis=(-2, -1)) / ddof
    vy = (dy * dy).sum(axis=(-2, -1)) / ddof
    cxy = (dx * dy).sum(axis=(-2, -1)) / ddof
    return mx, my, vx, vy, cxy


def block_stats(x, y) -> BlockStats:
    mx, my, vx, vy, cxy = _moments(x, y)
    return BlockStats(float(mx), float(my), float(np.sqrt(vx)), float(np.sqrt(vy)), float(cxy))


def ssim_components(x, y, p: SsimParams = DEFAULT_PARAMS):
    """Luminance, contrast and structure terms, vectorised over leading axes."""
    mx, my, vx, vy, cxy = _moments(x, y)
    sxsy = np.sqrt(vx) * np.sqrt(vy)
    lum = (2.0 * mx * my + p.C1) / (mx * mx + my * my + p.C1)
    con = (2.0 * sxsy + p.C2) / (vx + vy + p.C2)
    struct = (cxy + p.C3) / (sxsy + p.C3)
    return lum, con, struct


def local_ssim(x, y, p: SsimParams = DEFAULT_PARAMS):
    """SSIM of two equally shaped blocks.

    Also accepts stacks of blocks with shape ``(..., k, k)`` and returns one
    score per block. Scalars come back as Python floats.
    """
    lum, con, struct = ssim_components(x, y, p)
    out = lum * con * struct
    return float(out) if np.ndim(out) == 0 else out


def block_ssim(a, b, p: SsimParams = DEFAULT_PARAMS) -> np.ndarray:
    """Per-block SSIM scores of two images, in block-index order."""
    a = as_gray(a, "a")
    b = as_gray(b, "b")
    check_same_shape(a, b)
    grid = block_grid(a, p.k)
    return local_ssim(grid.stack(a), grid.stack(b), p)


def mean_ssim(a, b, p: SsimParams = DEFAULT_PARAMS) -> float:
    """Arithmetic mean of the local SSIM over every full block."""
    scores = block_ssim(a, b, p)
    return float(np.mean(scores))
