"""Deterministic image degradations used to probe watermark robustness.

All attacks keep the image size, round half away from zero and clamp to
[0, 255]. Noise attacks draw from PCG64 seeded with ``SeedSequence(seed)``, one
stream position per pixel in row-major order, so results are reproducible from
``(seed, parameters, input)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dctn, idctn

from .image import as_gray

KINDS = ("motion_blur", "jpeg", "low_pass", "crop", "gaussian_noise", "salt_pepper")

# ITU-T T.81 Annex K, table K.1
JPEG_LUMA_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.float64,
)


def round_half_away(x):
    """Round half away from zero.

    Inputs are first snapped to a 1e-9 grid so that exact ties which floating
    point lands a hair off (e.g. 127.49999999999997) still round the same way
    whatever order the arithmetic was done in.
    """
    x = np.round(np.asarray(x, dtype=np.float64), 9)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _to_u8(x) -> np.ndarray:
    return np.clip(round_half_away(x), 0, 255).astype(np.uint8)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _box_sum(img: np.ndarray, length: int, axis: int) -> np.ndarray:
    """Integer sum over a centred window of ``length`` along ``axis``, edges replicated."""
    r = length // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    p = np.pad(img.astype(np.int64), pad, mode="edge")
    n = img.shape[axis]
    out = np.zeros(img.shape, dtype=np.int64)
    for off in range(length):
        out += np.take(p, np.arange(off, off + n), axis=axis)
    return out


def _divide_round(total: np.ndarray, divisor: int) -> np.ndarray:
    # exact round-half-up of a non-negative rational total / divisor
    return np.clip((2 * total + divisor) // (2 * divisor), 0, 255).astype(np.uint8)


def motion_blur(img, length: int = 7, angle: int = 0) -> np.ndarray:
    """Uniform linear blur; ``angle`` 0 smears along rows, 90 along columns."""
    img = as_gray(img)
    if length < 1 or length % 2 == 0:
        raise ValueError(f"motion blur length must be a positive odd integer, got {length}")
    if angle not in (0, 90):
        raise ValueError(f"motion blur angle must be 0 or 90, got {angle}")
    axis = 1 if angle == 0 else 0
    return _divide_round(_box_sum(img, length, axis), length)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = max(1, math.ceil(3 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(x * x) / (2 * sigma * sigma))
    return w / w.sum()


def _correlate_axis(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    r = kernel.size // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    p = np.pad(img, pad, mode="edge")
    n = img.shape[axis]
    out = np.zeros(img.shape, dtype=np.float64)
    for off, wgt in enumerate(kernel):
        out += wgt * np.take(p, np.arange(off, off + n), axis=axis)
    return out


def low_pass(img, kernel: str = "mean3x3", sigma: float | None = None) -> np.ndarray:
    """3x3 mean filter, or a separable Gaussian truncated at 3 sigma."""
    img = as_gray(img)
    if kernel == "mean3x3":
        return _divide_round(_box_sum(_box_sum(img, 3, 0), 3, 1), 9)
    if kernel == "gaussian":
        if sigma is None or not sigma > 0:
            raise ValueError(f"gaussian low-pass needs sigma > 0, got {sigma}")
        k = _gaussian_kernel(float(sigma))
        f = img.astype(np.float64)
        return _to_u8(_correlate_axis(_correlate_axis(f, k, 0), k, 1))
    raise ValueError(f"unknown low-pass kernel {kernel!r}")


def jpeg_quant_table(quality: int) -> np.ndarray:
    """Standard luminance table scaled by the usual IJG quality rule."""
    if not 1 <= quality <= 100:
        raise ValueError(f"JPEG quality must be in [1, 100], got {quality}")
    scale = 5000 / quality if quality < 50 else 200 - 2 * quality
    return np.maximum(1.0, round_half_away(JPEG_LUMA_TABLE * scale / 100))


def jpeg_compress(img, quality: int = 75) -> np.ndarray:
    """Baseline-JPEG quantisation loss without the entropy coder."""
    img = as_gray(img)
    table = jpeg_quant_table(int(quality))
    h, w = img.shape
    ph, pw = -h % 8, -w % 8
    x = np.pad(img, ((0, ph), (0, pw)), mode="edge").astype(np.float64) - 128.0
    H, W = x.shape
    tiles = x.reshape(H // 8, 8, W // 8, 8).swapaxes(1, 2)
    coef = dctn(tiles, type=2, axes=(2, 3), norm="ortho")
    coef = round_half_away(coef / table) * table
    rec = idctn(coef, type=2, axes=(2, 3), norm="ortho")
    rec = rec.swapaxes(1, 2).reshape(H, W)[:h, :w] + 128.0
    return _to_u8(rec)


def crop_window(shape: tuple[int, int], retain: float) -> tuple[slice, slice]:
    """Centred window keeping ``retain`` of each side."""
    if not 0 < retain <= 1:
        raise ValueError(f"crop retain fraction must be in (0, 1], got {retain}")
    h, w = shape
    kh = int(round_half_away(retain * h))
    kw = int(round_half_away(retain * w))
    r0, c0 = (h - kh) // 2, (w - kw) // 2
    return slice(r0, r0 + kh), slice(c0, c0 + kw)


def crop(img, retain: float = 0.9) -> np.ndarray:
    """Zero everything outside the centred window; size is preserved."""
    img = as_gray(img)
    win = crop_window(img.shape, retain)
    out = np.zeros_like(img)
    out[win] = img[win]
    return out


def gaussian_noise(img, sigma: float = 5.0, seed: int = 0) -> np.ndarray:
    img = as_gray(img)
    if not sigma >= 0:
        raise ValueError(f"noise sigma must be >= 0, got {sigma}")
    noise = _rng(seed).standard_normal(img.size).reshape(img.shape)
    return _to_u8(img + sigma * noise)


def salt_pepper(img, density: float = 0.05, seed: int = 0) -> np.ndarray:
    """Each pixel becomes 0 or 255 (even odds) with probability ``density``."""
    img = as_gray(img)
    if not 0 <= density <= 1:
        raise ValueError(f"salt & pepper density must be in [0, 1], got {density}")
    rng = _rng(seed)
    hit = rng.random(img.size).reshape(img.shape) < density
    salt = rng.random(img.size).reshape(img.shape) < 0.5
    out = img.copy()
    out[hit] = np.where(salt[hit], 255, 0)
    return out


# ---------------------------------------------------------------------------
# Attack specifications

DEFAULT_PARAMS = {
    "motion_blur": {"length": 7, "angle": 0},
    "jpeg": {"quality": 75},
    "low_pass": {"kernel": "mean3x3"},
    "crop": {"retain": 0.9},
    "gaussian_noise": {"sigma": 5.0},
    "salt_pepper": {"density": 0.05},
}

_PARAM_TYPES = {
    "length": int,
    "angle": int,
    "quality": int,
    "kernel": str,
    "sigma": float,
    "retain": float,
    "density": float,
}

_FUNCS = {
    "motion_blur": motion_blur,
    "jpeg": jpeg_compress,
    "low_pass": low_pass,
    "crop": crop,
    "gaussian_noise": gaussian_noise,
    "salt_pepper": salt_pepper,
}

STOCHASTIC = ("gaussian_noise", "salt_pepper")


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _FUNCS:
            raise ValueError(f"unknown attack {self.kind!r}; choose from {', '.join(KINDS)}")
        allowed = set(DEFAULT_PARAMS[self.kind]) | ({"sigma"} if self.kind == "low_pass" else set())
        extra = set(self.params) - allowed
        if extra:
            raise ValueError(f"{self.kind} does not take {', '.join(sorted(extra))}")

    @classmethod
    def default(cls, kind: str) -> "AttackSpec":
        return cls(kind, dict(DEFAULT_PARAMS[kind]))

    def resolved(self) -> dict:
        return {**DEFAULT_PARAMS[self.kind], **self.params}

    def apply(self, img, seed: int = 0) -> np.ndarray:
        kw = self.resolved()
        if self.kind in STOCHASTIC:
            kw["seed"] = seed
        return _FUNCS[self.kind](img, **kw)

    def to_line(self) -> str:
        return " ".join([self.kind] + [f"{k}={v}" for k, v in self.resolved().items()])

    @classmethod
    def from_line(cls, line: str) -> "AttackSpec":
        parts = line.split()
        if not parts:
            raise ValueError("empty attack line")
        params = {}
        for tok in parts[1:]:
            key, sep, val = tok.partition("=")
            if not sep or key not in _PARAM_TYPES:
                raise ValueError(f"bad attack parameter {tok!r}")
            params[key] = _PARAM_TYPES[key](val)
        return cls(parts[0], params)


def default_profile() -> list[AttackSpec]:
    return [AttackSpec.default(k) for k in KINDS]
