"""Plain (non-adaptive) LSB watermarking at a fixed depth.

``lsb_embed`` replaces the ``n`` least significant planes of the asset with the
``n`` most significant planes of the watermark:

    W = (A & ~(2**n - 1)) | (B >> (8 - n))
"""
from __future__ import annotations

import numpy as np

from .image import as_gray, check_same_shape


def _check_depth(n: int) -> int:
    n = int(n)
    if not 0 <= n <= 8:
        raise ValueError(f"embedding depth must be in [0, 8], got {n}")
    return n


def lsb_embed(a, b, n: int) -> np.ndarray:
    a = as_gray(a, "asset")
    b = as_gray(b, "watermark")
    check_same_shape(a, b)
    n = _check_depth(n)
    if n == 0:
        return a.copy()
    low = np.uint8((1 << n) - 1)
    return (a & ~low) | (b >> np.uint8(8 - n))


def fill_unknown(top: np.ndarray, n: int) -> np.ndarray:
    """Midpoint fill: set the highest unknown plane (7 - n) when ``n < 8``."""
    if n < 8:
        return top | np.uint8(1 << (7 - n))
    return top


def lsb_extract(w, n: int) -> np.ndarray:
    """Rebuild the watermark from the ``n`` low planes of ``w``.

    The recovered bits become the top ``n`` planes; the missing planes get the
    midpoint pattern (a single 1 right below the recovered bits).
    """
    w = as_gray(w, "watermarked")
    n = _check_depth(n)
    if n == 0:
        raise ValueError("nothing to extract at depth 0")
    low = np.uint8((1 << n) - 1)
    top = ((w & low).astype(np.uint16) << (8 - n)).astype(np.uint8)
    return fill_unknown(top, n)


def lsb_payload(b, n: int) -> np.ndarray:
    """Bits placed by ``lsb_embed``: planes 7..8-n of ``b`` per pixel, MSB first.

    Shape ``(height, width, n)``; the flattened C-order sequence is the
    baseline's ground-truth payload.
    """
    b = as_gray(b, "watermark")
    n = _check_depth(n)
    planes = [(b >> np.uint8(7 - j)) & np.uint8(1) for j in range(n)]
    return np.stack(planes, axis=-1) if planes else np.zeros(b.shape + (0,), np.uint8)


def lsb_read(w, n: int) -> np.ndarray:
    """Bits stored in the ``n`` low planes of ``w`` in ``lsb_payload`` order."""
    w = as_gray(w, "watermarked")
    n = _check_depth(n)
    planes = [(w >> np.uint8(n - 1 - j)) & np.uint8(1) for j in range(n)]
    return np.stack(planes, axis=-1) if planes else np.zeros(w.shape + (0,), np.uint8)
