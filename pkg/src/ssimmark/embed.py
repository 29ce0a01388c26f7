"""SSIM-gated adaptive LSB embedding and the watermark key.

For each block the asset/watermark similarity decides whether the block takes
any payload at all (``thr1``). A gated block is deepened one bit at a time: at
depth ``j`` the block holds the plain LSB embedding of depth ``j``, i.e. its
``j`` low planes carry the ``j`` most significant planes of the watermark
block. After every step the asset/output similarity is recomputed and the
block is only deepened while it stays strictly above ``thr2``. The step that
pushes the block to or below ``thr2`` is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, KeyFormatError
from .image import DEFAULT_BLOCK, BlockGrid, as_gray, block_grid, check_same_shape
from .ssim import DEFAULT_PARAMS, SsimParams, local_ssim, mean_ssim

MAX_DEPTH = 8
KEY_MAGIC = "SSIMMARK"
KEY_VERSION = 1


@dataclass(frozen=True)
class EmbedConfig:
    thr1: float = 0.8
    thr2: float = 0.75
    k: int = DEFAULT_BLOCK
    ssim: SsimParams = DEFAULT_PARAMS

    def __post_init__(self):
        if not -1.0 < self.thr2 <= 1.0:
            raise ValueError(f"thr2 must lie in (-1, 1], got {self.thr2}")
        if math.isnan(self.thr1):
            raise ValueError("thr1 must be a number")
        if self.k < 1:
            raise ValueError(f"block size must be >= 1, got {self.k}")


@dataclass(frozen=True)
class WatermarkKey:
    """Per-block embedding depths; the secret needed to locate the payload."""

    width: int
    height: int
    k: int
    thr1: float
    thr2: float
    depths: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.width < self.k or self.height < self.k:
            raise KeyFormatError(f"key geometry {self.width}x{self.height}, k={self.k} is invalid")
        if len(self.depths) != self.rows * self.cols:
            raise KeyFormatError(f"key holds {len(self.depths)} depths, grid needs {self.rows * self.cols}")
        if any(not 0 <= d <= MAX_DEPTH for d in self.depths):
            raise KeyFormatError("key depths must lie in [0, 8]")

    @property
    def rows(self) -> int:
        return self.height // self.k

    @property
    def cols(self) -> int:
        return self.width // self.k

    @property
    def grid(self) -> BlockGrid:
        return BlockGrid(self.k, self.rows, self.cols)

    @property
    def payload_bits(self) -> int:
        return self.k * self.k * sum(self.depths)

    def depth_array(self) -> np.ndarray:
        return np.array(self.depths, dtype=np.int64)

    def check_image(self, img: np.ndarray) -> None:
        if img.shape != (self.height, self.width):
            raise DimensionMismatchError(
                f"image is {img.shape[1]}x{img.shape[0]}, key expects {self.width}x{self.height}"
            )


@dataclass(frozen=True)
class EmbedReport:
    key: WatermarkKey
    capacity_bits: int
    gated_blocks: int
    mean_ssim_aw: float


def layer(a_blk: np.ndarray, b_blk: np.ndarray, depth: int) -> np.ndarray:
    """Block content at ``depth``: ``(A & ~(2**depth - 1)) | (B >> (8 - depth))``."""
    if depth == 0:
        return a_blk.copy()
    low = np.uint8((1 << depth) - 1)
    return (a_blk & ~low) | (b_blk >> np.uint8(8 - depth))


def plan_block(a_blk, b_blk, w_blk: np.ndarray, cfg: EmbedConfig = EmbedConfig()) -> int:
    """Embed into one block, in place on ``w_blk``, and return its depth.

    ``w_blk`` is expected to start as a copy of ``a_blk``.
    """
    a_blk = np.asarray(a_blk)
    b_blk = np.asarray(b_blk)
    if not (a_blk.shape == b_blk.shape == w_blk.shape):
        raise DimensionMismatchError("block shapes differ")
    if not local_ssim(a_blk, b_blk, cfg.ssim) > cfg.thr1:
        return 0
    depth = 0
    while depth < MAX_DEPTH:
        depth += 1
        w_blk[...] = layer(a_blk, b_blk, depth)
        if not local_ssim(a_blk, w_blk, cfg.ssim) > cfg.thr2:
            break
    return depth


def embed(a, b, cfg: EmbedConfig = EmbedConfig()) -> tuple[np.ndarray, EmbedReport]:
    """Adaptive embedding of watermark ``b`` into asset ``a``.

    All blocks are advanced one bit plane at a time together; the result is
    identical to calling :func:`plan_block` on each block in index order.
    """
    a = as_gray(a, "asset")
    b = as_gray(b, "watermark")
    check_same_shape(a, b)
    grid = block_grid(a, cfg.k)

    a_st = grid.stack(a)
    b_st = grid.stack(b)
    w_st = a_st.copy()
    gate = local_ssim(a_st, b_st, cfg.ssim) > cfg.thr1
    depths = np.zeros(grid.count, dtype=np.int64)

    active = np.flatnonzero(gate)
    for j in range(1, MAX_DEPTH + 1):
        if active.size == 0:
            break
        blocks = layer(a_st[active], b_st[active], j)
        w_st[active] = blocks
        depths[active] = j
        s = local_ssim(a_st[active], blocks, cfg.ssim)
        active = active[s > cfg.thr2]

    w = a.copy()
    grid.unstack(w_st, w)
    h, wd = a.shape
    key = WatermarkKey(wd, h, cfg.k, float(cfg.thr1), float(cfg.thr2), tuple(int(d) for d in depths))
    report = EmbedReport(
        key=key,
        capacity_bits=key.payload_bits,
        gated_blocks=int(gate.sum()),
        mean_ssim_aw=mean_ssim(a, w, cfg.ssim),
    )
    return w, report


# ---------------------------------------------------------------------------
# Key file


def format_key(key: WatermarkKey) -> str:
    lines = [
        f"{KEY_MAGIC} {KEY_VERSION}",
        f"{key.width} {key.height} {key.k} {key.thr1!r} {key.thr2!r}",
        f"{key.rows} {key.cols}",
    ]
    for r in range(key.rows):
        row = key.depths[r * key.cols : (r + 1) * key.cols]
        lines.append(" ".join(str(d) for d in row))
    return "\n".join(lines) + "\n"


def parse_key(text: str) -> WatermarkKey:
    lines = text.splitlines()
    if len(lines) < 3:
        raise KeyFormatError("key file too short")
    head = lines[0].split()
    if len(head) != 2 or head[0] != KEY_MAGIC:
        raise KeyFormatError(f"not a watermark key (first line {lines[0]!r})")
    if head[1] != str(KEY_VERSION):
        raise KeyFormatError(f"unsupported key version {head[1]!r}, expected {KEY_VERSION}")
    try:
        w, h, k, thr1, thr2 = lines[1].split()
        width, height, k = int(w), int(h), int(k)
        thr1, thr2 = float(thr1), float(thr2)
        rows, cols = (int(v) for v in lines[2].split())
        depths = tuple(int(v) for v in " ".join(lines[3:]).split())
    except ValueError as exc:
        raise KeyFormatError(f"malformed key: {exc}") from None
    if k < 1 or (rows, cols) != (height // k, width // k):
        raise KeyFormatError(f"grid {rows}x{cols} does not match {width}x{height} at k={k}")
    return WatermarkKey(width, height, k, thr1, thr2, depths)


def save_key(key: WatermarkKey, path) -> None:
    Path(path).write_text(format_key(key))


def load_key(path) -> WatermarkKey:
    return parse_key(Path(path).read_text())
