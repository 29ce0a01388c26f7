"""8-bit grayscale rasters: validation, PGM I/O, block grids and bit planes.

Images are plain 2-D ``numpy.uint8`` arrays of shape ``(height, width)``.
Nothing in the package mutates an image it was handed; functions return new
arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    ImageTooSmallError,
    PgmFormatError,
    TruncatedPayloadError,
    UnsupportedDepthError,
)

DEFAULT_BLOCK = 11


def as_gray(img, name: str = "image") -> np.ndarray:
    """Validate ``img`` as an 8-bit grayscale raster and return it as uint8."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatchError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"{name} must hold integers, got {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name} values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[::-1]} vs {b.shape[::-1]} (width x height)")


# ---------------------------------------------------------------------------
# PGM


def _header_tokens(raw: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping '#' comments.

    Returns the tokens and the offset just past the single whitespace byte that
    terminates the last token.
    """
    tokens: list[bytes] = []
    pos = 0
    n = len(raw)
    while len(tokens) < count:
        while pos < n and raw[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise PgmFormatError("unexpected end of file in PGM header")
        if raw[pos : pos + 1] == b"#":
            end = raw.find(b"\n", pos)
            if end < 0:
                raise PgmFormatError("unterminated comment in PGM header")
            pos = end + 1
            continue
        start = pos
        while pos < n and not raw[pos : pos + 1].isspace() and raw[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(raw[start:pos])
    if pos >= n or not raw[pos : pos + 1].isspace():
        if count > 1:  # P5 needs the separator byte before binary data
            raise PgmFormatError("PGM header not terminated by whitespace")
    return tokens, pos + 1


def _parse_int(tok: bytes, what: str) -> int:
    if not tok.isdigit():
        raise PgmFormatError(f"bad {what} in PGM header: {tok!r}")
    return int(tok)


def load_pgm(path) -> np.ndarray:
    """Load a binary (P5) or ASCII (P2) PGM with maxval 255."""
    raw = Path(path).read_bytes()
    magic = raw[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"not a PGM file (magic {magic!r})")
    tokens, offset = _header_tokens(raw[2:], 3)
    offset += 2
    width = _parse_int(tokens[0], "width")
    height = _parse_int(tokens[1], "height")
    maxval = _parse_int(tokens[2], "maxval")
    if width < 1 or height < 1:
        raise PgmFormatError(f"non-positive PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepthError(f"only 8-bit PGM (maxval 255) is supported, got maxval {maxval}")
    npix = width * height

    if magic == b"P5":
        payload = raw[offset : offset + npix]
        if len(payload) < npix:
            raise TruncatedPayloadError(f"PGM payload has {len(payload)} bytes, header declares {npix}")
        return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()

    body = b"\n".join(line.split(b"#", 1)[0] for line in raw[offset:].splitlines())
    fields = body.split()
    if len(fields) < npix:
        raise TruncatedPayloadError(f"PGM payload has {len(fields)} samples, header declares {npix}")
    try:
        values = np.array([int(f) for f in fields[:npix]], dtype=np.int64)
    except ValueError as exc:
        raise PgmFormatError(f"non-integer sample in ASCII PGM: {exc}") from None
    if values.min() < 0 or values.max() > 255:
        raise PgmFormatError("ASCII PGM sample outside [0, 255]")
    return values.astype(np.uint8).reshape(height, width)


def save_pgm(img, path) -> None:
    """Write ``img`` as binary PGM (P5, maxval 255)."""
    arr = as_gray(img)
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(arr).tobytes())


# ---------------------------------------------------------------------------
# Blocks


@dataclass(frozen=True)
class BlockGrid:
    """Row-major grid of the full ``k x k`` blocks of an image.

    Trailing rows/columns that do not fill a whole block are not covered.
    """

    k: int
    rows: int
    cols: int

    @property
    def count(self) -> int:
        return self.rows * self.cols

    def origin(self, i: int) -> tuple[int, int]:
        """Top-left (row, column) pixel of block ``i``."""
        if not 0 <= i < self.count:
            raise IndexError(f"block index {i} out of range [0, {self.count})")
        return (i // self.cols) * self.k, (i % self.cols) * self.k

    def slices(self, i: int) -> tuple[slice, slice]:
        r, c = self.origin(i)
        return slice(r, r + self.k), slice(c, c + self.k)

    def covered(self) -> tuple[slice, slice]:
        """Slices of the region tiled by the grid."""
        return slice(0, self.rows * self.k), slice(0, self.cols * self.k)

    def stack(self, img: np.ndarray) -> np.ndarray:
        """All blocks as an array of shape ``(count, k, k)`` in index order."""
        k = self.k
        region = np.asarray(img)[self.covered()]
        return region.reshape(self.rows, k, self.cols, k).swapaxes(1, 2).reshape(self.count, k, k)

    def unstack(self, blocks: np.ndarray, out: np.ndarray) -> np.ndarray:
        """Write ``(count, k, k)`` blocks back into the covered region of ``out``."""
        k = self.k
        tiled = blocks.reshape(self.rows, self.cols, k, k).swapaxes(1, 2).reshape(self.rows * k, self.cols * k)
        out[self.covered()] = tiled
        return out


def block_grid(img, k: int = DEFAULT_BLOCK) -> BlockGrid:
    arr = np.asarray(img)
    if k < 1:
        raise ValueError(f"block size must be >= 1, got {k}")
    h, w = arr.shape[:2]
    if w < k or h < k:
        raise ImageTooSmallError(f"image {w}x{h} is smaller than one {k}x{k} block")
    return BlockGrid(k=k, rows=h // k, cols=w // k)


def get_block(img, grid: BlockGrid, i: int) -> np.ndarray:
    """Read-only ``k x k`` view of block ``i``."""
    view = np.asarray(img)[grid.slices(i)]
    view.flags.writeable = False
    return view


# ---------------------------------------------------------------------------
# Bit planes (plane 0 = least significant, plane 7 = most significant)


def _check_plane(plane) -> None:
    if np.any(np.asarray(plane) < 0) or np.any(np.asarray(plane) > 7):
        raise ValueError(f"bit plane must be in [0, 7], got {plane}")


def get_bit(value, plane):
    """Bit ``plane`` of ``value``; works on ints and uint8 arrays alike."""
    _check_plane(plane)
    if isinstance(value, np.ndarray):
        return (value >> np.uint8(plane)) & np.uint8(1)
    return (int(value) >> int(plane)) & 1


def set_bit(value, plane, bit):
    _check_plane(plane)
    if isinstance(value, np.ndarray):
        mask = np.uint8(1 << int(plane))
        bits = np.asarray(bit).astype(np.uint8) & np.uint8(1)
        return (value & ~mask) | (bits << np.uint8(plane))
    mask = 1 << int(plane)
    return (int(value) & ~mask & 0xFF) | ((int(bit) & 1) << int(plane))
