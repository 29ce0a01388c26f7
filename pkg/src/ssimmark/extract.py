"""Key-based payload extraction, watermark reconstruction, BER and detection.

Payload bits are ordered block by block (index order), then by depth level
``j = 1..d_i``, then over the block's pixels in row-major order. Level ``j``
carries plane ``8 - j`` of the watermark and lives in plane ``d_i - j`` of the
watermarked image.

Bit sequences are 1-D ``uint8`` arrays of zeros and ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embed import WatermarkKey
from .errors import LengthMismatchError, SsimmarkError
from .image import as_gray
from .lsb import fill_unknown

CANDIDATE_GENERATOR = "PCG64"


def _gather(img, key: WatermarkKey, plane_of_level) -> np.ndarray:
    img = as_gray(img)
    key.check_image(img)
    blocks = key.grid.stack(img)
    depths = key.depth_array()
    parts = []
    for i in np.flatnonzero(depths):
        blk = blocks[i].ravel()
        for j in range(1, depths[i] + 1):
            parts.append((blk >> np.uint8(plane_of_level(j, depths[i]))) & np.uint8(1))
    if not parts:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate(parts)


def true_payload(b, key: WatermarkKey) -> np.ndarray:
    """The bits the embedder took from watermark ``b``."""
    return _gather(b, key, lambda j, d: 8 - j)


def extract_payload(w, key: WatermarkKey) -> np.ndarray:
    """Read the payload back out of a (possibly attacked) watermarked image."""
    return _gather(w, key, lambda j, d: d - j)


def reconstruct_watermark(bits, key: WatermarkKey) -> np.ndarray:
    """Watermark image implied by an extracted payload.

    Recovered bits fill the top ``d_i`` planes of their block, the plane below
    gets the midpoint 1; blocks without payload (and uncovered edges) are 128.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size != key.payload_bits:
        raise LengthMismatchError(f"{bits.size} bits supplied, key locates {key.payload_bits}")
    grid = key.grid
    k2 = key.k * key.k
    blocks = np.full((grid.count, k2), 128, dtype=np.uint8)
    pos = 0
    for i, d in enumerate(key.depths):
        if d == 0:
            continue
        chunk = bits[pos : pos + d * k2].reshape(d, k2)
        pos += d * k2
        top = np.zeros(k2, dtype=np.uint8)
        for j in range(1, d + 1):
            top |= (chunk[j - 1] & np.uint8(1)) << np.uint8(8 - j)
        blocks[i] = fill_unknown(top, d)
    out = np.full((key.height, key.width), 128, dtype=np.uint8)
    grid.unstack(blocks.reshape(grid.count, key.k, key.k), out)
    return out


def bit_error_rate(extracted, truth) -> float:
    """Fraction of positions where the two bit sequences differ."""
    e = np.asarray(extracted, dtype=np.uint8)
    t = np.asarray(truth, dtype=np.uint8)
    if e.shape != t.shape:
        raise LengthMismatchError(f"sequence lengths differ: {e.size} vs {t.size}")
    if e.size == 0:
        raise LengthMismatchError("BER of empty sequences is undefined")
    return float(np.count_nonzero(e != t)) / e.size


@dataclass(frozen=True)
class DetectorResponse:
    scores: np.ndarray
    argmax: int


def detector_response(extracted, candidates) -> DetectorResponse:
    """Normalised bipolar correlation of ``extracted`` with every candidate.

    Bits map to +-1 and each score is the mean product, so a perfect match
    scores 1 and the complement -1. Ties resolve to the lowest index.
    """
    e = np.asarray(extracted, dtype=np.uint8)
    cands = [np.asarray(c, dtype=np.uint8) for c in candidates]
    if not cands:
        raise SsimmarkError("detector needs at least one candidate")
    if e.size == 0:
        raise LengthMismatchError("cannot correlate an empty sequence")
    for idx, c in enumerate(cands):
        if c.shape != e.shape:
            raise LengthMismatchError(f"candidate {idx} has {c.size} bits, expected {e.size}")
    # agreements - disagreements, counted exactly in integers
    disagree = np.array([np.count_nonzero(c != e) for c in cands], dtype=np.int64)
    scores = (e.size - 2 * disagree) / e.size
    return DetectorResponse(scores=scores, argmax=int(np.argmax(scores)))


def random_candidates(length: int, n: int, seed: int) -> list[np.ndarray]:
    """``n`` sequences of fair bits from PCG64 seeded with ``SeedSequence(seed)``.

    Each sequence is ``Generator.integers(0, 2, length, dtype=uint8)`` drawn in
    turn from one generator.
    """
    if length < 1 or n < 1:
        raise ValueError("length and n must be positive")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return [rng.integers(0, 2, size=length, dtype=np.uint8) for _ in range(n)]


# ---------------------------------------------------------------------------
# Text formats


def format_bits(bits) -> str:
    bits = np.asarray(bits, dtype=np.uint8)
    text = "".join("1" if v else "0" for v in bits.tolist())
    lines = [str(bits.size)] + [text[i : i + 64] for i in range(0, len(text), 64)]
    return "\n".join(lines) + "\n"


def parse_bits(text: str) -> np.ndarray:
    lines = text.split()
    if not lines:
        raise SsimmarkError("empty bit file")
    try:
        length = int(lines[0])
    except ValueError:
        raise SsimmarkError(f"bad bit-file length line {lines[0]!r}") from None
    body = "".join(lines[1:])
    if len(body) != length:
        raise LengthMismatchError(f"bit file declares {length} bits, holds {len(body)}")
    if set(body) - {"0", "1"}:
        raise SsimmarkError("bit file may only contain '0' and '1'")
    return (np.frombuffer(body.encode(), dtype=np.uint8) - ord("0")).astype(np.uint8)


def save_bits(bits, path) -> None:
    Path(path).write_text(format_bits(bits))


def load_bits(path) -> np.ndarray:
    return parse_bits(Path(path).read_text())


def format_detector_csv(resp: DetectorResponse) -> str:
    rows = ["candidate_index,score"]
    rows += [f"{i},{float(s)!r}" for i, s in enumerate(resp.scores)]
    rows.append(f"argmax,{resp.argmax}")
    return "\n".join(rows) + "\n"
