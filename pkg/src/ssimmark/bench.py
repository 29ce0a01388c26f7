"""Threshold x attack robustness sweep and the random-candidate detector run.

A sweep embeds the watermark once per ``thr1`` column plus once with plain LSB
at a fixed depth, pushes every watermarked image through every attack, extracts
the payload and records BER, capacity, image quality and whether the
correlation detector singles out the true payload. Every intermediate is
written under the output directory:

    w_<col>.pgm                 watermarked image
    key_<col>.txt               watermark key (adaptive columns only)
    truth_<col>.txt             embedded payload
    attacked_<col>_<kind>.pgm   attacked image
    bits_<col>_<kind>.txt       payload extracted from the attacked image
    results.csv                 one row per (attack, column)

Columns are labelled with the thr1 value (``repr`` of the float) or
``original_lsb``.
"""
from __future__ import annotations

import hashlib
import shutil
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .attacks import AttackSpec, default_profile
from .embed import EmbedConfig, embed, save_key
from .extract import (
    DetectorResponse,
    bit_error_rate,
    detector_response,
    extract_payload,
    random_candidates,
    save_bits,
    true_payload,
)
from .image import DEFAULT_BLOCK, as_gray, check_same_shape, load_pgm, save_pgm
from .lsb import lsb_embed, lsb_payload, lsb_read
from .ssim import SsimParams, mean_ssim

BASELINE = "original_lsb"
CSV_HEADER = "attack,column,ber,capacity_bits,mean_ssim,detector_ok"


def derive_seed(master: int, *labels) -> int:
    """64-bit seed from SHA-256 of the master seed and ``labels``."""
    text = ":".join([str(int(master))] + [str(x) for x in labels])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def detect_among_random(extracted, truth, n: int = 100, seed: int = 0) -> tuple[DetectorResponse, int]:
    """Score ``extracted`` against ``truth`` hidden among ``n - 1`` random sequences.

    The random sequences come from ``random_candidates(len, n - 1, seed)``; the
    truth position is drawn from PCG64 seeded with ``SeedSequence([seed, 1])``.
    Returns the detector response and the truth position.
    """
    if n < 1:
        raise ValueError(f"need at least one candidate, got {n}")
    truth = np.asarray(truth, dtype=np.uint8)
    pos = int(np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1]))).integers(0, n))
    cands = random_candidates(truth.size, n - 1, seed) if n > 1 else []
    cands.insert(pos, truth)
    return detector_response(extracted, cands), pos


@dataclass(frozen=True)
class EvalRow:
    attack: str
    column: str
    ber: float
    capacity_bits: int
    mean_ssim: float
    detector_ok: bool

    def csv(self) -> str:
        return f"{self.attack},{self.column},{self.ber!r},{self.capacity_bits},{self.mean_ssim!r},{int(self.detector_ok)}"


@dataclass
class SweepConfig:
    asset: Path | None = None
    watermark: Path | None = None
    thr1_values: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8)
    thr2: float = 0.75
    attacks: list[AttackSpec] = field(default_factory=default_profile)
    baseline_depth: int = 3
    seed: int = 0
    block: int = DEFAULT_BLOCK
    candidates: int = 100

    def validate(self) -> None:
        if not self.thr1_values:
            raise ValueError("sweep needs at least one thr1 value")
        if not self.attacks:
            raise ValueError("sweep needs at least one attack")
        kinds = [a.kind for a in self.attacks]
        if len(set(kinds)) != len(kinds):
            raise ValueError("each attack kind may appear only once in a sweep")
        if not 1 <= self.baseline_depth <= 8:
            raise ValueError("baseline depth must be in [1, 8]")
        if self.candidates < 1:
            raise ValueError("candidates must be >= 1")


_SCALARS = {"asset": Path, "watermark": Path, "thr2": float, "baseline_depth": int, "seed": int, "block": int, "candidates": int}


def parse_sweep_config(text: str) -> SweepConfig:
    """Read ``key = value`` lines. ``thr1`` takes a comma list; ``attack`` repeats."""
    cfg = SweepConfig()
    attacks: list[AttackSpec] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        if key == "thr1":
            cfg.thr1_values = tuple(float(v) for v in value.split(","))
        elif key == "attack":
            attacks.append(AttackSpec.from_line(value))
        elif key in _SCALARS:
            setattr(cfg, key, _SCALARS[key](value))
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if attacks:
        cfg.attacks = attacks
    return cfg


def column_label(thr1: float) -> str:
    return repr(float(thr1))


def sweep_images(a, b, cfg: SweepConfig, outdir=None) -> list[EvalRow]:
    """Run the sweep on in-memory images; optionally persist intermediates."""
    cfg.validate()
    a = as_gray(a, "asset")
    b = as_gray(b, "watermark")
    check_same_shape(a, b)
    out = Path(outdir) if outdir is not None else None
    params = SsimParams(k=cfg.block)

    columns = []  # (label, watermarked, truth, extractor, capacity, quality)
    for thr1 in cfg.thr1_values:
        label = column_label(thr1)
        w, report = embed(a, b, EmbedConfig(thr1=thr1, thr2=cfg.thr2, k=cfg.block, ssim=params))
        key = report.key
        truth = true_payload(b, key)
        columns.append((label, w, truth, lambda img, key=key: extract_payload(img, key), report.capacity_bits, report.mean_ssim_aw))
        if out is not None:
            save_key(key, out / f"key_{label}.txt")
    n = cfg.baseline_depth
    wl = lsb_embed(a, b, n)
    columns.append((BASELINE, wl, lsb_payload(b, n).ravel(), lambda img: lsb_read(img, n).ravel(), b.size * n, mean_ssim(a, wl, params)))

    if out is not None:
        for label, w, truth, *_ in columns:
            save_pgm(w, out / f"w_{label}.pgm")
            save_bits(truth, out / f"truth_{label}.txt")

    rows = []
    for spec in cfg.attacks:
        attack_seed = derive_seed(cfg.seed, "attack", spec.kind)
        for label, w, truth, extractor, capacity, quality in columns:
            attacked = spec.apply(w, attack_seed)
            bits = extractor(attacked)
            if truth.size:
                ber = bit_error_rate(bits, truth)
                resp, pos = detect_among_random(bits, truth, cfg.candidates, derive_seed(cfg.seed, "detect", spec.kind, label))
                ok = resp.argmax == pos
            else:
                ber, ok = 0.0, False
            rows.append(EvalRow(spec.kind, label, ber, capacity, quality, ok))
            if out is not None:
                save_pgm(attacked, out / f"attacked_{label}_{spec.kind}.pgm")
                save_bits(bits, out / f"bits_{label}_{spec.kind}.txt")
    return rows


def format_rows(rows) -> str:
    return "\n".join([CSV_HEADER] + [r.csv() for r in rows]) + "\n"


def run_sweep(cfg: SweepConfig, outdir) -> list[EvalRow]:
    """File-based sweep; on any failure the output directory is left as it was."""
    if cfg.asset is None or cfg.watermark is None:
        raise ValueError("sweep config needs asset and watermark paths")
    a = load_pgm(cfg.asset)
    b = load_pgm(cfg.watermark)
    out = Path(outdir)
    existed = out.exists()
    staging = out.with_name(out.name + ".partial")
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    try:
        rows = sweep_images(a, b, cfg, staging)
        (staging / "results.csv").write_text(format_rows(rows))
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if existed:
        for item in staging.iterdir():
            item.replace(out / item.name)
        staging.rmdir()
    else:
        staging.rename(out)
    return rows
