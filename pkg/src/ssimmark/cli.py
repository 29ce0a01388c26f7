"""``ssimmark`` command line: embed, extract, attack, detect, baseline, sweep.

Exit status 0 on success, 1 on data errors (bad files, mismatched images),
2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import attacks as atk
from .bench import detect_among_random, parse_sweep_config, run_sweep, SweepConfig
from .embed import EmbedConfig, embed, load_key, save_key
from .errors import SsimmarkError
from .extract import (
    bit_error_rate,
    extract_payload,
    format_detector_csv,
    load_bits,
    reconstruct_watermark,
    save_bits,
)
from .image import load_pgm, save_pgm
from .lsb import lsb_embed, lsb_extract

EXIT_DATA = 1
EXIT_USAGE = 2


def cmd_embed(args) -> int:
    a = load_pgm(args.asset)
    b = load_pgm(args.watermark)
    w, report = embed(a, b, EmbedConfig(thr1=args.thr1, thr2=args.thr2, k=args.block))
    save_pgm(w, args.out)
    save_key(report.key, args.key)
    print(f"capacity_bits={report.capacity_bits}")
    print(f"gated_blocks={report.gated_blocks}")
    print(f"mean_ssim_aw={report.mean_ssim_aw!r}")
    return 0


def cmd_extract(args) -> int:
    w = load_pgm(args.image)
    key = load_key(args.key)
    bits = extract_payload(w, key)
    save_bits(bits, args.bits)
    if args.reconstruct:
        save_pgm(reconstruct_watermark(bits, key), args.reconstruct)
    print(f"payload_bits={bits.size}")
    return 0


def _attack_spec(args, parser) -> atk.AttackSpec:
    names = ["length", "angle", "quality", "kernel", "sigma", "retain", "density"]
    params = {n: getattr(args, n) for n in names if getattr(args, n) is not None}
    try:
        return atk.AttackSpec(args.type, params)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_attack(args) -> int:
    spec = _attack_spec(args, args.parser)
    img = load_pgm(getattr(args, "in"))
    save_pgm(spec.apply(img, args.seed), args.out)
    return 0


def cmd_detect(args) -> int:
    if args.candidates < 1:
        args.parser.error("--candidates must be at least 1")
    bits = load_bits(args.bits)
    truth = load_bits(args.truth)
    resp, pos = detect_among_random(bits, truth, args.candidates, args.seed)
    Path(args.csv).write_text(format_detector_csv(resp))
    print(f"truth_index={pos}")
    print(f"argmax={resp.argmax}")
    print(f"ber={bit_error_rate(bits, truth)!r}")
    return 0


def cmd_baseline(args) -> int:
    if args.depth < 1 or args.depth > 8:
        args.parser.error("--depth must be in [1, 8]")
    if args.extract:
        save_pgm(lsb_extract(load_pgm(args.image), args.depth), args.out)
    else:
        save_pgm(lsb_embed(load_pgm(args.asset), load_pgm(args.watermark), args.depth), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = parse_sweep_config(Path(args.config).read_text()) if args.config else SweepConfig()
    if args.asset:
        cfg.asset = Path(args.asset)
    if args.watermark:
        cfg.watermark = Path(args.watermark)
    if args.thr1:
        cfg.thr1_values = tuple(float(v) for v in args.thr1.split(","))
    if args.thr2 is not None:
        cfg.thr2 = args.thr2
    if args.baseline_depth is not None:
        cfg.baseline_depth = args.baseline_depth
    if args.seed is not None:
        cfg.seed = args.seed
    if args.attack:
        cfg.attacks = [atk.AttackSpec.from_line(line) for line in args.attack]
    if cfg.asset is None or cfg.watermark is None:
        args.parser.error("sweep needs --asset and --watermark (or a config file naming them)")
    rows = run_sweep(cfg, args.outdir)
    print(f"rows={len(rows)}")
    print(f"csv={Path(args.outdir) / 'results.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssimmark", description="SSIM-gated adaptive LSB watermarking")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark image into an asset")
    p.add_argument("--asset", required=True)
    p.add_argument("--watermark", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--thr1", type=float, default=0.8)
    p.add_argument("--thr2", type=float, default=0.75)
    p.add_argument("--block", type=int, default=11)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="extract the payload with a key")
    p.add_argument("--image", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--bits", required=True)
    p.add_argument("--reconstruct")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one degradation")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--type", required=True, choices=atk.KINDS)
    p.add_argument("--length", type=int)
    p.add_argument("--angle", type=int)
    p.add_argument("--quality", type=int)
    p.add_argument("--kernel", choices=("mean3x3", "gaussian"))
    p.add_argument("--sigma", type=float)
    p.add_argument("--retain", type=float)
    p.add_argument("--density", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("detect", help="correlate extracted bits against random candidates")
    p.add_argument("--bits", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--candidates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("baseline", help="plain fixed-depth LSB embed or extract")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--asset")
    p.add_argument("--watermark")
    p.add_argument("--image", help="watermarked image (with --extract)")
    p.add_argument("--extract", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("sweep", help="threshold x attack robustness table")
    p.add_argument("--config")
    p.add_argument("--asset")
    p.add_argument("--watermark")
    p.add_argument("--thr1", help="comma-separated thr1 values")
    p.add_argument("--thr2", type=float)
    p.add_argument("--baseline-depth", type=int)
    p.add_argument("--attack", action="append", help="attack line, e.g. 'jpeg quality=50'; repeatable")
    p.add_argument("--seed", type=int)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_sweep)

    for sp in sub.choices.values():
        sp.set_defaults(parser=sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "baseline":
        needed = ["image"] if args.extract else ["asset", "watermark"]
        missing = [n for n in needed if getattr(args, n) is None]
        if missing:
            args.parser.error("baseline needs " + ", ".join("--" + n for n in missing))
    try:
        return args.func(args)
    except (SsimmarkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
