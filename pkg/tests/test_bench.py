import numpy as np
import pytest

from ssimmark.attacks import AttackSpec
from ssimmark.bench import (
    BASELINE,
    CSV_HEADER,
    SweepConfig,
    derive_seed,
    detect_among_random,
    parse_sweep_config,
    run_sweep,
    sweep_images,
)
from ssimmark.errors import DimensionMismatchError
from ssimmark.extract import bit_error_rate, load_bits
from ssimmark.image import save_pgm


@pytest.fixture
def small_pair(rng):
    a = rng.integers(0, 256, (44, 44), dtype=np.uint8)
    a = np.clip(a // 4 + np.add.outer(np.arange(44), np.arange(44)) * 2, 0, 255).astype(np.uint8)
    b = np.clip(a.astype(int) + rng.integers(-20, 21, a.shape), 0, 255).astype(np.uint8)
    return a, b


def test_derive_seed_pinned():
    assert derive_seed(0, "attack", "jpeg") == derive_seed(0, "attack", "jpeg")
    assert derive_seed(0, "attack", "jpeg") != derive_seed(1, "attack", "jpeg")
    assert derive_seed(0, "attack", "jpeg") != derive_seed(0, "attack", "crop")
    # SHA-256 of b"5:x", first 8 bytes little-endian
    assert derive_seed(5, "x") == int.from_bytes(bytes.fromhex("490ec08eb68ff28e"), "little")


def test_detect_among_random(rng):
    truth = rng.integers(0, 2, 2000, dtype=np.uint8)
    resp, pos = detect_among_random(truth, truth, 100, 9)
    assert len(resp.scores) == 100 and resp.argmax == pos and resp.scores[pos] == 1.0
    again, pos2 = detect_among_random(truth, truth, 100, 9)
    assert pos2 == pos and np.array_equal(again.scores, resp.scores)
    single, p1 = detect_among_random(truth, truth, 1, 9)
    assert p1 == 0 and single.scores.tolist() == [1.0]
    with pytest.raises(ValueError):
        detect_among_random(truth, truth, 0, 9)


def test_grid_size_and_header(small_pair, tmp_path):
    rows = sweep_images(*small_pair, SweepConfig(), tmp_path)
    assert len(rows) == 36
    assert {r.column for r in rows} == {"0.0", "0.2", "0.4", "0.6", "0.8", BASELINE}
    assert CSV_HEADER == "attack,column,ber,capacity_bits,mean_ssim,detector_ok"
    for r in rows:
        assert 0.0 <= r.ber <= 1.0


def test_ber_recomputable_from_files(small_pair, tmp_path):
    rows = sweep_images(*small_pair, SweepConfig(thr1_values=(0.0, 0.5)), tmp_path)
    for r in rows:
        truth = load_bits(tmp_path / f"truth_{r.column}.txt")
        if truth.size == 0:
            continue
        bits = load_bits(tmp_path / f"bits_{r.column}_{r.attack}.txt")
        assert bit_error_rate(bits, truth) == r.ber
    assert (tmp_path / "key_0.5.txt").exists() and (tmp_path / f"w_{BASELINE}.pgm").exists()
    assert (tmp_path / "attacked_0.0_jpeg.pgm").exists()


def test_run_sweep_byte_identical(small_pair, tmp_path):
    a, b = small_pair
    save_pgm(a, tmp_path / "a.pgm")
    save_pgm(b, tmp_path / "b.pgm")
    cfg = SweepConfig(asset=tmp_path / "a.pgm", watermark=tmp_path / "b.pgm", seed=3)
    run_sweep(cfg, tmp_path / "o1")
    run_sweep(cfg, tmp_path / "o2")
    first = (tmp_path / "o1" / "results.csv").read_bytes()
    assert first == (tmp_path / "o2" / "results.csv").read_bytes()
    assert first.decode().splitlines()[0] == CSV_HEADER
    assert not (tmp_path / "o1.partial").exists()


def test_run_sweep_cleans_up(small_pair, tmp_path):
    a, b = small_pair
    save_pgm(a, tmp_path / "a.pgm")
    save_pgm(b[:, :40], tmp_path / "b.pgm")
    cfg = SweepConfig(asset=tmp_path / "a.pgm", watermark=tmp_path / "b.pgm")
    with pytest.raises(DimensionMismatchError):
        run_sweep(cfg, tmp_path / "out")
    assert not (tmp_path / "out").exists()
    assert not (tmp_path / "out.partial").exists()


def test_adding_a_column_keeps_cells(small_pair):
    few = sweep_images(*small_pair, SweepConfig(thr1_values=(0.4,)))
    more = sweep_images(*small_pair, SweepConfig(thr1_values=(0.0, 0.4)))
    pick = {(r.attack, r.column): r for r in more}
    for r in few:
        assert pick[(r.attack, r.column)] == r


def test_parse_config():
    cfg = parse_sweep_config(
        """
        # robustness run
        asset = a.pgm
        watermark = b.pgm
        thr1 = 0.1, 0.9
        thr2 = 0.7
        baseline_depth = 2
        seed = 12
        attack = jpeg quality=50
        attack = crop retain=0.8
        """
    )
    assert cfg.thr1_values == (0.1, 0.9) and cfg.thr2 == 0.7 and cfg.baseline_depth == 2 and cfg.seed == 12
    assert cfg.attacks == [AttackSpec("jpeg", {"quality": 50}), AttackSpec("crop", {"retain": 0.8})]
    assert str(cfg.asset) == "a.pgm"
    with pytest.raises(ValueError):
        parse_sweep_config("colour = red")
    with pytest.raises(ValueError):
        parse_sweep_config("thr1")


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(thr1_values=()).validate()
    with pytest.raises(ValueError):
        SweepConfig(attacks=[]).validate()
    with pytest.raises(ValueError):
        SweepConfig(attacks=[AttackSpec("jpeg"), AttackSpec("jpeg", {"quality": 10})]).validate()
