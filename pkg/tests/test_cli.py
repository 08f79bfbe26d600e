"""Command-line interface: config layering, output formats, exit codes,
determinism, and the per-command result contracts.

All invocations go through ``cli.main`` with ``--output`` into a temp file,
so stdout stays clean and reruns can be compared byte for byte.
"""

import json
import math

import pytest

from spikeland import cli


def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--output", str(out)])
    text = out.read_text(encoding="utf-8") if out.exists() else ""
    return code, text


def run_json(args, tmp_path, name="out.json"):
    code, text = run_cli(args, tmp_path, name)
    return code, json.loads(text) if text else None


# ---------------------------------------------------------------------------
# envelope and determinism
# ---------------------------------------------------------------------------

def test_json_envelope_structure(tmp_path):
    code, env = run_json(["thresholds", "--p", "3", "--k", "2"], tmp_path)
    assert code == 0
    assert env["schema_version"] == 1
    assert env["command"] == "thresholds"
    assert env["config"]["p"] == 3 and env["config"]["k"] == 2
    assert "results" in env


def test_rerun_is_byte_identical(tmp_path):
    args = ["validate", "--suite", "hermite", "--suite", "charint",
            "--seed", "5"]
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    dir_a.mkdir()
    dir_b.mkdir()
    # identical relative --output so the echoed config matches byte for byte
    import os

    cwd = os.getcwd()
    try:
        os.chdir(dir_a)
        cli.main(list(args) + ["--output", "out.json"])
        os.chdir(dir_b)
        cli.main(list(args) + ["--output", "out.json"])
    finally:
        os.chdir(cwd)
    first = (dir_a / "out.json").read_text(encoding="utf-8")
    second = (dir_b / "out.json").read_text(encoding="utf-8")
    assert first == second and first


def test_csv_floats_round_trip(tmp_path):
    code, text = run_cli(["sweep-c", "--p", "3", "--k", "2", "--lam-max",
                          "100", "--lam-points", "5", "--format", "csv"],
                         tmp_path, "sweep.csv")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "lambda,C"
    for line in lines[1:]:
        lam_txt, c_txt = line.split(",")
        # %.17g representation reparses to the identical double
        assert f"{float(lam_txt):.17g}" == lam_txt
        assert f"{float(c_txt):.17g}" == c_txt


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------

def test_config_file_layering_and_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("p = 3\nk = 2\nlam = 6.0  # strength\nn = 50\n",
                   encoding="utf-8")
    code, env = run_json(["count", "--config", str(cfg), "--n", "100",
                          "--m-window", "0.5", "0.995",
                          "--e-window", "-6", "-2.75"], tmp_path)
    assert code == 0
    assert env["config"]["n_dim"] == 100        # flag beats file
    assert env["config"]["snr"] == 6.0          # file beats default
    assert env["results"]["euler_char_exact"] == pytest.approx(1.0, abs=2e-2)


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n", encoding="utf-8")
    code, _ = run_cli(["thresholds", "--config", str(cfg)], tmp_path)
    assert code == 2


def test_mutually_exclusive_strength_flags(tmp_path):
    code, _ = run_cli(["surface", "--lam", "3.0", "--lams", "3.0,4.0"],
                      tmp_path)
    assert code == 2


# ---------------------------------------------------------------------------
# surface
# ---------------------------------------------------------------------------

def test_surface_trivialization_signature(tmp_path):
    code, env = run_json(["surface", "--p", "3", "--k", "3",
                          "--lams", "3.5,3.619,4.0", "--m-grid", "101"],
                         tmp_path)
    assert code == 0
    blocks = env["results"]["blocks"]
    assert env["results"]["n_rows"] == 3 * 101
    maxima = [b["low_latitude_max"] for b in blocks]
    assert maxima[0] > 0.0          # below the transition
    assert abs(maxima[1]) < 1e-3    # at the transition
    assert maxima[2] < 0.0          # above the transition
    for block in blocks:
        assert len(block["rows"]) == 101
        last = block["rows"][-1]
        assert last["m"] == 1.0 and last["S"] == -math.inf


def test_surface_requires_strength(tmp_path):
    code, _ = run_cli(["surface", "--p", "3", "--k", "2"], tmp_path)
    assert code == 2


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

def test_thresholds_regression_through_cli(tmp_path):
    code, env = run_json(["thresholds", "--p", "3", "--k", "3"], tmp_path)
    assert code == 0
    res = env["results"]
    assert res["lambda1"] == pytest.approx(3.4641016, abs=2e-3)
    assert res["lambda2"] == pytest.approx(3.4641016, abs=2e-3)
    assert res["lambda_tr"] == pytest.approx(3.6196802, abs=2e-3)


def test_thresholds_rejects_low_order(tmp_path):
    code, _ = run_cli(["thresholds", "--p", "2", "--k", "1"], tmp_path)
    assert code == 2


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def test_count_rejects_shallow_window_with_inequality(tmp_path, capsys):
    code = cli.main(["count", "--p", "3", "--k", "2", "--lam", "6",
                     "--m-window", "0.5", "0.995",
                     "--e-window", "-2", "-1"])
    captured = capsys.readouterr()
    assert code == 2
    assert "sup E" in captured.err


def test_count_requires_windows(tmp_path):
    code, _ = run_cli(["count", "--p", "3", "--k", "2", "--lam", "6"],
                      tmp_path)
    assert code == 2


# ---------------------------------------------------------------------------
# gse
# ---------------------------------------------------------------------------

def test_gse_prediction_fixture(tmp_path):
    code, env = run_json(["gse", "--p", "3", "--k", "2", "--lam", "10"],
                         tmp_path)
    assert code == 0
    pred = env["results"]["prediction"]
    assert pred["energy_per_site"] == pytest.approx(-5.15, abs=1e-9)
    assert pred["energy_per_site_fixed_latitude_form"] == pytest.approx(
        pred["energy_per_site"], rel=1e-10)
    assert pred["m_star"] == pytest.approx(0.98489, abs=1e-5)


def test_gse_rejects_weak_signal(tmp_path):
    code, _ = run_cli(["gse", "--p", "3", "--k", "2", "--lam", "0.5"],
                      tmp_path)
    assert code == 2


def test_gse_simulation_quick(tmp_path):
    code, env = run_json(["gse", "--p", "3", "--k", "2", "--lam", "10",
                          "--simulate", "--n", "24", "--samples", "2",
                          "--restarts", "30", "--seed", "7"], tmp_path)
    assert code == 0
    sim = env["results"]["simulation"]
    assert sim["instances"] == 2
    assert sim["discarded_restarts"] == 0
    assert abs(sim["energy_discrepancy"]) < 0.5
    assert abs(sim["overlap_discrepancy"]) < 0.05


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def test_validate_unknown_suite(tmp_path):
    code, _ = run_cli(["validate", "--suite", "nosuch"], tmp_path)
    assert code == 2


def test_validate_fast_suites_pass(tmp_path):
    code, env = run_json(["validate", "--suite", "hermite",
                          "--suite", "charint", "--suite", "pr"], tmp_path)
    assert code == 0
    assert env["results"]["passed"] is True
    names = [s["suite"] for s in env["results"]["suites"]]
    assert names == ["hermite", "charint", "pr"]


# ---------------------------------------------------------------------------
# sweep-c
# ---------------------------------------------------------------------------

def test_sweep_constant_approaches_one(tmp_path):
    code, env = run_json(["sweep-c", "--p", "3", "--k", "1",
                          "--lam-max", "1000", "--lam-points", "7"],
                         tmp_path)
    assert code == 0
    res = env["results"]
    assert res["last_lambda"] == pytest.approx(1000.0)
    assert abs(res["last_C"] - 1.0) < 0.05


def test_sweep_clips_floor_below_threshold(tmp_path, capsys):
    out = tmp_path / "s.json"
    code = cli.main(["sweep-c", "--p", "3", "--k", "2", "--lam-min", "0.5",
                     "--lam-max", "50", "--lam-points", "4",
                     "--output", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert "clipping" in captured.err
    env = json.loads(out.read_text(encoding="utf-8"))
    assert env["results"]["rows"][0]["lambda"] >= env["results"]["lambda2"] \
        - 1e-12
