# Copyright 2026 The dockmpc Authors
# SPDX-License-Identifier: Apache-2.0
import json
import math

import pytest

import dockmpc

COLUMNS = ["t", "p1x", "p1y", "th1", "p2x", "p2y", "th2", "v1x", "v1y", "w1",
           "v2x", "v2y", "w2", "r_axis", "r_align", "r_dist", "r_soft", "phase",
           "solver_status"]


def test_presets_listed():
    assert set(dockmpc.preset_names()) == {"exp1", "exp2", "exp3_coupled", "exp3_baseline"}


def test_preset_round_trip(tmp_path):
    cfg = dockmpc.preset("exp1")
    assert cfg["schema"] == 1
    path = tmp_path / "exp1.json"
    dockmpc.save_config(cfg, path)
    assert dockmpc.load_config(path) == cfg


def test_unknown_preset_is_config_error():
    with pytest.raises(dockmpc.ConfigError):
        dockmpc.preset("nope")


def test_bad_config_names_field():
    cfg = dockmpc.preset("exp1")
    cfg["dt"] = -1.0
    with pytest.raises(dockmpc.ConfigError, match="dt"):
        dockmpc.run(cfg)
    with pytest.raises(dockmpc.ConfigError, match="schema"):
        dockmpc.run({"schema": 2})


def test_gradients_agree():
    rep = dockmpc.check_gradients(6, 11)
    assert rep["trials"] == 6
    assert rep["max_gradient_error"] < 1e-6
    assert rep["max_jacobian_error"] < 1e-6


def test_distance_and_speed_residuals():
    r = dockmpc.residuals((0.0, 0.0, 0.0), (3.0, 4.0, 0.0))
    assert r["r_dist"] == pytest.approx(25.0 - 0.2 ** 2, rel=1e-12)
    assert r["r_soft"] == 0.0
    moving = dockmpc.residuals((0, 0, 0), (1, 0, 0), (0.3, 0.4, 0), (0, 0, 0))
    assert moving["r_soft"] == pytest.approx(0.25)


def test_short_run_writes_outputs(tmp_path):
    cfg = dockmpc.preset("exp1")
    cfg["timeout"] = 1.0
    res = dockmpc.run(cfg, out_dir=str(tmp_path))
    assert res["outcome"] == "timeout"
    traj = res["trajectory"]
    assert len(traj["t"]) == 5
    assert all(len(traj[c]) == len(traj["t"]) for c in COLUMNS)
    assert all(math.isfinite(v) for v in traj["p1x"])
    header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
    assert header.split(",") == COLUMNS
    for name in ("residuals.csv", "plot.svg", "metrics.json"):
        assert (tmp_path / name).stat().st_size > 0
    assert json.loads((tmp_path / "metrics.json").read_text())["outcome"] == "timeout"


def test_compare_formula():
    ours = {"total": {"time": 8.0, "energy": 3.0, "distance": 9.0}, "makespan": 4.0}
    base = {"total": {"time": 10.0, "energy": 4.0, "distance": 10.0}, "makespan": 5.0}
    rows = {r["metric"]: r["improvement_pct"] for r in dockmpc.compare(ours, base)}
    assert rows["time [s]"] == pytest.approx(20.0)
    assert rows["energy [J]"] == pytest.approx(25.0)
    assert rows["distance [m]"] == pytest.approx(10.0)
