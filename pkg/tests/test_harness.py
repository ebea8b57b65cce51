"""Panel pipeline: thread cap, CSV emission, workspace caching, run_all summary."""
import csv
import hashlib
import json
import math
import os

import numpy as np
import pytest

from stratachern import (
    OnWall,
    ValidationError,
    Workspace,
    config_from_dict,
    reference_phase,
    run_all,
    run_panel,
    thread_cap,
)
from stratachern.harness import PANEL_IDS, default_probe_pair

SQRT3 = math.sqrt(3.0)


def _small_cfg(tmp_path, **model):
    doc = {
        "model": {"M": 0.5, **model},
        "mesh": {"nx": 12, "ny": 12},
        "qfi_scan": {"samples": 200, "seed": 42},
        "output_dir": str(tmp_path / "out"),
    }
    return config_from_dict(doc)


# --- thread_cap -----------------------------------------------------------------

def test_thread_cap_default(monkeypatch):
    monkeypatch.delenv("STRATA_CHERN_THREADS", raising=False)
    assert 1 <= thread_cap() <= 4
    monkeypatch.setenv("STRATA_CHERN_THREADS", "")
    assert 1 <= thread_cap() <= 4


def test_thread_cap_explicit(monkeypatch):
    monkeypatch.setenv("STRATA_CHERN_THREADS", "3")
    assert thread_cap() == 3


def test_thread_cap_rejects_garbage(monkeypatch):
    for bad in ("0", "-2", "many"):
        monkeypatch.setenv("STRATA_CHERN_THREADS", bad)
        with pytest.raises(ValidationError):
            thread_cap()


# --- workspace ------------------------------------------------------------------

def test_workspace_theta_policies(tmp_path):
    cfg = _small_cfg(tmp_path)
    ws = Workspace(cfg)
    np.testing.assert_allclose(ws.theta, reference_phase(ws.mesh), atol=1e-15)
    fixed = config_from_dict({**{"witness": {"theta": 0.4}},
                              "mesh": {"nx": 12, "ny": 12}})
    assert Workspace(fixed).theta == 0.4


def test_workspace_probe_pair_precedence(tmp_path):
    cfg = _small_cfg(tmp_path)
    x, y = Workspace(cfg).probe_pair
    x2, y2 = default_probe_pair(2, 2, cfg.qfi_scan.seed)
    np.testing.assert_allclose(x, x2, atol=0.0)
    np.testing.assert_allclose(y, y2, atol=0.0)
    np.testing.assert_allclose(np.linalg.norm(x), 1.0, atol=1e-14)
    explicit = config_from_dict({
        "multi": {"m": 1, "n": 1, "probes": [[[[1.0, 0.0]], [[0.0, 1.0]]]]},
        "mesh": {"nx": 12, "ny": 12},
    })
    ex, ey = Workspace(explicit).probe_pair
    np.testing.assert_allclose(ex, [1.0], atol=0.0)
    np.testing.assert_allclose(ey, [1.0j], atol=0.0)


def test_workspace_tomography(tmp_path):
    ws = Workspace(_small_cfg(tmp_path))
    thetas, direct, reconstructed, max_err = ws.tomography
    assert thetas.shape == direct.shape == reconstructed.shape == (64,)
    assert max_err <= 1e-12


# --- run_panel ------------------------------------------------------------------

def test_run_panel_curvature_csv(tmp_path):
    cfg = _small_cfg(tmp_path)
    out = run_panel(cfg, "a")
    assert out.panel == "a"
    assert out.rows == 144
    with open(out.path, "rb") as fh:
        blob = fh.read()
    assert hashlib.sha256(blob).hexdigest() == out.checksum
    assert blob.endswith(b"\n") and b"\r" not in blob
    with open(out.path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        first = next(reader)
    assert header == ["m", "n", "k_x", "k_y", "F"]
    # float cells use shortest-exact formatting: parsing them recovers the value
    ws = Workspace(cfg)
    np.testing.assert_allclose(float(first[4]), ws.curvature.F[0, 0], atol=0.0)
    assert out.to_dict()["sha256"] == out.checksum


def test_run_panel_deterministic(tmp_path):
    cfg = _small_cfg(tmp_path)
    first = {pid: run_panel(cfg, pid).checksum for pid in PANEL_IDS}
    second = {pid: run_panel(cfg, pid).checksum for pid in PANEL_IDS}
    assert first == second


def test_run_panel_rejects_unknown(tmp_path):
    with pytest.raises(ValidationError):
        run_panel(_small_cfg(tmp_path), "z")


# --- run_all --------------------------------------------------------------------

def test_run_all_summary(tmp_path):
    cfg = _small_cfg(tmp_path)
    summary = run_all(cfg)
    assert list(summary) == [
        "chern_fhs", "chern_analytic", "residual_max", "tomography_max_err",
        "inequality_violations", "jump_records", "seed", "mesh", "version",
        "panels",
    ]
    assert summary["chern_fhs"] == summary["chern_analytic"] == -1
    assert summary["residual_max"] <= 1e-12
    assert summary["tomography_max_err"] <= 1e-12
    assert summary["inequality_violations"] == 0
    walls = [rec["wall_location"] for rec in summary["jump_records"]]
    np.testing.assert_allclose(walls, [-SQRT3, SQRT3], atol=1e-12)
    assert sorted(summary["panels"]) == list(PANEL_IDS)
    on_disk = json.loads(
        (tmp_path / "out" / "summary.json").read_text())
    assert on_disk == summary


def test_run_all_byte_identical(tmp_path):
    doc = {
        "model": {"M": 0.5},
        "mesh": {"nx": 12, "ny": 12},
        "qfi_scan": {"samples": 200, "seed": 42},
    }
    blobs = []
    for sub in ("one", "two"):
        cfg = config_from_dict({**doc, "output_dir": str(tmp_path / sub)})
        run_all(cfg)
        root = tmp_path / sub
        blobs.append({f.name: f.read_bytes() for f in sorted(root.iterdir())})
    assert blobs[0] == blobs[1]


def test_run_all_fails_fast_on_wall(tmp_path):
    cfg = _small_cfg(tmp_path, M=SQRT3)
    with pytest.raises(OnWall):
        run_all(cfg)
    assert not (tmp_path / "out" / "summary.json").exists()
