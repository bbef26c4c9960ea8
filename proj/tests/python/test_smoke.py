"""Smoke tests for the python bindings: construct the main objects, run each
exposed operation once, and sanity-check the values against known anchors."""

import json
import math

import pytest

import nodalab


def test_domain_basics():
    disk = nodalab.Domain("disk")
    assert disk.area() == pytest.approx(math.pi, rel=1e-5)
    assert disk.perimeter() == pytest.approx(2 * math.pi, rel=1e-8)
    assert disk.contains(0.2, 0.3)
    assert not disk.contains(1.2, 0.0)
    assert disk.boundary_distance(0.0, 0.0) == pytest.approx(1.0)

    rect = nodalab.Domain("rectangle", 2.0, 1.0)
    assert rect.area() == pytest.approx(2.0)
    assert rect.perimeter() == pytest.approx(6.0)


def test_square_mode_field():
    f = nodalab.square_mode(1, 1)
    assert f.mu == pytest.approx(2 * math.pi**2, rel=1e-12)
    assert f.value(0.5, 0.5) == pytest.approx(1.0)
    gx, gy = f.gradient(0.25, 0.5)
    assert gx == pytest.approx(math.pi * math.sin(math.pi * 0.5) *
                               math.cos(math.pi * 0.25), rel=1e-9)
    assert gy == pytest.approx(0.0, abs=1e-9)


def test_harmonic_frequency_anchor():
    f = nodalab.harmonic_poly(2)
    ev = nodalab.frequency(f, 0.5, 0.5, 0.2)
    assert ev["N"] == pytest.approx(4.0, abs=1e-3)
    assert ev["H"] > 0


def test_doubling_anchor():
    f = nodalab.harmonic_poly(1)
    ev = nodalab.doubling(f, 0.5, 0.5, 0.15)
    assert ev["M"] == pytest.approx(2.0, abs=2e-3)
    assert ev["sup_outer"] >= ev["sup_inner"]


def test_nodal_length_anchor():
    f = nodalab.square_mode(3, 2)
    out = nodalab.nodal_length(f, 1.0 / 128)
    assert out["total_length"] == pytest.approx(3.0, rel=0.02)
    assert out["segments"] > 100


def test_vanishing_order_disk():
    f = nodalab.disk_mode(1, 1)
    est = nodalab.vanishing_order(f, 0.0, 0.0)
    assert est["reliable"]
    assert est["order"] == pytest.approx(1.0, abs=0.1)


def test_eigensolver():
    disk = nodalab.Domain("disk")
    f = nodalab.solve_eigenpair(disk, index=1, mesh_h=1.0 / 24)
    assert f.mu == pytest.approx(5.7832, rel=0.05)
    assert f.residual < 1e-6


def test_run_dividing_halving():
    out = nodalab.run_dividing(A=3, M0=1.5, R=0.1, M_root=18.0)
    assert out["k0"] == 4
    assert out["kappa"] == pytest.approx(17.0 / 18.0)
    assert out["complete"]
    assert out["recursion_le_series"]
    assert out["recursion_total"] == pytest.approx(3.645, rel=1e-6)
    assert out["fitted_C"] < 2.0


def test_run_dividing_stuck_is_incomplete():
    out = nodalab.run_dividing(A=3, M0=1.5, R=0.1, M_root=18.0,
                               max_generations=4, oracle="stuck")
    assert not out["complete"]
    assert not out["recursion_le_series"]


def test_config_roundtrip():
    cfg = {"field": {"family": "square_mode", "k": 2, "m": 1},
           "mesh_h": 1.0 / 128, "seed": 5}
    text = nodalab.config_roundtrip(json.dumps(cfg))
    back = json.loads(text)
    assert back["field"]["family"] == "square_mode"
    assert back["field"]["k"] == 2
    assert back["seed"] == 5
    with pytest.raises(Exception):
        nodalab.config_roundtrip(json.dumps({"field": {"family": "bogus"}}))


def test_cli_entry_point(tmp_path):
    rc = nodalab.cli_main(["divide", "--oracle", "halving",
                           "--synthetic-M", "18", "-o", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "accounting.json").exists()
