import json
import math

import numpy as np
import pytest

import hullcap


def test_version_and_names():
    assert hullcap.__version__
    assert "star" in hullcap.shape_names()
    assert "cigar" in hullcap.profile_names()


def test_disk_hull_is_the_disk():
    g = hullcap.box_grid(2, 96, -0.5, 1.0)
    disk = hullcap.rasterize(hullcap.ShapeSpec("disk", [0.0, 0.0], 0.25), g)
    assert disk.shape == (96, 96)
    assert disk.dtype == np.bool_
    h = hullcap.compute_hull(g, disk)
    assert h["report"]["converged"]
    assert np.array_equal(h["hull"], disk)
    assert abs(h["perimeter"] / (2 * math.pi * 0.25) - 1) < 0.02


def test_star_hull_is_larger_and_shorter():
    g = hullcap.box_grid(2, 192, -0.5, 1.0)
    star = hullcap.rasterize(hullcap.ShapeSpec("star", [0.0, 0.0], 0.25), g)
    h = hullcap.compute_hull(g, star)
    assert np.all(h["hull"][star])
    assert h["perimeter"] < hullcap.perimeter(g, star)
    assert h["volume"] > hullcap.volume(g, star)


def test_radial_closed_forms():
    flat = hullcap.preset_profile("flat", 2)
    cap, parabolic = hullcap.radial_p_capacity(flat, 1.0, 1.5)
    assert not parabolic
    assert cap == pytest.approx(2 * math.pi, rel=1e-3)
    verdict, _ = hullcap.radial_hull(hullcap.preset_profile("cigar", 2), 1.0)
    assert verdict
    assert hullcap.avr(flat) == pytest.approx(1.0)
    assert hullcap.ball_first_eigenvalue(2, math.pi) == pytest.approx(5.783185962946784)


def test_polya_szego_on_a_random_field():
    g = hullcap.make_grid([64, 64], 1 / 64, [0.0, 0.0])
    f = hullcap.random_smooth_field(g, 3)
    r = hullcap.polya_szego_check(g, f)
    assert r["holds"]
    assert r["lhs"] >= r["rhs"] * (1 - 5e-3)


def test_errors_map_to_python_exceptions():
    g = hullcap.box_grid(2, 16)
    with pytest.raises(ValueError):
        hullcap.rasterize(hullcap.ShapeSpec("nonagon"), g)
    with pytest.raises(ValueError):
        hullcap.normalise_config("[run]\ncomand = hull\n")


def test_run_round_trip(tmp_path):
    text = "[run]\ncommand = hull\n[domain]\ngrid = 48\nlo = -0.5\nextent = 1\n"
    a = hullcap.run(text, str(tmp_path), deterministic=True)
    assert a["pass"]
    m = json.loads(a["manifest"])
    assert m["wall_time_s"] is None
    b = hullcap.run(text, str(tmp_path), deterministic=True)
    assert b["cache_hit"]
    assert b["manifest"] == a["manifest"]
