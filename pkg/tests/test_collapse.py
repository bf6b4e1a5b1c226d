import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pairons import (ModelParams, PaironSet, TrajectorySpec, build_hamiltonian,
                     collapse_points, collapse_zero_pattern, crossing_points,
                     detect_collapses, diagonalize, dispersion_at,
                     hyperbola_levels, pairon_cluster_sizes, pattern_radius,
                     refine_collapse, sample_dispersion, scan_trajectory,
                     split_parity)


def test_hyperbola_levels_frozen():
    lv = hyperbola_levels(10)
    expect = [(19.0 / (19 - 2 * k)) ** 2 for k in range(10)]
    assert_allclose(lv, expect, rtol=1e-15)


def test_collapse_points_count_and_symmetry():
    pts = collapse_points(10, 10.0)
    assert len(pts) == 16  # k = 0..7, two branches each
    by_k = {}
    for p in pts:
        by_k.setdefault(p.k, []).append(p)
    assert sorted(by_k) == list(range(8))
    for k, pair in by_k.items():
        lo, hi = sorted(p.gamma_x for p in pair)
        assert lo + hi == 10.0  # exact arithmetic symmetry
        c = (19.0 / (19 - 2 * k)) ** 2
        assert_allclose(lo * (10.0 - lo), c, rtol=1e-12)
    assert {p.branch for p in pts} == {"lower", "upper"}
    assert all(p.merged_zero_multiplicity == 2 * (p.k + 1) for p in pts)


def test_collapse_points_wider_line():
    # line sum 40 accommodates every hyperbola up to k = j-1
    assert len(collapse_points(10, 40.0)) == 20
    assert len(collapse_points(10, 1.0)) == 0


def test_crossing_points_frozen():
    cps = crossing_points(10)
    assert [cp.k for cp in cps] == list(range(10))
    assert_allclose([cp.gamma_x for cp in cps],
                    [-19.0 / (19 - 2 * k) for k in range(10)], rtol=1e-15)
    assert cps[0].pairs == ((-10, -9),)
    assert len(cps[3].pairs) == 4


def test_crossings_are_exact_degeneracies():
    for cp in crossing_points(6):
        params = ModelParams.from_gammas(6, cp.gamma_x, cp.gamma_x)
        h = build_hamiltonian(params)
        even, odd, _ = split_parity(h)
        ev = np.linalg.eigvalsh(even)
        od = np.linalg.eigvalsh(odd)
        gap = min(abs(a - b) for a in ev for b in od)
        assert gap <= 1e-10 * h.norm


def test_trajectory_spec_validation():
    with pytest.raises(ValueError):
        TrajectorySpec(j=4, line="sum", line_sum=10.0, start=0.0, stop=5.0,
                       steps=100, state_index=0)  # start on singular line
    with pytest.raises(ValueError):
        TrajectorySpec(j=4, line="sum", line_sum=10.0, start=1.0, stop=1.0,
                       steps=100, state_index=0)
    spec = TrajectorySpec(j=4, line="sum", line_sum=10.0, start=0.1,
                          stop=9.9, steps=50, state_index=0)
    assert len(spec.samples()) == 50
    assert_allclose(spec.gamma_y(3.0), 7.0)


def test_scan_and_detect_small():
    spec = TrajectorySpec(j=4, line="sum", line_sum=10.0, start=0.08,
                          stop=9.92, steps=400, state_index=0)
    table = scan_trajectory(spec, threads=2)
    assert not table.failures
    assert len(table.samples) == 400
    cands = detect_collapses(table, threshold=0.02)
    targets = sorted(p.gamma_x for p in collapse_points(4, 10.0)) + [5.0]
    for gx in targets:
        assert min(abs(c.gamma_x - gx) for c in cands) < 2e-2


def test_refine_collapse_cusp():
    spec = TrajectorySpec(j=4, line="sum", line_sum=10.0, start=0.08,
                          stop=9.92, steps=100, state_index=0)
    target = min(collapse_points(4, 10.0), key=lambda p: p.gamma_x)
    cand = refine_collapse(spec, target.gamma_x - 5e-3, target.gamma_x + 5e-3)
    assert abs(cand.gamma_x - target.gamma_x) < 1e-6
    assert cand.dispersion < dispersion_at(spec, target.gamma_x + 4e-3)


def test_total_collapse_dispersion_zero():
    # on the diagonal the ground state is a single Dicke state: all zeros
    # coincide and the dispersion vanishes identically
    spec = TrajectorySpec(j=3, line="sum", line_sum=10.0, start=4.0,
                          stop=6.0, steps=60, state_index=0)
    assert dispersion_at(spec, 5.0) == 0.0
    assert dispersion_at(spec, 4.9) > 1e-3


def test_scan_branches_are_continuous():
    from pairons.sphere import chordal_distance
    spec = TrajectorySpec(j=4, line="sum", line_sum=10.0, start=1.2,
                          stop=3.8, steps=120, state_index=0)
    table = scan_trajectory(spec)
    prev = {}
    for s in table.samples:
        cur = {}
        for rec in s.records:
            cur[rec.branch_id] = rec.site
            if rec.branch_id in prev:
                assert chordal_distance(prev[rec.branch_id], rec.site) < 0.1
        prev = cur


def test_pattern_radius_monotone():
    radii = [pattern_radius(m) for m in range(1, 9)]
    assert all(b > a for a, b in zip(radii, radii[1:]))


def test_pairon_cluster_sizes():
    ps = PaironSet(j=3, nu=0, energies=(-1.0, -1.0 + 1e-3, 4.0), t=1.0,
                   flags=())
    assert pairon_cluster_sizes(ps, 1e-2) == [2, 1]
    assert pairon_cluster_sizes(ps, 1e-5) == [1, 1, 1]


def test_collapse_pattern_j4():
    for p in collapse_points(4, 10.0):
        params = ModelParams.from_gammas(4, p.gamma_x, 10.0 - p.gamma_x)
        pattern = sorted(collapse_zero_pattern(params, p.k), reverse=True)
        expect = sorted([2 * (p.k + 1)] + [2] * (4 - 1 - p.k), reverse=True)
        assert pattern == expect


def test_collapse_pattern_j10_low_k():
    for p in collapse_points(10, 10.0):
        if p.k > 3:
            continue
        params = ModelParams.from_gammas(10, p.gamma_x, 10.0 - p.gamma_x)
        pattern = sorted(collapse_zero_pattern(params, p.k), reverse=True)
        assert pattern == sorted([2 * (p.k + 1)] + [2] * (9 - p.k),
                                 reverse=True)


def test_dispersion_continuous_near_collapse():
    spec = TrajectorySpec(j=4, line="sum", line_sum=10.0, start=0.08,
                          stop=9.92, steps=100, state_index=0)
    p = collapse_points(4, 10.0)[0]
    d1 = dispersion_at(spec, p.gamma_x + 1e-4)
    d2 = dispersion_at(spec, p.gamma_x + 2e-4)
    assert 0 < d1 < d2
