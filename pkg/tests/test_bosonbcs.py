import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pairons import (BosonModel, BosonPaironSet, BosonState,
                     DegenerateStateError,
                     InconsistentPaironsError, boson_energy, boson_fidelity,
                     build_bcs_hamiltonian, diagonalize_boson, ellipsoid_axes,
                     extract_boson_pairons, fock_basis,
                     reconstruct_boson_state, verify_ellipsoid)
from conftest import pair_hamiltonian


def test_fock_basis_counts():
    assert len(fock_basis(2, 2)) == 3
    assert len(fock_basis(3, 6)) == 28  # C(8,2)
    assert len(fock_basis(4, 5)) == 56
    # deterministic ordering, no duplicates
    b = fock_basis(3, 4)
    assert b == sorted(b)
    assert all(sum(occ) == 4 for occ in b)


def test_two_level_matrix_frozen():
    gamma = 0.8
    model = BosonModel(levels=(0.0, 1.0), gamma=gamma, n_bosons=2)
    h, basis = build_bcs_hamiltonian(model)
    assert basis == [(0, 2), (1, 1), (2, 0)]
    # seniority-zero block {(2,0),(0,2)} plus the isolated (1,1)
    expect = np.array([
        [2.0 + gamma / 2, 0.0, gamma / 2],
        [0.0, 1.0, 0.0],
        [gamma / 2, 0.0, gamma / 2],
    ])
    assert_allclose(h, expect, atol=1e-15)


def test_matches_operator_oracle():
    for levels, gamma, n in [((0.0, 0.7), -0.4, 4), ((0.0, 0.5, 1.0), 0.6, 5),
                             ((0.1, 0.4, 0.9, 1.3), 0.25, 4)]:
        model = BosonModel(levels=levels, gamma=gamma, n_bosons=n)
        h, basis = build_bcs_hamiltonian(model)
        assert_allclose(h, pair_hamiltonian(levels, gamma, basis), atol=1e-12)


def test_spectrum_two_levels_frozen():
    model = BosonModel(levels=(0.0, 1.0), gamma=1.0, n_bosons=2)
    states = diagonalize_boson(model)
    assert_allclose([s.energy for s in states],
                    [(3 - math.sqrt(5)) / 2, 1.0, (3 + math.sqrt(5)) / 2],
                    rtol=1e-14)
    assert states[1].seniority == (1, 1)


def test_seniority_is_per_level_parity():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=0.3, n_bosons=5)
    for s in diagonalize_boson(model):
        live = [occ for c, occ in zip(s.coeffs, s.basis) if abs(c) > 1e-12]
        for occ in live:
            assert all((n - v) % 2 == 0 for n, v in zip(occ, s.seniority))
        assert sum(s.seniority) % 2 == s.model.n_bosons % 2


def test_sum_rule_random_models():
    for levels, gamma, n in [((0.0, 1.0), 0.9, 6), ((0.0, 0.3, 1.1), -0.7, 5),
                             ((0.2, 0.6, 1.0), 0.45, 6)]:
        model = BosonModel(levels=levels, gamma=gamma, n_bosons=n)
        for s in diagonalize_boson(model):
            if s.degenerate:
                continue
            ps = extract_boson_pairons(s)
            assert abs(ps.energy_sum() - s.energy) < 1e-8
            assert abs(boson_energy(ps) - s.energy) < 1e-8


def test_single_pair_reconstruction_weights():
    # M = 1: amplitude on (2,0) vs (0,2) goes like 1/(2 eps_l - e)
    model = BosonModel(levels=(0.0, 1.0), gamma=1.0, n_bosons=2)
    ground = diagonalize_boson(model)[0]
    e = extract_boson_pairons(ground).energies[0]
    rec = reconstruct_boson_state(model, (0, 0), (e,))
    amp = {occ: c for c, occ in zip(rec.coeffs, rec.basis)}
    ratio = amp[(2, 0)] / amp[(0, 2)]
    expect = (2 * model.levels[1] - e) / (2 * model.levels[0] - e)
    assert_allclose(ratio, expect, rtol=1e-10)
    assert boson_fidelity(ground, rec) > 1.0 - 1e-12


def test_weak_coupling_pairons_near_level_doubles():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=1e-8, n_bosons=4)
    ground = diagonalize_boson(model)[0]
    ps = extract_boson_pairons(ground)
    assert_allclose(sorted(e.real for e in ps.energies), [0.0, 0.0],
                    atol=1e-6)
    assert max(abs(e.imag) for e in ps.energies) < 1e-6


def test_slice_axes_agree():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=-0.5, n_bosons=6)
    for s in diagonalize_boson(model):
        if s.degenerate:
            continue
        p1 = sorted(extract_boson_pairons(s, axis=1).energies,
                    key=lambda z: (z.real, z.imag))
        p2 = sorted(extract_boson_pairons(s, axis=2).energies,
                    key=lambda z: (z.real, z.imag))
        assert_allclose(p1, p2, atol=1e-8)


def test_seniority_states_sum_rule():
    # states with unpaired bosons on slice-relevant levels were once the
    # blind spot of the axis filter; pin them explicitly
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=-0.5, n_bosons=6)
    states = diagonalize_boson(model)
    exercised = 0
    for s in states:
        if s.degenerate or sum(s.seniority) == 0:
            continue
        ps = extract_boson_pairons(s, axis=1)
        assert abs(ps.energy_sum() - s.energy) < 1e-8
        rec = reconstruct_boson_state(model, ps.seniority, ps.energies)
        assert boson_fidelity(s, rec) > 1.0 - 1e-8
        exercised += 1
    assert exercised >= 10


def test_ellipsoid_axes_formula():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=0.5, n_bosons=4)
    e = 0.3 + 0.2j
    xi2 = ellipsoid_axes(model, e)
    ec = np.conj(e)
    assert_allclose(xi2, [(1.0 - ec) / ec, (2.0 - ec) / ec], rtol=1e-14)


def test_ellipsoid_quadric_vanishes():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=0.5, n_bosons=6)
    ground = diagonalize_boson(model)[0]
    for e in extract_boson_pairons(ground).energies:
        assert verify_ellipsoid(ground, e, n_points=100, seed=3) < 1e-9


def test_wrong_pairon_fails_quadric():
    model = BosonModel(levels=(0.0, 0.5, 1.0), gamma=0.5, n_bosons=6)
    ground = diagonalize_boson(model)[0]
    assert verify_ellipsoid(ground, 0.123 + 0.456j, n_points=50) > 1e-3


def test_degenerate_levels_refused_for_extraction():
    model = BosonModel(levels=(0.5, 0.5), gamma=0.3, n_bosons=2)
    assert model.has_degenerate_levels
    states = diagonalize_boson(model)  # diagonalization itself is fine
    with pytest.raises(DegenerateStateError):
        extract_boson_pairons(states[0])


def test_boson_energy_rejects_inconsistent_sets():
    model = BosonModel(levels=(0.0, 1.0), gamma=0.5, n_bosons=2)
    ps = BosonPaironSet(model=model, seniority=(0, 0), energies=(1.0 + 0j,),
                        n_at_infinity=1, flags=("axis-pole",))
    with pytest.raises(InconsistentPaironsError):
        boson_energy(ps)
    ps2 = BosonPaironSet(model=model, seniority=(0, 0),
                         energies=(1.0 + 0.5j,), n_at_infinity=0, flags=())
    with pytest.raises(InconsistentPaironsError):
        boson_energy(ps2)


def test_spin_state_pairons_via_two_level_slice():
    # the two-boson realization of a spin state (occupations (j-m, j+m))
    # with level energies (-t/2, +t/2) has the same pair content: slicing
    # it as a two-level boson state recovers exactly the spin pairons,
    # with no rescaling
    from pairons import ModelParams, build_hamiltonian, diagonalize, extract_pairons
    j = 3
    params = ModelParams.from_gammas(j, 2.0, 8.0)
    t = params.t
    ground = diagonalize(build_hamiltonian(params))[0]
    spin_ps, _ = extract_pairons(params, state_index=0)
    nu = 0 if ground.state.parity == "even" else 1
    model = BosonModel(levels=(-t / 2.0, t / 2.0), gamma=0.0, n_bosons=2 * j)
    basis = tuple(fock_basis(2, 2 * j))
    twin = BosonState(model=model, energy=0.0,
                      coeffs=np.asarray(ground.state.coeffs)[::-1].copy(),
                      basis=basis, seniority=(nu, nu), degenerate=False)
    boson_ps = extract_boson_pairons(twin)
    assert boson_ps.n_at_infinity == 0
    a = sorted(spin_ps.energies, key=lambda z: (z.real, z.imag))
    b = sorted(boson_ps.energies, key=lambda z: (z.real, z.imag))
    assert_allclose(a, b, atol=1e-8)
