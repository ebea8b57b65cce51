"""Witness weights, reference phase, sector responses, tomography, mass sweep."""
import dataclasses
import math

import numpy as np
import pytest

from stratachern import (
    DegeneratePhase,
    DVector,
    ModelParams,
    chern_number,
    plaquette_curvature,
    build_mesh,
    reference_phase,
    sector_responses,
    sweep_mass,
    theta_grid,
    theta_scan,
    tomography_reconstruct,
    valence_state,
    weight_alpha,
)

SQRT3 = math.sqrt(3.0)

# mesh-averaged conjugated coherence angle, 48x48 (frozen from the eigh-based
# reference implementation; agreement there was 9e-16)
THETA_REF_M0 = 2.6275156287440726
THETA_REF_M05 = 2.62783005327028

# 48x48 sector responses at M=0.5, theta=0.4 (frozen from the same reference)
SECTOR_M05 = dict(
    mu=-1,
    nu_minus=-0.4830139155624809,
    nu_plus=-0.5169860844375191,
    nu_S=-0.03397216887503827,
    JF=0.016221169462454305 - 0.00525244382792986j,
)


def _equator_state(angle):
    """State whose coherence is exp(-i*angle)/2."""
    return valence_state(DVector(0.0, -math.cos(angle), -math.sin(angle), 0.0))


# --- weight_alpha -------------------------------------------------------------

def test_weight_alpha_zero_coherence():
    north = valence_state(DVector(0.0, 0.0, 0.0, 1.0))
    for theta in (0.0, 0.7, -2.0):
        alpha, expectation = weight_alpha(north, theta)
        assert alpha == 0.5
        assert expectation == 0.0


def test_weight_alpha_aligned_phase():
    theta = 0.7
    alpha, expectation = weight_alpha(_equator_state(theta), theta)
    np.testing.assert_allclose(alpha, 1.0, atol=1e-14)
    np.testing.assert_allclose(expectation, -1.0, atol=1e-14)


def test_weight_alpha_antialigned_phase():
    s = valence_state(DVector(0.0, 1.0, 0.0, 0.0))  # coherence -1/2
    alpha, expectation = weight_alpha(s, 0.0)
    np.testing.assert_allclose(alpha, 0.0, atol=1e-14)
    np.testing.assert_allclose(expectation, 1.0, atol=1e-14)


def test_weight_alpha_range_and_identity(mesh24):
    rng = np.random.default_rng(3)
    for _ in range(50):
        m, n = rng.integers(0, 24, size=2)
        theta = rng.uniform(-math.pi, math.pi)
        alpha, expectation = weight_alpha(mesh24.state(m, n), theta)
        assert -1e-15 <= alpha <= 1.0 + 1e-15
        assert expectation == 1.0 - 2.0 * alpha


# --- reference_phase ----------------------------------------------------------

def test_reference_phase_constant_field(mesh24):
    synth = dataclasses.replace(
        mesh24, coherence=np.full((24, 24), -0.5 + 0.0j))
    np.testing.assert_allclose(reference_phase(synth), math.pi, atol=1e-15)


def test_reference_phase_degenerate(mesh24):
    synth = dataclasses.replace(mesh24, coherence=np.zeros((24, 24), complex))
    with pytest.raises(DegeneratePhase):
        reference_phase(synth)


def test_reference_phase_frozen(mesh48, mesh48_half):
    np.testing.assert_allclose(reference_phase(mesh48), THETA_REF_M0, atol=1e-12)
    np.testing.assert_allclose(reference_phase(mesh48_half), THETA_REF_M05, atol=1e-12)


# --- sector_responses ----------------------------------------------------------

def test_sector_responses_zero_coherence(mesh24, curv24):
    # alpha = 1/2 everywhere, so both sectors carry exactly half the invariant
    synth = dataclasses.replace(mesh24, coherence=np.zeros((24, 24), complex))
    rep = sector_responses(synth, curv24, theta=0.9)
    assert rep.mu == -1
    np.testing.assert_allclose(rep.nu_minus, -0.5, atol=1e-13)
    np.testing.assert_allclose(rep.nu_plus, -0.5, atol=1e-13)
    np.testing.assert_allclose(rep.nu_S, 0.0, atol=1e-13)
    np.testing.assert_allclose(rep.JF, 0.0, atol=1e-15)


def test_sector_responses_frozen(mesh48_half, curv48_half):
    rep = sector_responses(mesh48_half, curv48_half, theta=0.4)
    assert rep.mu == SECTOR_M05["mu"]
    np.testing.assert_allclose(rep.nu_minus, SECTOR_M05["nu_minus"], atol=1e-12)
    np.testing.assert_allclose(rep.nu_plus, SECTOR_M05["nu_plus"], atol=1e-12)
    np.testing.assert_allclose(rep.nu_S, SECTOR_M05["nu_S"], atol=1e-12)
    np.testing.assert_allclose(rep.JF, SECTOR_M05["JF"], atol=1e-12)


def test_sector_identities_at_reference_phase(mesh48_half, curv48_half):
    theta = reference_phase(mesh48_half)
    rep = sector_responses(mesh48_half, curv48_half, theta)
    assert rep.r_mu <= 1e-12
    assert rep.r_nu <= 1e-12
    np.testing.assert_allclose(
        rep.nu_minus, rep.mu / 2.0 + (np.exp(1j * theta) * rep.JF).real, atol=1e-13)
    np.testing.assert_allclose(
        rep.nu_S, -2.0 * (np.exp(1j * theta) * rep.JF).real, atol=1e-13)


def test_graded_response_is_sinusoidal(mesh48_half, curv48_half):
    thetas = theta_grid(64)
    scan = theta_scan(mesh48_half, curv48_half, thetas)
    jf = SECTOR_M05["JF"]
    want = -2.0 * abs(jf) * np.cos(thetas + np.angle(jf))
    np.testing.assert_allclose(scan, want, atol=1e-12)


def test_opposite_phases_sum_to_invariant(mesh48_half, curv48_half):
    rng = np.random.default_rng(9)
    for theta in rng.uniform(-math.pi, math.pi, size=5):
        a = sector_responses(mesh48_half, curv48_half, theta)
        b = sector_responses(mesh48_half, curv48_half, theta + math.pi)
        np.testing.assert_allclose(a.nu_minus + b.nu_minus, a.mu, atol=1e-13)


def test_theta_grid_midpoints():
    grid = theta_grid(64)
    assert grid.shape == (64,)
    np.testing.assert_allclose(grid[0], -math.pi + math.pi / 64.0, atol=1e-15)
    np.testing.assert_allclose(np.diff(grid), 2.0 * math.pi / 64.0, atol=1e-15)
    assert grid.max() < math.pi


# --- tomography -----------------------------------------------------------------

def test_tomography_reconstruct_trivial():
    assert tomography_reconstruct(-0.5, -0.5, -1) == 0.0
    np.testing.assert_allclose(
        tomography_reconstruct(-0.5 + 0.3, -0.5 - 0.1, -1), 0.3 + 0.1j, atol=1e-15)


def test_tomography_recovers_weighted_coherence(mesh48_half, curv48_half):
    r0 = sector_responses(mesh48_half, curv48_half, 0.0)
    r90 = sector_responses(mesh48_half, curv48_half, math.pi / 2.0)
    rec = tomography_reconstruct(r0.nu_minus, r90.nu_minus, r0.mu)
    np.testing.assert_allclose(rec, r0.JF, atol=1e-12)


def test_two_phase_reconstruction_matches_direct_scan(mesh48_half, curv48_half):
    r0 = sector_responses(mesh48_half, curv48_half, 0.0)
    r90 = sector_responses(mesh48_half, curv48_half, math.pi / 2.0)
    rec = tomography_reconstruct(r0.nu_minus, r90.nu_minus, r0.mu)
    thetas = theta_grid(64)
    direct = theta_scan(mesh48_half, curv48_half, thetas)
    reconstructed = -2.0 * (np.exp(1j * thetas) * rec).real
    assert np.max(np.abs(direct - reconstructed)) <= 1e-12


# --- sweep_mass -----------------------------------------------------------------

def test_sweep_detects_both_walls(p_default):
    reports, jumps = sweep_mass(
        p_default, np.linspace(-3.0, 3.0, 25), (24, 24))
    assert [r.mu for r in reports] == [0] * 6 + [-1] * 13 + [0] * 6
    assert all(max(r.r_mu, r.r_nu) <= 1e-12 for r in reports)
    assert len(jumps) == 2
    np.testing.assert_allclose(
        [j.wall_location for j in jumps], [-SQRT3, SQRT3], atol=1e-12)
    assert [j.delta_mu for j in jumps] == [-1, 1]
    assert sum(j.delta_mu for j in jumps) == 0
    lo_mu, _, hi_mu, _ = jumps[0].side_values
    assert (lo_mu, hi_mu) == (0.0, -1.0)


def test_sweep_without_walls():
    # phi=0 has no topological phase; an even step count keeps M=0 (the
    # degenerate point where both Dirac masses vanish) off the grid.
    p = ModelParams(1.0, 1.0 / 3.0, 0.0, 0.0)
    reports, jumps = sweep_mass(p, np.linspace(-3.0, 3.0, 24), (12, 12))
    assert jumps == []
    assert all(r.mu == 0 for r in reports)


def test_sweep_worker_count_does_not_change_results(p_default):
    m_values = np.linspace(-2.5, 2.5, 9)
    serial, _ = sweep_mass(p_default, m_values, (12, 12), workers=1)
    pooled, _ = sweep_mass(p_default, m_values, (12, 12), workers=3)
    for a, b in zip(serial, pooled):
        assert (a.mu, a.nu_minus, a.nu_plus, a.nu_S, a.JF, a.theta) == \
               (b.mu, b.nu_minus, b.nu_plus, b.nu_S, b.JF, b.theta)


def test_sweep_fixed_phase_policy(p_default):
    reports, _ = sweep_mass(
        p_default, np.linspace(-1.0, 1.0, 3), (12, 12), theta_policy=0.4)
    assert all(r.theta == 0.4 for r in reports)
