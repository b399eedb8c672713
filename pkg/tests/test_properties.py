"""Invariants that must hold for every valid ring, checked on generated inputs."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcdw import (
    LandauParams,
    RingConfig,
    compute_averages,
    effective_alpha,
    energy_lab_frame,
    equilibrium_amplitude,
    make_cosine_profile,
    make_custom_profile,
    make_uniform_profile,
    oracle_compare,
    random_profile,
    rotation_derivative_check,
    rotational_stiffness,
    solve_steady,
)

GRID = 256

seeds = st.integers(min_value=0, max_value=2**32 - 1)
amplitudes = st.floats(min_value=0.01, max_value=0.5)
potentials = st.floats(min_value=-0.5, max_value=0.5, allow_subnormal=False)
windings = st.integers(min_value=-2, max_value=2)


def profile_from(seed, eps, grid=GRID):
    return random_profile(np.random.default_rng(seed), eps, grid_size=grid)


@given(seed=seeds, eps=amplitudes)
def test_harmonic_mean_inequality(seed, eps):
    avg = compute_averages(RingConfig(), profile_from(seed, eps))
    assert avg.inv_density_mean > 1.0
    assert avg.modulation_mean_square > 0.0


def test_harmonic_mean_equality_for_flat_ring():
    assert compute_averages(RingConfig(), make_uniform_profile(GRID)).inv_density_mean == 1.0


@given(values=st.lists(st.floats(min_value=-0.3, max_value=0.3), min_size=8, max_size=200))
def test_custom_profiles_are_centred(values):
    p = make_custom_profile(values)
    assert abs(p.samples.mean()) <= 1e-12


@given(seed=seeds, eps=amplitudes)
def test_random_profiles_are_centred_and_bounded(seed, eps):
    p = profile_from(seed, eps)
    assert abs(p.samples.mean()) <= 1e-12
    assert np.abs(p.samples).max() == pytest.approx(eps, rel=1e-12)


@given(seed=seeds, eps=amplitudes, a=potentials, nu=windings)
def test_gauge_winding_shift(seed, eps, a, nu):
    p = profile_from(seed, eps)
    cfg = RingConfig(vector_potential=a)
    shifted = cfg.with_potential(a - nu * cfg.flux_quantum_potential)
    e1 = solve_steady(cfg, p, nu).energy
    e2 = solve_steady(shifted, p, 0).energy
    assert e1 == pytest.approx(e2, rel=1e-12, abs=1e-300)


@given(seed=seeds, eps=amplitudes, a=potentials, nu=windings)
def test_current_suppression_and_energy_reduction(seed, eps, a, nu):
    cfg = RingConfig(vector_potential=a)
    modulated = solve_steady(cfg, profile_from(seed, eps), nu)
    flat = solve_steady(cfg, make_uniform_profile(GRID), nu)
    assert abs(modulated.current) <= abs(flat.current)
    assert modulated.energy <= flat.energy
    if cfg.drive(nu) != 0:
        assert abs(modulated.current) < abs(flat.current)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, eps=st.floats(min_value=0.0, max_value=0.5), a=potentials, nu=st.sampled_from([-1, 0, 1, 2]))
def test_oracle_equivalence(seed, eps, a, nu):
    report = oracle_compare(RingConfig(vector_potential=a), profile_from(seed, eps), nu)
    assert report.max_gap <= 1e-8


@settings(max_examples=40, deadline=None)
@given(seed=seeds, eps=st.floats(min_value=0.0, max_value=0.4), a=potentials, omega=st.floats(0.0, 0.2))
def test_lab_energy_is_even_at_rest_winding(seed, eps, a, omega):
    p = profile_from(seed, eps)
    cfg = RingConfig(vector_potential=a)
    assert abs(energy_lab_frame(cfg, p, 0, omega) - energy_lab_frame(cfg, p, 0, -omega)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=seeds, eps=st.floats(min_value=0.0, max_value=0.4), a=potentials, nu=st.sampled_from([-1, 0, 1]))
def test_no_linear_term(seed, eps, a, nu):
    p = profile_from(seed, eps)
    cfg = RingConfig(vector_potential=a)
    e0 = energy_lab_frame(cfg, p, nu, 0.0)
    assert abs(rotation_derivative_check(cfg, p, nu)) < 1e-8 * max(e0, 1.0)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, eps=amplitudes, a=potentials)
def test_stiffness_positive(seed, eps, a):
    cfg = RingConfig(vector_potential=a)
    assert rotational_stiffness(cfg, profile_from(seed, eps)) > 0
    assert rotational_stiffness(cfg, make_uniform_profile(GRID)) == 0.0


@settings(max_examples=30, deadline=None)
@given(seed=seeds, eps=amplitudes, a=potentials, omega=st.floats(-0.2, 0.2))
def test_frame_consistency(seed, eps, a, omega):
    from ringcdw.rotating import rotating_state

    p = profile_from(seed, eps)
    cfg = RingConfig(vector_potential=a)
    state = rotating_state(cfg, p, 0, omega)
    direct = p.density / cfg.mass * (state.phase_gradient - cfg.gauge_momentum)
    assert np.max(np.abs(state.lab_current(cfg, p) - direct)) <= 1e-10


@given(alpha=st.floats(-1, 1), beta=st.floats(0.1, 2), a=potentials, nu=windings)
def test_alpha_eff_never_below_alpha(alpha, beta, a, nu):
    cfg = RingConfig(vector_potential=a)
    params = LandauParams(alpha, beta)
    alpha_eff = effective_alpha(cfg, params, nu)
    assert alpha_eff >= alpha
    if cfg.drive(nu) == 0:
        assert alpha_eff == alpha


@given(alpha=st.floats(-1, 1), beta=st.floats(0.1, 2), d1=st.floats(0, 2), d2=st.floats(0, 2))
def test_amplitude_monotone_in_drive(alpha, beta, d1, d2):
    lo, hi = sorted((d1, d2))
    params = LandauParams(alpha, beta)
    amp = [
        equilibrium_amplitude(LandauParams(effective_alpha(RingConfig(vector_potential=-d), params), beta))
        for d in (lo, hi)
    ]
    assert amp[1] >= amp[0]


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_perturbative_ratio_stable(eps):
    # |exact - perturbative| / eps^4 -> 0.3/8 for the current
    from ringcdw import perturbative_current

    cfg = RingConfig(vector_potential=0.3)
    p = make_cosine_profile(eps)
    ratio = abs(solve_steady(cfg, p).current - perturbative_current(cfg, p)) / eps**4
    assert 0.3 / 8 <= ratio <= 2 * 0.3 / 8
