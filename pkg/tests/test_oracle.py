import math

import numpy as np
import pytest

from ringcdw import RingConfig, make_cosine_profile, make_uniform_profile, minimize_phase_energy, oracle_compare, random_profile
from ringcdw.oracle import OracleConvergenceError, OracleMismatch, relative_gap


def test_uniform_minimizer_is_flat(ring):
    res = minimize_phase_energy(ring, make_uniform_profile(), 0)
    assert np.max(np.abs(res.minimizer)) < 1e-14
    assert res.energy == pytest.approx(math.pi * 0.09, abs=1e-9)
    assert res.current(ring) == pytest.approx(-0.3, rel=1e-12)


def test_cdw_ground_state(ring, cdw):
    res = minimize_phase_energy(ring, cdw, 0)
    assert abs(res.lagrange_multiplier / ring.mass - (-0.3 * math.sqrt(0.96))) < 1e-8
    assert abs(res.energy - math.pi * 0.09 * math.sqrt(0.96)) < 1e-9


def test_cdw_excited(ring, cdw):
    res = minimize_phase_energy(ring, cdw, 1)
    assert abs(res.energy - math.pi * 0.49 * math.sqrt(0.96)) < 1e-9


@pytest.mark.parametrize("winding", [-1, 0, 2])
def test_constraint_and_residual(ring, cdw, winding):
    res = minimize_phase_energy(ring, cdw, winding, tolerance=1e-12)
    circulation = np.mean(res.minimizer) * ring.perimeter
    assert abs(circulation - 2 * math.pi * winding * ring.hbar) < 1e-10
    assert res.constraint_residual < 1e-12
    assert res.iterations > 0


def test_kkt_structure(ring, rng):
    # n (g - qA/c) / m is constant at the optimum: the conserved current
    p = random_profile(rng, 0.45, grid_size=512)
    res = minimize_phase_energy(ring, p, 0)
    flux_density = p.density * (res.minimizer - ring.gauge_momentum) / ring.mass
    assert np.ptp(flux_density) < 1e-10


def test_random_starts_agree(ring, cdw, rng):
    runs = [
        minimize_phase_energy(ring, cdw, 1, initial=rng.normal(size=cdw.grid_size)).minimizer for _ in range(3)
    ]
    for other in runs[1:]:
        assert np.max(np.abs(other - runs[0])) < 1e-10


def test_kkt_path_agrees(ring, cdw):
    a = minimize_phase_energy(ring, cdw, 1, method="kkt")
    b = minimize_phase_energy(ring, cdw, 1)
    assert a.iterations == 0
    assert np.max(np.abs(a.minimizer - b.minimizer)) < 1e-10


def test_non_convergence(ring, cdw):
    with pytest.raises(OracleConvergenceError) as info:
        minimize_phase_energy(ring, make_cosine_profile(0.9), 0, max_iter=3)
    assert info.value.iterations == 3
    assert info.value.residual > 0


def test_bad_arguments(ring, cdw):
    with pytest.raises(ValueError):
        minimize_phase_energy(ring, cdw, 0, tolerance=0)
    with pytest.raises(ValueError):
        minimize_phase_energy(ring, cdw, 0, method="newton")
    with pytest.raises(ValueError):
        minimize_phase_energy(ring, cdw, 0, initial=np.zeros(3))


class TestCompare:
    def test_uniform(self, ring):
        r = oracle_compare(ring, make_uniform_profile(), 0)
        assert r.max_gap < 1e-12

    def test_cosine(self, ring, cdw):
        r = oracle_compare(ring, cdw, 0)
        assert r.passed and r.max_gap < 1e-8

    def test_stiff_problem(self, ring):
        r = oracle_compare(ring, make_cosine_profile(0.9, 1, 4096), 0, tolerance=1e-7)
        assert r.max_gap < 1e-7

    def test_failure_report(self, ring, cdw):
        with pytest.raises(OracleMismatch) as info:
            oracle_compare(ring, cdw, 0, tolerance=0.0)
        record = info.value.report.to_record()
        assert record["passed"] is False
        assert {"current_gap", "energy_gap", "gradient_gap"} <= set(record)

    def test_no_raise(self, ring, cdw):
        r = oracle_compare(ring, cdw, 0, tolerance=0.0, raise_on_failure=False)
        assert not r.passed


def test_relative_gap():
    assert relative_gap(1.0, 1.0) == 0.0
    assert relative_gap(0.0, 0.0) == 0.0
    assert relative_gap(2.0, 1.0) == 0.5
    assert relative_gap(1e-20, 0.0) == 1e-20
