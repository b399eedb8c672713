"""Brute-force check of the steady solver by direct constrained minimisation.

The discretised energy ``sum_i n_i/(2m) (g_i - qA/c)^2 dx`` is minimised over the
phase-gradient field g subject to the circulation constraint
``sum_i g_i dx = 2 pi hbar nu``.  The default path is projected gradient descent,
which never forms the inverse-density mean the closed-form solver relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ring import DensityProfile, RingConfig, compute_averages
from .steady import solve_steady

__all__ = [
    "OracleConvergenceError",
    "OracleResult",
    "OracleReport",
    "OracleMismatch",
    "minimize_phase_energy",
    "oracle_compare",
    "relative_gap",
]

DEFAULT_TOL = 1e-12
MAX_ITER = 100_000
COMPARE_TOL = 1e-8


class OracleConvergenceError(RuntimeError):
    def __init__(self, message, iterations, residual):
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class OracleResult:
    minimizer: np.ndarray
    lagrange_multiplier: float  # n (g - qA/c), equal to m J at the optimum
    energy: float
    iterations: int
    residual: float
    constraint_residual: float

    def current(self, config: RingConfig) -> float:
        return self.lagrange_multiplier / config.mass


def _energy(n, g, a, m, dx):
    return float(np.sum(n / (2.0 * m) * (g - a) ** 2) * dx)


def minimize_phase_energy(
    config: RingConfig,
    profile: DensityProfile,
    winding: int = 0,
    tolerance: float = DEFAULT_TOL,
    method: str = "projected",
    initial=None,
    max_iter: int = MAX_ITER,
) -> OracleResult:
    """Minimise the discretised kinetic energy at fixed winding.

    Parameters
    ----------
    method : {"projected", "kkt"}
        ``"projected"`` runs fixed-step projected gradient descent until the
        projected gradient falls below ``tolerance`` times the natural scale of
        the gradient.  ``"kkt"`` eliminates the single multiplier directly.
    initial : array, optional
        Starting field for the iterative path; it is first shifted onto the
        constraint surface.  Defaults to the uniform field ``hbar nu / R``.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    n = profile.density
    m = config.mass
    a = config.gauge_momentum
    N = profile.grid_size
    dx = config.perimeter / N
    target_mean = config.winding_momentum(winding)

    if method == "kkt":
        inv_mean = compute_averages(config, profile).inv_density_mean
        lam = (target_mean - a) / inv_mean
        g = a + lam / n
        return OracleResult(
            minimizer=g,
            lagrange_multiplier=float(lam),
            energy=_energy(n, g, a, m, dx),
            iterations=0,
            residual=0.0,
            constraint_residual=float(abs(g.mean() - target_mean)),
        )
    if method != "projected":
        raise ValueError(f"unknown method {method!r}")

    if initial is None:
        g = np.full(N, target_mean)
    else:
        g = np.array(initial, dtype=float)
        if g.shape != (N,):
            raise ValueError(f"initial guess must have shape ({N},)")
        g += target_mean - g.mean()

    hess = n * dx / m
    h_lo, h_hi = hess.min(), hess.max()
    step = 2.0 / (h_lo + h_hi)
    scale = h_hi * (abs(a) + abs(target_mean) + abs(g - target_mean).max())
    threshold = tolerance * scale

    residual = 0.0
    for iteration in range(max_iter + 1):
        grad = hess * (g - a)
        projected = grad - grad.mean()
        residual = float(np.abs(projected).max())
        if residual <= threshold:
            break
        g -= step * projected
        # the step keeps the mean only up to rounding; restore it
        g += target_mean - g.mean()
    else:
        raise OracleConvergenceError("projected descent did not converge", max_iter, residual)

    lam = float(np.mean(n * (g - a)))
    return OracleResult(
        minimizer=g,
        lagrange_multiplier=lam,
        energy=_energy(n, g, a, m, dx),
        iterations=iteration,
        residual=residual,
        constraint_residual=float(abs(g.mean() - target_mean)),
    )


def relative_gap(x, y, floor: float = 1e-14) -> float:
    """|x - y| / max(|x|, |y|), falling back to the absolute gap below ``floor``."""
    denom = max(abs(x), abs(y))
    diff = abs(x - y)
    return diff if denom < floor else diff / denom


@dataclass(frozen=True)
class OracleReport:
    winding: int
    current_solver: float
    current_oracle: float
    energy_solver: float
    energy_oracle: float
    current_gap: float
    energy_gap: float
    gradient_gap: float
    iterations: int
    tolerance: float

    @property
    def max_gap(self) -> float:
        return max(self.current_gap, self.energy_gap, self.gradient_gap)

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tolerance

    def to_record(self) -> dict:
        return {
            "winding": self.winding,
            "current_solver": self.current_solver,
            "current_oracle": self.current_oracle,
            "energy_solver": self.energy_solver,
            "energy_oracle": self.energy_oracle,
            "current_gap": self.current_gap,
            "energy_gap": self.energy_gap,
            "gradient_gap": self.gradient_gap,
            "iterations": self.iterations,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


class OracleMismatch(AssertionError):
    def __init__(self, report: OracleReport):
        super().__init__(f"solver and oracle disagree: {report.to_record()}")
        self.report = report


def oracle_compare(
    config: RingConfig,
    profile: DensityProfile,
    winding: int = 0,
    tolerance: float = COMPARE_TOL,
    method: str = "projected",
    raise_on_failure: bool = True,
) -> OracleReport:
    """Run the closed-form solver and the oracle side by side and report relative gaps."""
    state = solve_steady(config, profile, winding)
    result = minimize_phase_energy(config, profile, winding, method=method)
    grad_scale = max(
        np.abs(state.phase_gradient).max(),
        abs(config.gauge_momentum),
        abs(config.winding_momentum(winding)),
    )
    grad_diff = float(np.abs(result.minimizer - state.phase_gradient).max())
    report = OracleReport(
        winding=int(winding),
        current_solver=state.current,
        current_oracle=result.current(config),
        energy_solver=state.energy,
        energy_oracle=result.energy,
        current_gap=relative_gap(state.current, result.current(config)),
        energy_gap=relative_gap(state.energy, result.energy),
        gradient_gap=grad_diff if grad_scale < 1e-14 else grad_diff / grad_scale,
        iterations=result.iterations,
        tolerance=tolerance,
    )
    if raise_on_failure and not report.passed:
        raise OracleMismatch(report)
    return report
