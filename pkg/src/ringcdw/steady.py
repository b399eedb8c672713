"""Exact persistent-current states of the modulated ring, plus the second-order formulas.

The phase gradient obeys ``hbar grad S = qA/c + m J / n(x)`` with J constant, and the
circulation of grad S is fixed to ``2 pi nu``.  Averaging over the ring gives the exact
current ``J = (hbar nu / R - qA/c) / (m <1/n>)``; no expansion in n1 is made here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ring import DensityProfile, RingConfig, compute_averages

__all__ = [
    "SteadyState",
    "solve_steady",
    "perturbative_current",
    "perturbative_energy",
    "angular_momentum_perturbative",
    "ground_state_winding",
    "candidate_windings",
]

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SteadyState:
    winding: int
    current: float
    phase_gradient: np.ndarray
    energy: float
    angular_momentum: float

    def to_record(self) -> dict:
        return {
            "winding": self.winding,
            "current": self.current,
            "energy": self.energy,
            "angular_momentum": self.angular_momentum,
        }

    def phase_table(self, profile: DensityProfile) -> np.ndarray:
        """Two columns: theta and hbar grad S."""
        return np.column_stack([profile.theta, self.phase_gradient])


def solve_steady(config: RingConfig, profile: DensityProfile, winding: int = 0) -> SteadyState:
    """Solve the current-conservation problem exactly for winding ``winding``."""
    winding = int(winding)
    avg = compute_averages(config, profile)
    n = profile.density
    m = config.mass
    current = config.drive(winding) / (m * avg.inv_density_mean)
    grad = config.gauge_momentum + m * current / n
    L = config.perimeter
    energy = 0.5 * m * current**2 * L * avg.inv_density_mean
    # L_z = oint n R (hbar grad S) dx, with dx = L / N
    angular_momentum = float(np.mean(n * grad) * config.radius * L)
    grad.setflags(write=False)
    return SteadyState(
        winding=winding,
        current=float(current),
        phase_gradient=grad,
        energy=float(energy),
        angular_momentum=angular_momentum,
    )


def _reduction(config: RingConfig, profile: DensityProfile) -> float:
    avg = compute_averages(config, profile)
    return 1.0 - avg.modulation_mean_square / config.base_density**2


def perturbative_current(config: RingConfig, profile: DensityProfile, winding: int = 0) -> float:
    """Second-order current ``(n0/m) [1 - <n1^2>/n0^2] (hbar nu/R - qA/c)``."""
    return config.base_density / config.mass * _reduction(config, profile) * config.drive(winding)


def perturbative_energy(config: RingConfig, profile: DensityProfile, winding: int = 0) -> float:
    """Second-order energy ``(N0/2m) (hbar nu/R - qA/c)^2 [1 - <n1^2>/n0^2]``."""
    n_total = config.particle_number
    return n_total / (2.0 * config.mass) * config.drive(winding) ** 2 * _reduction(config, profile)


def angular_momentum_perturbative(config: RingConfig, profile: DensityProfile) -> float:
    """Second-order angular momentum of the nu = 0 state, ``N0 R (qA/c) <n1^2>/n0^2``."""
    avg = compute_averages(config, profile)
    return (
        config.particle_number
        * config.radius
        * config.gauge_momentum
        * avg.modulation_mean_square
        / config.base_density**2
    )


def candidate_windings(config: RingConfig) -> range:
    a = config.flux_quanta
    return range(math.floor(a) - 1, math.ceil(a) + 2)


def ground_state_winding(config: RingConfig, profile: DensityProfile) -> int:
    """Winding of lowest energy; degenerate windings resolve to the smaller |nu|."""
    energies = {nu: solve_steady(config, profile, nu).energy for nu in candidate_windings(config)}
    lowest = min(energies.values())
    tied = [nu for nu, e in energies.items() if e <= lowest + TIE_RTOL * max(abs(lowest), 1e-300)]
    return min(tied, key=lambda nu: (abs(nu), nu))
