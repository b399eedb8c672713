"""Landau picture of the density-wave instability with the diamagnetic saving included.

The free energy of a modulation of amplitude x is ``-alpha x^2 + beta x^4``.  The
persistent-current energy drops by ``(N0/2m) D^2 <n1^2>/n0^2`` when the modulation
appears (D = hbar nu/R - qA/c), and with ``<n1^2> = s x^2`` that saving adds to the
quadratic coefficient.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .ring import DensityProfile, RingConfig, make_cosine_profile, make_uniform_profile
from .steady import ground_state_winding, perturbative_energy, solve_steady

__all__ = [
    "LandauParams",
    "LandauPoint",
    "LandauConvergenceError",
    "effective_alpha",
    "equilibrium_amplitude",
    "is_valid_amplitude",
    "landau_energy",
    "instability_sweep",
    "self_consistent_amplitude",
]

log = logging.getLogger(__name__)


class LandauConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class LandauParams:
    alpha: float
    beta: float
    shape_factor: float = 0.5

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not self.shape_factor > 0:
            raise ValueError(f"shape_factor must be positive, got {self.shape_factor!r}")


def effective_alpha(config: RingConfig, params: LandauParams, winding: int = 0) -> float:
    """alpha + s (N0/2m) D^2 / n0^2."""
    drive = config.drive(winding)
    saving = config.particle_number / (2.0 * config.mass) * drive**2 / config.base_density**2
    return params.alpha + params.shape_factor * saving


def equilibrium_amplitude(params_eff: LandauParams) -> float:
    """Minimiser of ``-alpha x^2 + beta x^4``: ``sqrt(alpha / (2 beta))``, or 0 if alpha <= 0."""
    return float(np.sqrt(max(params_eff.alpha, 0.0) / (2.0 * params_eff.beta)))


def is_valid_amplitude(amplitude: float, config: RingConfig) -> bool:
    """The expansion only makes sense while the density stays positive."""
    return amplitude < config.base_density


def landau_energy(params: LandauParams, amplitude: float) -> float:
    return -params.alpha * amplitude**2 + params.beta * amplitude**4


def _shaped_profile(config: RingConfig, amplitude: float, grid_size: int) -> DensityProfile:
    if amplitude == 0:
        return make_uniform_profile(grid_size, config.base_density)
    return make_cosine_profile(amplitude / config.base_density, 1, grid_size, config.base_density)


@dataclass(frozen=True)
class LandauPoint:
    flux: float
    winding: int
    alpha_eff: float
    amplitude: float
    energy_total: float
    valid: bool

    def to_record(self) -> dict:
        return {
            "flux": self.flux,
            "winding": self.winding,
            "alpha_eff": self.alpha_eff,
            "amplitude": self.amplitude,
            "energy_total": self.energy_total,
        }


def instability_sweep(
    config: RingConfig,
    params: LandauParams,
    flux_grid,
    grid_size: int = 1024,
) -> list[LandauPoint]:
    """Equilibrium amplitude and total energy across a grid of fluxes (in flux quanta).

    The ground-state winding is reselected at each flux.  The persistent-current
    energy at the equilibrium amplitude uses the exact solver with a single cosine
    modulation; amplitudes at or beyond n0 fall back to the second-order energy and
    are marked invalid.
    """
    uniform = make_uniform_profile(grid_size, config.base_density)
    points = []
    for flux in np.asarray(flux_grid, dtype=float):
        cfg = config.with_flux(float(flux))
        winding = ground_state_winding(cfg, uniform)
        alpha_eff = effective_alpha(cfg, params, winding)
        amplitude = equilibrium_amplitude(replace(params, alpha=alpha_eff))
        valid = is_valid_amplitude(amplitude, cfg)
        if valid:
            current_energy = solve_steady(cfg, _shaped_profile(cfg, amplitude, grid_size), winding).energy
        else:
            log.warning("amplitude %.6g at flux %.6g exceeds n0; Landau expansion invalid", amplitude, flux)
            uniform_energy = perturbative_energy(cfg, uniform, winding)
            current_energy = uniform_energy * (1.0 - params.shape_factor * (amplitude / cfg.base_density) ** 2)
        points.append(
            LandauPoint(
                flux=float(flux),
                winding=winding,
                alpha_eff=alpha_eff,
                amplitude=amplitude,
                energy_total=current_energy + landau_energy(params, amplitude),
                valid=valid,
            )
        )
    return points


def self_consistent_amplitude(
    config: RingConfig,
    params: LandauParams,
    winding: int = 0,
    grid_size: int = 1024,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> tuple[float, int]:
    """Iterate amplitude -> exact energy saving -> refitted quadratic coefficient.

    Starting from the leading-order amplitude, the quadratic coefficient is refitted
    as ``alpha + [E(0) - E(x)] / x^2`` with E the exact persistent-current energy of a
    cosine modulation of amplitude x.  Returns ``(amplitude, iterations)``.
    """
    uniform_energy = solve_steady(config, make_uniform_profile(grid_size, config.base_density), winding).energy
    x = equilibrium_amplitude(replace(params, alpha=effective_alpha(config, params, winding)))
    for iteration in range(1, max_iter + 1):
        if x == 0:
            return 0.0, iteration
        if not is_valid_amplitude(x, config):
            raise LandauConvergenceError(f"amplitude {x!r} left the valid range x < n0")
        saving = uniform_energy - solve_steady(config, _shaped_profile(config, x, grid_size), winding).energy
        x_new = equilibrium_amplitude(replace(params, alpha=params.alpha + saving / x**2))
        if abs(x_new - x) <= tol:
            return x_new, iteration
        x = x_new
    raise LandauConvergenceError(f"no fixed point within {max_iter} iterations (last amplitude {x!r})")
