"""Ring geometry, density profiles and the grid averages every solver uses.

All quantities are dimensionless.  The defaults set hbar = m = q = c = n0 = R = 1,
so the flux quantum corresponds to ``vector_potential * radius == 1`` and the
flux in flux quanta equals the vector potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "ProfileError",
    "RingConfig",
    "DensityProfile",
    "RingAverages",
    "DEFAULT_GRID_SIZE",
    "make_cosine_profile",
    "make_custom_profile",
    "make_uniform_profile",
    "random_profile",
    "compute_averages",
    "read_profile",
    "write_profile",
]

DEFAULT_GRID_SIZE = 1024
MIN_GRID_SIZE = 8
MEAN_TOL = 1e-12


class ProfileError(ValueError):
    """Raised when a density profile is malformed or the density vanishes."""


@dataclass(frozen=True)
class RingConfig:
    """Physical constants and geometry of the ring.

    ``vector_potential`` is the tangential vector potential A = flux / L.
    """

    radius: float = 1.0
    charge: float = 1.0
    mass: float = 1.0
    base_density: float = 1.0
    vector_potential: float = 0.0
    hbar: float = 1.0
    light_speed: float = 1.0

    def __post_init__(self):
        for name in ("radius", "mass", "base_density", "hbar", "light_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.charge) or self.charge == 0:
            raise ValueError(f"charge must be finite and non-zero, got {self.charge!r}")
        if not math.isfinite(self.vector_potential):
            raise ValueError("vector_potential must be finite")

    @classmethod
    def from_flux(cls, flux_quanta: float, **kwargs) -> "RingConfig":
        """Build a config whose threading flux is ``flux_quanta`` flux quanta."""
        probe = cls(**kwargs)
        return cls(vector_potential=flux_quanta * probe.flux_quantum_potential, **kwargs)

    @property
    def perimeter(self) -> float:
        return 2.0 * math.pi * self.radius

    @property
    def particle_number(self) -> float:
        """N0 = n0 L."""
        return self.base_density * self.perimeter

    @property
    def gauge_momentum(self) -> float:
        """qA/c, the gauge part of the momentum per particle."""
        return self.charge * self.vector_potential / self.light_speed

    @property
    def flux_quantum_potential(self) -> float:
        """Vector potential carrying one flux quantum, hbar c / (q R)."""
        return self.hbar * self.light_speed / (self.charge * self.radius)

    @property
    def flux_quanta(self) -> float:
        """Threading flux in units of the flux quantum, q A R / (hbar c)."""
        return self.vector_potential / self.flux_quantum_potential

    def winding_momentum(self, winding: int) -> float:
        """hbar nu / R, the phase-gradient momentum of winding ``nu``."""
        return self.hbar * winding / self.radius

    def drive(self, winding: int) -> float:
        """hbar nu / R - qA/c; energies and currents depend on the flux only through this."""
        return self.winding_momentum(winding) - self.gauge_momentum

    def with_potential(self, vector_potential: float) -> "RingConfig":
        return RingConfig(
            radius=self.radius,
            charge=self.charge,
            mass=self.mass,
            base_density=self.base_density,
            vector_potential=vector_potential,
            hbar=self.hbar,
            light_speed=self.light_speed,
        )

    def with_flux(self, flux_quanta: float) -> "RingConfig":
        return self.with_potential(flux_quanta * self.flux_quantum_potential)


@dataclass(frozen=True)
class DensityProfile:
    """Density modulation n1 sampled at theta_i = 2 pi i / N.

    The samples are absolute densities (not relative to ``base_density``).
    """

    samples: np.ndarray
    base_density: float = 1.0
    theta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ProfileError("profile samples must be one-dimensional")
        if samples.size < MIN_GRID_SIZE:
            raise ProfileError(f"grid_size must be at least {MIN_GRID_SIZE}, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise ProfileError("profile samples must be finite")
        if not (self.base_density > 0):
            raise ProfileError("base_density must be positive")
        mean = samples.mean()
        if abs(mean) > MEAN_TOL * self.base_density:
            raise ProfileError(f"profile mean {mean:.3e} is not zero; centre the samples first")
        if np.any(self.base_density + samples <= 0):
            raise ProfileError("density vanishes: n0 + n1 must be positive on the whole ring")
        samples.setflags(write=False)
        theta = 2.0 * np.pi * np.arange(samples.size) / samples.size
        theta.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "theta", theta)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def density(self) -> np.ndarray:
        """Total density n0 + n1 on the grid."""
        return self.base_density + self.samples

    @property
    def is_uniform(self) -> bool:
        return not np.any(self.samples)


@dataclass(frozen=True)
class RingAverages:
    inv_density_mean: float
    modulation_mean_square: float


def make_uniform_profile(grid_size: int = DEFAULT_GRID_SIZE, base_density: float = 1.0) -> DensityProfile:
    return DensityProfile(np.zeros(grid_size), base_density)


def make_cosine_profile(
    epsilon: float,
    harmonic: int = 1,
    grid_size: int = DEFAULT_GRID_SIZE,
    base_density: float = 1.0,
) -> DensityProfile:
    """Single-harmonic modulation ``epsilon * n0 * cos(harmonic * theta)``."""
    if not abs(epsilon) < 1:
        raise ProfileError(f"amplitude must satisfy |epsilon| < 1, got {epsilon!r}")
    if int(harmonic) != harmonic or harmonic < 1:
        raise ProfileError(f"harmonic must be a positive integer, got {harmonic!r}")
    if grid_size < MIN_GRID_SIZE:
        raise ProfileError(f"grid_size must be at least {MIN_GRID_SIZE}, got {grid_size}")
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    return DensityProfile(epsilon * base_density * np.cos(harmonic * theta), base_density)


def make_custom_profile(samples, base_density: float = 1.0) -> DensityProfile:
    """Centre arbitrary samples on their periodic mean and validate them."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size < MIN_GRID_SIZE:
        raise ProfileError(f"need a 1-D array of at least {MIN_GRID_SIZE} samples")
    centred = samples - samples.mean()
    # one more pass removes the rounding left by the first subtraction
    centred = centred - centred.mean()
    return DensityProfile(centred, base_density)


def random_profile(
    rng: np.random.Generator,
    epsilon: float,
    max_harmonics: int = 5,
    grid_size: int = DEFAULT_GRID_SIZE,
    base_density: float = 1.0,
) -> DensityProfile:
    """Random Fourier modulation with peak amplitude ``epsilon * n0``.

    Uses between one and ``max_harmonics`` harmonics drawn from 1..max_harmonics,
    each with a random amplitude and phase.
    """
    if not 0 <= epsilon < 1:
        raise ProfileError(f"amplitude must satisfy 0 <= epsilon < 1, got {epsilon!r}")
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    count = int(rng.integers(1, max_harmonics + 1))
    harmonics = rng.choice(np.arange(1, max_harmonics + 1), size=count, replace=False)
    amplitudes = rng.uniform(0.1, 1.0, size=count)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
    shape = np.zeros(grid_size)
    for k, a, phi in zip(harmonics, amplitudes, phases):
        shape += a * np.cos(k * theta + phi)
    shape -= shape.mean()
    peak = np.abs(shape).max()
    if epsilon == 0 or peak == 0:
        return make_uniform_profile(grid_size, base_density)
    return make_custom_profile(epsilon * base_density * shape / peak, base_density)


def _check_compatible(config: RingConfig, profile: DensityProfile) -> None:
    if not math.isclose(config.base_density, profile.base_density, rel_tol=1e-14):
        raise ProfileError(
            f"profile was built for n0={profile.base_density}, config has n0={config.base_density}"
        )


def compute_averages(config: RingConfig, profile: DensityProfile) -> RingAverages:
    """Grid means of 1/n and n1**2 by the periodic trapezoid rule."""
    _check_compatible(config, profile)
    return RingAverages(
        inv_density_mean=float(np.mean(1.0 / profile.density)),
        modulation_mean_square=float(np.mean(profile.samples**2)),
    )


def read_profile(path, base_density: float = 1.0) -> DensityProfile:
    """Read a one-sample-per-line table, optionally headed by ``# n1 profile N=<size>``."""
    declared = None
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].split()
            for token in body:
                if token.startswith("N="):
                    declared = int(token[2:])
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ProfileError(f"{path}:{lineno}: not a number: {line!r}") from None
    if declared is not None and declared != len(values):
        raise ProfileError(f"{path}: header declares N={declared} but file holds {len(values)} samples")
    return make_custom_profile(values, base_density)


def write_profile(path, profile: DensityProfile) -> None:
    lines = [f"# n1 profile N={profile.grid_size}"]
    lines += [repr(float(v)) for v in profile.samples]
    Path(path).write_text("\n".join(lines) + "\n")
