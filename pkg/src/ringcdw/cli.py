"""Command-line sweeps and certificate runs.

Subcommands: ``steady``, ``flux-sweep``, ``omega-sweep``, ``amplitude-sweep``,
``landau-sweep``, ``certify`` and ``run`` (kind taken from the config file).

Exit status: 0 success, 1 physics violation in a certificate, 2 usage error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .emit import render_csv, render_json, render_table
from .landau import LandauParams, instability_sweep
from .ring import (
    DEFAULT_GRID_SIZE,
    DensityProfile,
    ProfileError,
    RingConfig,
    compute_averages,
    make_cosine_profile,
    make_uniform_profile,
    read_profile,
)
from .rotating import (
    DERIVATIVE_TOL,
    FrameConsistencyError,
    certify_no_linear_term,
    perturbative_stiffness,
    rotation_scan,
    rotational_stiffness,
)
from .steady import (
    angular_momentum_perturbative,
    ground_state_winding,
    perturbative_current,
    perturbative_energy,
    solve_steady,
)

__all__ = ["SpecError", "SweepSpec", "load_config", "run", "main"]

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

KINDS = ("steady", "flux", "omega", "amplitude", "landau", "certificate")
SUBCOMMANDS = {
    "steady": "steady",
    "flux-sweep": "flux",
    "omega-sweep": "omega",
    "amplitude-sweep": "amplitude",
    "landau-sweep": "landau",
    "certify": "certificate",
}
DEFAULT_GRIDS = {
    "flux": (0.0, 2.0, 201),
    "omega": (-0.2, 0.2, 41),
    "amplitude": (0.0, 0.5, 51),
    "landau": (0.0, 1.0, 101),
}


class SpecError(ValueError):
    """Invalid sweep specification; maps to exit status 2."""


@dataclass
class BaseSpec:
    radius: float = 1.0
    charge: float = 1.0
    mass: float = 1.0
    base_density: float = 1.0
    flux: float = 0.0
    epsilon: float = 0.0
    harmonic: int = 1
    profile_file: str | None = None
    winding: int | str = "auto"
    grid_size: int = DEFAULT_GRID_SIZE
    alpha: float = -0.1
    beta: float = 0.5
    shape_factor: float = 0.5


@dataclass
class CertificateSpec:
    cases: int = 100
    seed: int = 42
    max_potential: float = 0.5
    max_epsilon: float = 0.4
    max_harmonics: int = 5


@dataclass
class OutputSpec:
    path: str | None = None
    format: str | None = None
    precision: int = 12


@dataclass
class SweepSpec:
    kind: str
    grid: tuple[float, float, int] | None = None
    base: BaseSpec = field(default_factory=BaseSpec)
    certificate: CertificateSpec = field(default_factory=CertificateSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    def validate(self) -> "SweepSpec":
        if self.kind not in KINDS:
            raise SpecError(f"kind: unknown sweep kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.grid is None and self.kind in DEFAULT_GRIDS:
            self.grid = DEFAULT_GRIDS[self.kind]
        if self.grid is not None:
            start, stop, count = self.grid
            if count < 1:
                raise SpecError("grid: count must be at least 1")
            if start > stop:
                raise SpecError("grid: start must not exceed stop")
        b = self.base
        if not abs(b.epsilon) < 1:
            raise SpecError(f"epsilon: amplitude must satisfy |epsilon| < 1, got {b.epsilon}")
        if b.harmonic < 1:
            raise SpecError("harmonic: must be a positive integer")
        if b.grid_size < 8:
            raise SpecError("grid_size: must be at least 8")
        for name in ("radius", "mass", "base_density"):
            if not getattr(b, name) > 0:
                raise SpecError(f"{name}: must be positive")
        if b.charge == 0:
            raise SpecError("charge: must be non-zero")
        if not b.beta > 0:
            raise SpecError("beta: must be positive")
        if not b.shape_factor > 0:
            raise SpecError("shape_factor: must be positive")
        if b.winding != "auto" and not isinstance(b.winding, int):
            raise SpecError("winding: expected an integer or 'auto'")
        if self.kind == "amplitude" and b.profile_file:
            raise SpecError("profile_file: amplitude sweeps use the cosine shape")
        if self.kind == "amplitude" and self.grid[1] >= 1:
            raise SpecError("grid: amplitude sweep must stay below epsilon = 1")
        c = self.certificate
        if c.cases < 1:
            raise SpecError("cases: must be at least 1")
        if c.seed < 0:
            raise SpecError("seed: must be a non-negative integer")
        if not 0 <= c.max_epsilon < 1:
            raise SpecError("max_epsilon: must lie in [0, 1)")
        if c.max_harmonics < 1:
            raise SpecError("max_harmonics: must be at least 1")
        o = self.output
        if o.format is None:
            o.format = "json" if self.kind == "certificate" else "csv"
        if o.format not in ("csv", "json"):
            raise SpecError(f"format: expected csv or json, got {o.format!r}")
        if not 6 <= o.precision <= 17:
            raise SpecError("precision: must lie in [6, 17]")
        return self

    def to_dict(self) -> dict:
        record = dataclasses.asdict(self)
        # where the output goes is not part of what was computed
        del record["output"]["path"]
        return record

    def ring_config(self, flux: float | None = None) -> RingConfig:
        b = self.base
        return RingConfig.from_flux(
            b.flux if flux is None else flux,
            radius=b.radius,
            charge=b.charge,
            mass=b.mass,
            base_density=b.base_density,
        )

    def profile(self, epsilon: float | None = None) -> DensityProfile:
        b = self.base
        if b.profile_file and epsilon is None:
            return read_profile(b.profile_file, b.base_density)
        eps = b.epsilon if epsilon is None else epsilon
        if eps == 0:
            return make_uniform_profile(b.grid_size, b.base_density)
        return make_cosine_profile(eps, b.harmonic, b.grid_size, b.base_density)

    def grid_values(self) -> np.ndarray:
        start, stop, count = self.grid
        return np.linspace(start, stop, count)


SECTIONS = {"base": BaseSpec, "certificate": CertificateSpec, "output": OutputSpec}
GRID_KEYS = ("start", "stop", "count")


def _coerce(section: str, key: str, raw: str, target):
    if key == "winding":
        if raw.strip().lower() == "auto":
            return "auto"
        target = int
    elif key in ("profile_file", "path", "format"):
        return raw.strip()
    try:
        if target is int:
            return int(raw)
        return float(raw)
    except ValueError:
        raise SpecError(f"{section}.{key}: cannot parse {raw!r} as {target.__name__}") from None


def _field_type(cls, key):
    hint = {f.name: f for f in dataclasses.fields(cls)}[key]
    default = hint.default
    if isinstance(default, int):
        return int
    return float


def load_config(path) -> SweepSpec:
    """Parse a ``key = value`` configuration with optional [base], [grid], [output] and
    [certificate] sections.  Relative profile paths resolve against the file's directory."""
    path = Path(path)
    text = path.read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string("[__top__]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise SpecError(f"{path}: {exc}") from None

    top = dict(parser["__top__"])
    if "kind" not in top:
        raise SpecError("kind: missing required key")
    kind = top.pop("kind").strip()
    spec = SweepSpec(kind=kind)
    # top-level conveniences
    for key, raw in top.items():
        if key in ("seed", "cases"):
            setattr(spec.certificate, key, _coerce("certificate", key, raw, int))
        else:
            raise SpecError(f"{key}: unknown top-level key")

    for section in parser.sections():
        if section == "__top__":
            continue
        items = dict(parser[section])
        if section == "grid":
            unknown = set(items) - set(GRID_KEYS)
            if unknown:
                raise SpecError(f"grid.{sorted(unknown)[0]}: unknown key")
            missing = [k for k in GRID_KEYS if k not in items]
            if missing:
                raise SpecError(f"grid.{missing[0]}: missing required key")
            spec.grid = (
                _coerce("grid", "start", items["start"], float),
                _coerce("grid", "stop", items["stop"], float),
                _coerce("grid", "count", items["count"], int),
            )
            continue
        if section not in SECTIONS:
            raise SpecError(f"[{section}]: unknown section")
        target = getattr(spec, section)
        cls = SECTIONS[section]
        known = {f.name for f in dataclasses.fields(cls)}
        for key, raw in items.items():
            if key not in known:
                raise SpecError(f"{section}.{key}: unknown key")
            value = _coerce(section, key, raw, _field_type(cls, key))
            setattr(target, key, value)

    if spec.base.profile_file and not Path(spec.base.profile_file).is_absolute():
        spec.base.profile_file = str(path.parent / spec.base.profile_file)
    return spec


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise SpecError(f"--grid: expected start:stop:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SpecError(f"--grid: cannot parse {text!r}") from None


def _parse_winding(text: str):
    if text.lower() == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise SpecError(f"--winding: expected an integer or 'auto', got {text!r}") from None


def _apply_overrides(spec: SweepSpec, args) -> None:
    b, c, o = spec.base, spec.certificate, spec.output
    for attr, target, name in (
        ("flux", b, "flux"),
        ("epsilon", b, "epsilon"),
        ("harmonic", b, "harmonic"),
        ("grid_size", b, "grid_size"),
        ("profile_file", b, "profile_file"),
        ("alpha", b, "alpha"),
        ("beta", b, "beta"),
        ("seed", c, "seed"),
        ("cases", c, "cases"),
        ("out", o, "path"),
        ("format", o, "format"),
        ("precision", o, "precision"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(target, name, value)
    if getattr(args, "winding", None) is not None:
        b.winding = _parse_winding(args.winding)
    if getattr(args, "grid", None) is not None:
        spec.grid = _parse_grid(args.grid)


def _winding(spec: SweepSpec, config: RingConfig, profile: DensityProfile) -> int:
    if spec.base.winding == "auto":
        return ground_state_winding(config, profile)
    return int(spec.base.winding)


def _run_steady(spec):
    config = spec.ring_config()
    profile = spec.profile()
    winding = _winding(spec, config, profile)
    state = solve_steady(config, profile, winding)
    avg = compute_averages(config, profile)
    rows = [{"flux": config.flux_quanta, **state.to_record()}]
    summary = {
        "inv_density_mean": avg.inv_density_mean,
        "modulation_mean_square": avg.modulation_mean_square,
        "current_perturbative": perturbative_current(config, profile, winding),
        "energy_perturbative": perturbative_energy(config, profile, winding),
        "circulation": float(np.mean(state.phase_gradient)) * config.radius / config.hbar,
    }
    return rows, summary, (state, profile)


def _run_flux(spec):
    profile = spec.profile()
    rows = []
    for flux in spec.grid_values():
        config = spec.ring_config(float(flux))
        state = solve_steady(config, profile, _winding(spec, config, profile))
        rows.append({"flux": float(flux), **state.to_record()})
    return rows, {"points": len(rows)}, None


def _run_omega(spec):
    config = spec.ring_config()
    profile = spec.profile()
    winding = _winding(spec, config, profile)
    scan = rotation_scan(config, profile, winding, spec.grid_values())
    rows = [{"omega": float(w), "energy": float(e)} for w, e in zip(scan.omegas, scan.energies)]
    return rows, {"winding": winding, **scan.summary()}, None


def _run_amplitude(spec):
    config = spec.ring_config()
    rows = []
    for eps in spec.grid_values():
        profile = spec.profile(float(eps))
        winding = _winding(spec, config, profile)
        state = solve_steady(config, profile, winding)
        rows.append(
            {
                "epsilon": float(eps),
                "winding": winding,
                "current": state.current,
                "current_perturbative": perturbative_current(config, profile, winding),
                "energy": state.energy,
                "energy_perturbative": perturbative_energy(config, profile, winding),
                "angular_momentum": state.angular_momentum,
                "angular_momentum_perturbative": angular_momentum_perturbative(config, profile),
                "stiffness": rotational_stiffness(config, profile, winding),
                "stiffness_perturbative": perturbative_stiffness(config, profile),
            }
        )
    return rows, {"points": len(rows)}, None


def _run_landau(spec):
    b = spec.base
    params = LandauParams(b.alpha, b.beta, b.shape_factor)
    points = instability_sweep(spec.ring_config(), params, spec.grid_values(), b.grid_size)
    rows = [p.to_record() for p in points]
    summary = {
        "alpha": b.alpha,
        "beta": b.beta,
        "shape_factor": b.shape_factor,
        "invalid_points": sum(not p.valid for p in points),
    }
    return rows, summary, None


def _run_certificate(spec):
    c = spec.certificate
    base = spec.ring_config()
    cases = certify_no_linear_term(
        cases=c.cases,
        seed=c.seed,
        max_potential=c.max_potential,
        max_epsilon=c.max_epsilon,
        max_harmonics=c.max_harmonics,
        grid_size=spec.base.grid_size,
        base=base,
    )
    rows = [case.to_record() for case in cases]
    failures = [case.index for case in cases if not case.passed]
    summary = {
        "seed": c.seed,
        "cases": len(cases),
        "tolerance": DERIVATIVE_TOL,
        "max_abs_derivative": max(abs(case.derivative) for case in cases),
        "max_normalized_derivative": max(abs(case.derivative) / max(case.energy, 1.0) for case in cases),
        "max_even_asymmetry": max((abs(case.asymmetry) for case in cases if case.winding == 0), default=0.0),
        "violations": failures,
        "passed": not failures,
    }
    return rows, summary, None


RUNNERS = {
    "steady": _run_steady,
    "flux": _run_flux,
    "omega": _run_omega,
    "amplitude": _run_amplitude,
    "landau": _run_landau,
    "certificate": _run_certificate,
}


def render(spec: SweepSpec, rows, summary) -> str:
    o = spec.output
    if o.format == "json":
        return render_json(spec.to_dict(), rows, summary, o.precision)
    return render_csv(rows, o.precision)


def run(spec: SweepSpec, stdout=None, phase_table: str | None = None) -> int:
    """Execute a validated spec and write its output; return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    spec.validate()
    try:
        rows, summary, extra = RUNNERS[spec.kind](spec)
    except ProfileError as exc:
        raise SpecError(str(exc)) from None
    except FrameConsistencyError as exc:
        rows, summary, extra = [], {"error": str(exc), "passed": False}, None
        spec.output.format = "json"
        _emit(spec, render(spec, rows, summary), stdout)
        return EXIT_VIOLATION
    text = render(spec, rows, summary)
    _emit(spec, text, stdout)
    if phase_table and extra is not None:
        state, profile = extra
        Path(phase_table).write_text(render_table([profile.theta, state.phase_gradient]))
    if spec.kind == "certificate" and not summary["passed"]:
        return EXIT_VIOLATION
    return EXIT_OK


def _emit(spec, text, stdout):
    if spec.output.path:
        Path(spec.output.path).write_text(text)
    else:
        stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringcdw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--flux", type=float, help="threading flux in flux quanta")
    common.add_argument("--epsilon", type=float, help="cosine modulation amplitude (fraction of n0)")
    common.add_argument("--harmonic", type=int)
    common.add_argument("--profile-file", dest="profile_file", help="n1 sample table")
    common.add_argument("--winding", help="integer or 'auto' for the ground state")
    common.add_argument("--grid", help="start:stop:count of the swept parameter")
    common.add_argument("--grid-size", dest="grid_size", type=int)
    common.add_argument("--out", help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--precision", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--cases", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)

    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "steady":
            p.add_argument("--phase-table", dest="phase_table", help="write (theta, hbar grad S) table here")
    sub.add_parser("run", parents=[common], help="run the kind named in --config")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            spec = load_config(args.config)
        elif args.command == "run":
            raise SpecError("run: --config is required")
        else:
            spec = SweepSpec(kind=SUBCOMMANDS[args.command])
        if args.command != "run":
            spec.kind = SUBCOMMANDS[args.command]
        _apply_overrides(spec, args)
        spec.validate()
        return run(spec, phase_table=getattr(args, "phase_table", None))
    except SpecError as exc:
        print(f"ringcdw: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ringcdw: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
