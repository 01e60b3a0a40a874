"""Command-line front end.

Parameters come from built-in defaults, then an optional ``--config`` file
(flat ``key = value`` lines, ``#`` comments), then command-line flags; each
later source overrides the earlier one field by field.

The default operating point (0.35 T, 1e5 T/m, 1 nm, g_zz = g_e, D from the
point-dipole tensor) is illustrative, chosen so all four transitions are
resolvable; it is not a measured or published set of values.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import tables
from .constants import CODATA2018, NANOMETER, from_mhz, to_mhz
from .dipole import (
    DEFAULT_AXIS,
    SpinDensity,
    classical_tensor,
    coupling_frequency,
    parse_spin_density,
    spin_density_tensor,
    sweep_distance,
)
from .dynamics import DEFAULT_MATCH_TOLERANCE, check_resolvable, concurrence, prepare_bell
from .errors import ResolutionError, SamQubitError
from .oscar import AdiabaticParams, adiabaticity, monte_carlo
from .spin_system import BasisState, SystemParams, energy_levels, g_from_shift, transition_frequencies

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class ConfigError(SamQubitError):
    """Inconsistent or incomplete run configuration."""


@dataclass
class RunConfig:
    """Run settings in display units (T, T/m, nm, MHz, Hz)."""

    b0: float = 0.35
    gradient: float = 1e5
    separation_nm: float = 1.0
    g_zz: float = CODATA2018.free_electron_g
    coupling_mhz: float | None = None  # None: point-dipole value at separation_nm
    b1: float = 1e-3
    delta_b: float = 0.01
    f_c: float = 5000.0
    eta_max: float = 0.1
    density_file: str | None = None
    format: str = "csv"
    output: str | None = None
    seed: int = 12345

    def coupling(self) -> float:
        """Coupling in rad/s."""
        if self.coupling_mhz is not None:
            return from_mhz(self.coupling_mhz)
        r = (0.0, self.separation_nm * NANOMETER, 0.0)
        return coupling_frequency(classical_tensor(r))

    def system_params(self) -> SystemParams:
        return SystemParams(
            b0=self.b0,
            gradient_g=self.gradient,
            separation_a=self.separation_nm * NANOMETER,
            g_zz=self.g_zz,
            coupling_d=self.coupling(),
        )

    def adiabatic_params(self) -> AdiabaticParams:
        return AdiabaticParams(
            b1=self.b1, delta_b=self.delta_b, omega_c=2 * math.pi * self.f_c, eta_max=self.eta_max
        )


_FIELD_TYPES = {
    "b0": float,
    "gradient": float,
    "separation_nm": float,
    "g_zz": float,
    "coupling_mhz": float,
    "b1": float,
    "delta_b": float,
    "f_c": float,
    "eta_max": float,
    "density_file": str,
    "format": str,
    "output": str,
    "seed": int,
}


def parse_config(text: str) -> dict:
    """Flat ``key = value`` config; keys are RunConfig field names."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _FIELD_TYPES[key](value)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        layer = parse_config(Path(args.config).read_text())
        config = dataclasses.replace(config, **layer)
    flags = {k: getattr(args, k) for k in _FIELD_TYPES if getattr(args, k, None) is not None}
    config = dataclasses.replace(config, **flags)
    if config.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {config.format!r}")
    return config


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _axis(text: str):
    try:
        vec = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"axis must be 'x,y,z', got {text!r}") from None
    if len(vec) != 3 or not any(vec):
        raise argparse.ArgumentTypeError(f"axis must be three numbers, not all zero: {text!r}")
    return vec


def _load_density(config: RunConfig):
    if not config.density_file:
        raise ConfigError("density method requires density_file (--density-file or config)")
    path = Path(config.density_file)
    with path.open() as fh:
        density = parse_spin_density(fh)
    if not density.label:
        density = SpinDensity(density.positions, density.weights, path.stem)
    return density


def cmd_levels(config: RunConfig, args) -> tuple[str, int]:
    params = config.system_params()
    levels = energy_levels(params)
    freqs = transition_frequencies(params)
    d_mhz = to_mhz(params.coupling_d)
    split2 = to_mhz(freqs.w2_1) - to_mhz(freqs.w2_0)
    split1 = to_mhz(freqs.w1_1) - to_mhz(freqs.w1_0)
    total = sum(to_mhz(e) for e in levels.values())
    if config.format == "json":
        return _json({
            "levels_MHz": {s.name: to_mhz(e) for s, e in levels.items()},
            "transitions_MHz": {t.label: to_mhz(w) for t, w in freqs.items()},
            "D_MHz": d_mhz,
            "check": {"w2_1-w2_0_MHz": split2, "w1_1-w1_0_MHz": split1, "sum_levels_MHz": total},
        }), EXIT_OK
    rows = [("level", s.name, to_mhz(e)) for s, e in levels.items()]
    rows += [("transition", t.label, to_mhz(w)) for t, w in freqs.items()]
    notes = [
        f"check: w2_1 - w2_0 = {split2:.4g} MHz, w1_1 - w1_0 = {split1:.4g} MHz, D = {d_mhz:.4g} MHz",
        f"check: sum of levels = {total:.4g} MHz",
    ]
    return tables.write_csv(tables.LEVELS_HEADER, rows) + "".join(f"# {n}\n" for n in notes), EXIT_OK


def cmd_dtensor(config: RunConfig, args) -> tuple[str, int]:
    u = [v / math.sqrt(sum(c * c for c in args.axis)) for v in args.axis]
    r = [config.separation_nm * NANOMETER * v for v in u]
    if args.method == "density":
        tensor = spin_density_tensor(_load_density(config), r)
    else:
        tensor = classical_tensor(r)
    mhz = tensor.in_hz() / 1e6
    if config.format == "json":
        return _json({
            "method": tensor.method.value,
            "label": tensor.label,
            "separation_nm": config.separation_nm,
            "axis": list(u),
            "D_MHz": mhz.tolist(),
            "coupling_MHz": abs(float(mhz[2, 2])),
        }), EXIT_OK
    rows = [(i, j, float(mhz[i, j]), tensor.method.value, tensor.label) for i in range(3) for j in range(3)]
    return tables.write_csv(tables.TENSOR_HEADER, rows), EXIT_OK


def cmd_sweep(config: RunConfig, args) -> tuple[str, int]:
    if args.n < 2:
        raise _UsageError(f"-n must be at least 2, got {args.n}")
    if not 0 < args.a_min_nm < args.a_max_nm:
        raise _UsageError(f"need 0 < a_min < a_max, got {args.a_min_nm}, {args.a_max_nm}")
    methods = ["classical", "density"] if args.method == "both" else [args.method]
    density = _load_density(config) if "density" in methods else None
    a_min, a_max = args.a_min_nm * NANOMETER, args.a_max_nm * NANOMETER
    columns = [sweep_distance(m, a_min, a_max, args.n, args.axis, density) for m in methods]
    # Interleave by separation; method order is stable (classical first).
    rows = [row for group in zip(*columns) for row in group]
    if config.format == "json":
        return _json([
            {"a_nm": r.a / NANOMETER, "D_MHz": r.d_mhz, "method": r.method, "label": r.label} for r in rows
        ]), EXIT_OK
    return tables.sweep_csv(rows), EXIT_OK


_SPLITTING_HINT = {
    frozenset(("w2_0", "w2_1")): "coupling D",
    frozenset(("w1_0", "w1_1")): "coupling D",
    frozenset(("w2_0", "w1_0")): "gradient splitting g*muB*G*a",
    frozenset(("w2_1", "w1_1")): "gradient splitting g*muB*G*a",
    frozenset(("w1_0", "w2_1")): "difference |g*muB*G*a - D|",
    frozenset(("w2_0", "w1_1")): "sum g*muB*G*a + D",
}


def cmd_entangle(config: RunConfig, args) -> tuple[str, int]:
    params = config.system_params()
    try:
        check_resolvable(params, DEFAULT_MATCH_TOLERANCE)
    except ResolutionError as exc:
        hint = _SPLITTING_HINT[frozenset(exc.pair)]
        raise ConfigError(f"{exc}; the {hint} is too small") from None
    if args.trials < 1:
        raise _UsageError(f"--trials must be >= 1, got {args.trials}")
    state = prepare_bell(params)
    conc = concurrence(state)
    counts = monte_carlo(lambda: state, params, args.trials, config.seed)
    pops = {s.name: float(p) for s, p in zip(BasisState, state.populations)}
    if config.format == "json":
        return _json({
            "seed": config.seed,
            "trials": args.trials,
            "populations": pops,
            "concurrence": conc,
            "histogram": {o.value: c for o, c in counts.items()},
        }), EXIT_OK
    notes = [f"seed {config.seed}", f"trials {args.trials}"]
    notes += [f"population {name} {p!r}" for name, p in pops.items()]
    notes.append(f"concurrence {conc:.6f}")
    return tables.histogram_csv(counts, notes), EXIT_OK


def cmd_adiabatic(config: RunConfig, args) -> tuple[str, int]:
    p = config.adiabatic_params()
    eta, ok = adiabaticity(p)
    verdict = "ADIABATIC" if ok else "VIOLATED"
    status = EXIT_OK if ok else EXIT_INVALID
    if config.format == "json":
        return _json({"eta": eta, "eta_max": p.eta_max, "verdict": verdict}), status
    return tables.write_csv(("eta", "eta_max", "verdict"), [(eta, p.eta_max, verdict)]), status


def cmd_gshift(config: RunConfig, args) -> tuple[str, int]:
    rows = [(ppm, g_from_shift(ppm)) for ppm in args.ppm]
    if config.format == "json":
        return _json([{"shift_ppm": ppm, "g": round(g, 6)} for ppm, g in rows]), EXIT_OK
    return tables.write_csv(("shift_ppm", "g"), [(ppm, f"{g:.6f}") for ppm, g in rows]), EXIT_OK


class _UsageError(Exception):
    pass


def _global_flags(default=None) -> argparse.ArgumentParser:
    # Subcommands get SUPPRESS so a flag given before the command is not reset.
    p = argparse.ArgumentParser(add_help=False, argument_default=default)
    g = p.add_argument_group("global")
    g.add_argument("--config", metavar="PATH", help="flat key = value config file")
    g.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--seed", type=int)
    s = p.add_argument_group("system parameters")
    s.add_argument("--b0", type=float, help="field at spin 2 (T)")
    s.add_argument("--gradient", type=float, help="|dBz/dy| (T/m)")
    s.add_argument("--separation-nm", dest="separation_nm", type=float, help="spin separation a (nm)")
    s.add_argument("--g-zz", dest="g_zz", type=float)
    s.add_argument("--coupling-mhz", dest="coupling_mhz", type=float,
                   help="|D_zz|/h in MHz (default: point-dipole value at a)")
    s.add_argument("--density-file", dest="density_file", metavar="PATH")
    a = p.add_argument_group("adiabatic readout")
    a.add_argument("--b1", type=float, help="rf amplitude (T)")
    a.add_argument("--delta-b", dest="delta_b", type=float, help="effective-field sweep amplitude (T)")
    a.add_argument("--f-c", dest="f_c", type=float, help="cantilever frequency (Hz)")
    a.add_argument("--eta-max", dest="eta_max", type=float)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="samqubits", description=__doc__.splitlines()[0], parents=[_global_flags()])
    common = _global_flags(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("levels", "freqs"):
        p = sub.add_parser(name, parents=[common], help="energy levels and transition frequencies")
        p.set_defaults(func=cmd_levels)

    p = sub.add_parser("dtensor", parents=[common], help="dipole coupling tensor at the configured separation")
    p.add_argument("--method", choices=("classical", "density"), default="classical")
    p.add_argument("--axis", type=_axis, default=DEFAULT_AXIS)
    p.set_defaults(func=cmd_dtensor)

    p = sub.add_parser("sweep", parents=[common], help="|D_zz| versus separation")
    p.add_argument("--method", choices=("classical", "density", "both"), default="classical")
    p.add_argument("--a-min-nm", dest="a_min_nm", type=float, default=1.0)
    p.add_argument("--a-max-nm", dest="a_max_nm", type=float, default=2.0)
    p.add_argument("-n", type=int, default=11)
    p.add_argument("--axis", type=_axis, default=DEFAULT_AXIS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("entangle", parents=[common], help="prepare the Bell state and run the readout protocol")
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("adiabatic", parents=[common], help="check the adiabatic-reversal condition")
    p.set_defaults(func=cmd_adiabatic)

    p = sub.add_parser("gshift", parents=[common], help="g values from g-shifts in ppm")
    p.add_argument("ppm", type=float, nargs="+")
    p.set_defaults(func=cmd_gshift)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        text, status = args.func(config, args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"samqubits: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SamQubitError, ValueError, OSError) as exc:
        print(f"samqubits: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
