"""Command-line interface: ``photondress <command> [options]``.

Commands and their fixed output columns (units in brackets):

  splitting      h0[G], omega0[rad/s], intensity[W/cm2], n0, mu[erg/G], g[rad/s],
                 Omega[rad/s], delta_eps[eV], variant
  levels         h0[G], omega0[rad/s], n0, j, shift[eV], energy[eV], sigma_z, method
  transitions    h0[G], omega0[rad/s], family, kind, initial_j, initial_dN, final_j,
                 final_dN, channel, delta_lz, frequency[rad/s], frequency[eV],
                 element[|mu|]
  magnetization  h0[G], temperature[K], density[1/cm3], M[erg/(G cm3)], M/(mu n),
                 direction, saturated
  verify         one line per acceptance check; exit status 2 if any fails

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 model-validity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import constants as const
from . import presets
from .analytic import (
    dressed_spin_half,
    energies_spin_j_limit,
    omega_classical,
    splitting_charged,
    splitting_charged_vacuum,
    splitting_exact_spin_half,
    splitting_neutral,
)
from .errors import ModelValidityError
from .model import (
    INTENSITY_CONVENTION,
    Particle,
    PhotonField,
    amplitude_to_intensity,
    erg_to_ev,
    ev_to_omega,
    half_integer,
    intensity_to_amplitude,
    kelvin_to_erg,
    omega_to_ev,
    wavelength_to_omega,
)
from .observables import figure_arrows, magnetization, spin_expectation, transition_spectrum

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_VALIDITY = 0, 1, 2, 3
MAX_SPIN = Fraction(25, 2)
SWEEP_NAMES = ("h0", "omega0", "wavelength", "intensity", "n0", "mu", "temperature")
SWEEP_UNITS = {
    "h0": "G",
    "omega0": "eV",
    "wavelength": "um",
    "intensity": "W/cm2",
    "n0": "photons",
    "mu": "Bohr magnetons",
    "temperature": "K",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def values(self) -> List[float]:
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.steps)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


def parse_sweep(text: str) -> SweepSpec:
    """Parse ``name=a:b:n[:log]``."""
    try:
        name, rng = text.split("=", 1)
        parts = rng.split(":")
        if len(parts) not in (3, 4):
            raise ValueError
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
        scale = parts[3] if len(parts) == 4 else "linear"
    except ValueError:
        raise UsageError(f"cannot parse sweep {text!r}; expected name=a:b:n[:log]") from None
    name = name.strip()
    if name not in SWEEP_NAMES:
        raise UsageError(f"unknown sweep parameter {name!r}; choose from {', '.join(SWEEP_NAMES)}")
    if scale not in ("linear", "log"):
        raise UsageError(f"sweep scale must be 'log' or omitted, got {scale!r}")
    if steps < 1:
        raise UsageError("sweep needs at least one step")
    if scale == "linear" and stop < start:
        raise UsageError("linear sweep needs stop >= start")
    if scale == "log" and not (start > 0 and stop > 0):
        raise UsageError("log sweep needs positive start and stop")
    return SweepSpec(name, start, stop, steps, scale)


# --- building the physical inputs ------------------------------------------


def build_particle(args, overrides: Dict[str, float]) -> Particle:
    k = (args.kx, args.ky, args.kz)
    if args.particle == "custom":
        if args.mu_bohr is None and args.mu_nuclear is None and "mu" not in overrides:
            raise UsageError("--particle custom needs --mu-bohr or --mu-nuclear")
        particle = Particle(mu=0.0, mass=const.M_ELECTRON, j_total="1/2", k=k)
    else:
        particle = presets.PARTICLES[args.particle](k=k)
    changes = {}
    if args.mass is not None:
        changes["mass"] = args.mass
    if args.charge is not None:
        changes["charge"] = args.charge * const.E_CHARGE
    if args.spin is not None:
        changes["j_total"] = args.spin
    if args.mu_anomalous_bohr is not None:
        changes["mu_anomalous"] = args.mu_anomalous_bohr * const.MU_BOHR
    if args.mu_bohr is not None:
        changes["mu"] = args.mu_bohr * const.MU_BOHR
    if args.mu_nuclear is not None:
        changes["mu"] = args.mu_nuclear * const.MU_NUCLEAR
    if "mu" in overrides:
        changes["mu"] = overrides["mu"] * const.MU_BOHR
    return particle.replace(**changes) if changes else particle


def build_field(args, overrides: Dict[str, float]) -> PhotonField:
    values = {
        "omega0": args.omega0_ev,
        "wavelength": args.wavelength_um,
        "h0": args.h0_gauss,
        "intensity": args.intensity_wcm2,
        "n0": args.n0,
    }
    for name in ("omega0", "wavelength", "h0", "intensity", "n0"):
        if name in overrides:
            values[name] = overrides[name]
            # a swept quantity replaces its alternative spelling
            partner = {"omega0": "wavelength", "wavelength": "omega0", "h0": "intensity", "intensity": "h0"}
            if name in partner and partner[name] not in overrides:
                values[partner[name]] = None
    if values["omega0"] is not None and values["wavelength"] is not None:
        raise UsageError("give either --omega0-ev or --wavelength-um, not both")
    if values["omega0"] is not None:
        omega0 = ev_to_omega(values["omega0"])
    elif values["wavelength"] is not None:
        omega0 = wavelength_to_omega(values["wavelength"])
    else:
        raise UsageError("the photon frequency needs --omega0-ev or --wavelength-um")
    if values["h0"] is not None and values["intensity"] is not None:
        raise UsageError("give either --h0-gauss or --intensity-wcm2, not both")
    h0 = values["h0"]
    if values["intensity"] is not None:
        h0 = intensity_to_amplitude(values["intensity"])
    n0 = values["n0"]
    h_tilde = args.h_tilde_gauss
    if h0 is None and (n0 is None or h_tilde is None):
        raise UsageError("the field amplitude needs --h0-gauss, --intensity-wcm2 or --n0 with --h-tilde-gauss")
    if h0 is None:
        return PhotonField.fock(omega0, n0, h_tilde, handedness=args.handedness)
    if h_tilde is not None and n0 is not None:
        # all three given: the model checks that they agree
        return PhotonField(omega0=omega0, n0=n0, h_tilde=h_tilde, h0=h0, handedness=args.handedness)
    if h_tilde is not None:
        raise UsageError("--h-tilde-gauss needs --n0")
    return PhotonField.classical(omega0, h0, n0=n0, handedness=args.handedness)


def _temperature(args, overrides) -> Optional[float]:
    t = overrides.get("temperature", args.temperature_k)
    return t


# --- per-point row producers ------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


SPLITTING_COLUMNS = (
    "h0[G]", "omega0[rad/s]", "intensity[W/cm2]", "n0", "mu[erg/G]", "g[rad/s]",
    "Omega[rad/s]", "delta_eps[eV]", "variant",
)
LEVELS_COLUMNS = ("h0[G]", "omega0[rad/s]", "n0", "j", "shift[eV]", "energy[eV]", "sigma_z", "method")
TRANSITIONS_COLUMNS = (
    "h0[G]", "omega0[rad/s]", "family", "kind", "initial_j", "initial_dN", "final_j", "final_dN",
    "channel", "delta_lz", "frequency[rad/s]", "frequency[eV]", "element[|mu|]",
)
MAGNETIZATION_COLUMNS = (
    "h0[G]", "temperature[K]", "density[1/cm3]", "M[erg/(G cm3)]", "M/(mu n)", "direction", "saturated",
)


def rows_splitting(args, overrides) -> List[dict]:
    field = build_field(args, overrides)
    particle = build_particle(args, overrides)
    variant = args.variant
    if variant == "auto":
        variant = "charged" if particle.is_charged else "neutral"
    check = not args.no_regime_check
    if variant == "neutral":
        result = splitting_neutral(field, particle)
        delta, big = result.delta_eps, result.big_omega
    elif variant == "charged":
        result = splitting_charged(field, particle, check_regime=check)
        delta, big = result.delta_eps, result.big_omega
    elif variant == "vacuum":
        result = splitting_charged_vacuum(field, particle, check_regime=check)
        delta, big = result.delta_eps, result.big_omega
    else:  # exact spin-1/2
        delta = splitting_exact_spin_half(field, particle, nonrelativistic=False)
        big = omega_classical(field, particle)
    h0 = field.amplitude
    return [
        {
            "h0[G]": h0,
            "omega0[rad/s]": field.omega0,
            "intensity[W/cm2]": amplitude_to_intensity(h0),
            "n0": field.n0,
            "mu[erg/G]": particle.mu,
            "g[rad/s]": 2.0 * particle.mu * h0 / const.HBAR,
            "Omega[rad/s]": big,
            "delta_eps[eV]": erg_to_ev(delta),
            "variant": variant,
        }
    ]


def rows_levels(args, overrides) -> List[dict]:
    field = build_field(args, overrides)
    particle = build_particle(args, overrides)
    big_j = particle.j_total
    if big_j > MAX_SPIN:
        raise UsageError(f"J = {big_j} exceeds the supported maximum {MAX_SPIN}")
    exact = big_j == Fraction(1, 2) and field.n0 is not None and field.h_tilde is not None and field.n0 >= 1
    hw = const.HBAR * field.omega0
    rows = []
    for i in range(int(2 * big_j) + 1):
        j = -big_j + i
        if exact:
            sol = dressed_spin_half(field, particle, j)
            shift, energy, sigma, method = sol.shift, sol.energy, spin_expectation(sol)[2], "exact"
        else:
            shift = energies_spin_j_limit(field, particle, j, check_regime=not args.no_regime_check, relative=True)
            energy = None if field.n0 is None else particle.kinetic_energy + field.n0 * hw + shift
            sigma, method = None, "intensive-limit"
        rows.append(
            {
                "h0[G]": field.amplitude,
                "omega0[rad/s]": field.omega0,
                "n0": field.n0,
                "j": j,
                "shift[eV]": erg_to_ev(shift),
                "energy[eV]": None if energy is None else erg_to_ev(energy),
                "sigma_z": sigma,
                "method": method,
            }
        )
    return rows


def rows_transitions(args, overrides) -> List[dict]:
    field = build_field(args, overrides)
    particle = build_particle(args, overrides)
    regime = "exact" if args.exact else "intensive"
    if args.ground_only:
        lines = figure_arrows(transition_spectrum(field, particle, from_ground=True, regime=regime))
    else:
        lines = transition_spectrum(field, particle, from_ground=False, regime=regime)
    mu = abs(particle.mu)
    rows = []
    for ln in lines:
        rows.append(
            {
                "h0[G]": field.amplitude,
                "omega0[rad/s]": field.omega0,
                "family": ln.family,
                "kind": ln.kind,
                "initial_j": ln.initial[0],
                "initial_dN": ln.initial[1],
                "final_j": ln.final[0],
                "final_dN": ln.final[1],
                "channel": ln.polarization_channel,
                "delta_lz": ln.delta_lz,
                "frequency[rad/s]": ln.frequency,
                "frequency[eV]": omega_to_ev(ln.frequency),
                "element[|mu|]": ln.element_magnitude / mu if mu > 0 else 0.0,
            }
        )
    return rows


def rows_magnetization(args, overrides) -> List[dict]:
    field = build_field(args, overrides)
    particle = build_particle(args, overrides)
    t_kelvin = _temperature(args, overrides)
    if t_kelvin is None:
        raise UsageError("magnetization needs --temperature-k (or a temperature sweep)")
    if not t_kelvin > 0:
        raise UsageError(f"temperature must be positive, got {t_kelvin!r} K")
    if args.density_cm3 < 0:
        raise UsageError("density must be non-negative")
    result = magnetization(field, particle, args.density_cm3, kelvin_to_erg(t_kelvin))
    unit = particle.mu * args.density_cm3
    return [
        {
            "h0[G]": field.amplitude,
            "temperature[K]": t_kelvin,
            "density[1/cm3]": args.density_cm3,
            "M[erg/(G cm3)]": result.magnitude,
            "M/(mu n)": result.magnitude / unit if unit != 0 else 0.0,
            "direction": "+ez" if result.direction > 0 else "-ez",
            "saturated": result.saturated,
        }
    ]


COMMANDS = {
    "splitting": (rows_splitting, SPLITTING_COLUMNS),
    "levels": (rows_levels, LEVELS_COLUMNS),
    "transitions": (rows_transitions, TRANSITIONS_COLUMNS),
    "magnetization": (rows_magnetization, MAGNETIZATION_COLUMNS),
}


def _evaluate_point(task):
    command, args, overrides = task
    return COMMANDS[command][0](args, overrides)


def evaluate(args) -> List[dict]:
    """Rows for every sweep point, in sweep order."""
    sweep = parse_sweep(args.sweep) if args.sweep else None
    points = [{}] if sweep is None else [{sweep.parameter: v} for v in sweep.values()]
    tasks = [(args.command, args, p) for p in points]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_evaluate_point, tasks))
    else:
        chunks = [_evaluate_point(t) for t in tasks]
    rows = []
    for point, chunk in zip(points, chunks):
        for row in chunk:
            if sweep is not None:
                row = {f"sweep:{sweep.parameter}[{SWEEP_UNITS[sweep.parameter]}]": point[sweep.parameter], **row}
            rows.append(row)
    return rows


# --- output -------------------------------------------------------------------


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.replace(microsecond=0).isoformat()


def manifest(args, argv: Sequence[str]) -> Dict[str, object]:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return {
        "command": args.command,
        "argv": list(argv),
        "parameters": params,
        "units": "Gaussian CGS; energies in eV in tables, fields in gauss, wave vectors in 1/cm",
        "intensity_convention": INTENSITY_CONVENTION,
        "version": __version__,
        "timestamp": _timestamp(),
    }


def render(rows: List[dict], columns: Sequence[str], fmt: str, man: Dict[str, object]) -> str:
    if rows and rows[0] and next(iter(rows[0])).startswith("sweep:"):
        columns = (next(iter(rows[0])),) + tuple(columns)
    if fmt == "json":
        body = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
        return json.dumps({"manifest": man, "rows": body}, indent=2, default=str) + "\n"
    buf = io.StringIO()
    for key, value in man.items():
        text = json.dumps(value, default=str) if isinstance(value, (dict, list)) else str(value)
        buf.write(f"# {key}: {text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_verify(args, argv) -> int:
    from . import verify

    results = verify.run_all(tolerance=args.tolerance, seed=args.seed)
    if args.output == "json":
        man = manifest(args, argv)
        body = [
            {"name": r.name, "passed": r.passed, "max_dev": r.max_dev, "tol": r.tol, "detail": r.detail}
            for r in results
        ]
        text = json.dumps({"manifest": man, "rows": body}, indent=2, default=str) + "\n"
    else:
        text = verify.report(results)
    _write(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# --- argument parsing ---------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("particle")
    g.add_argument("--particle", choices=("neutron", "electron", "hydrogen", "custom"), default="neutron")
    g.add_argument("--mu-bohr", type=float, help="magnetic moment in Bohr magnetons (overrides preset)")
    g.add_argument("--mu-nuclear", type=float, help="magnetic moment in nuclear magnetons (overrides preset)")
    g.add_argument("--mu-anomalous-bohr", type=float, help="anomalous moment in Bohr magnetons")
    g.add_argument("--spin", help='total angular momentum J, e.g. "1/2", "3/2"')
    g.add_argument("--mass", type=float, help="mass in grams")
    g.add_argument("--charge", type=float, help="charge in units of the elementary charge")
    g.add_argument("--kx", type=float, default=0.0, help="wave vector x component [1/cm]")
    g.add_argument("--ky", type=float, default=0.0, help="wave vector y component [1/cm]")
    g.add_argument("--kz", type=float, default=0.0, help="wave vector z component [1/cm]")
    f = p.add_argument_group("field")
    f.add_argument("--omega0-ev", type=float, help="photon energy ħω0 [eV]")
    f.add_argument("--wavelength-um", type=float, help="wavelength [μm]")
    f.add_argument("--h0-gauss", type=float, help="classical amplitude H0 [G]")
    f.add_argument("--intensity-wcm2", type=float, help=f"intensity [W/cm2], {INTENSITY_CONVENTION}")
    f.add_argument("--n0", type=float, help="photon occupation N0")
    f.add_argument("--h-tilde-gauss", type=float, help="single-photon amplitude [G]")
    f.add_argument("--handedness", choices=("cw", "ccw"), default="cw")
    o = p.add_argument_group("output")
    o.add_argument("--sweep", help="name=a:b:n[:log] with name in " + ", ".join(SWEEP_NAMES))
    o.add_argument("--output", choices=("csv", "json"), default="csv")
    o.add_argument("--out", help="write to this file instead of stdout")
    o.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    o.add_argument("--no-regime-check", action="store_true", help="evaluate closed forms outside their regime")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="photondress",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("splitting", help="spin splitting Δε of the dressed ground doublet")
    _add_common(p)
    p.add_argument("--variant", choices=("auto", "neutral", "charged", "vacuum", "exact"), default="auto")

    p = sub.add_parser("levels", help="dressed level energies for every j")
    _add_common(p)

    p = sub.add_parser("transitions", help="magnetodipole lines and element magnitudes")
    _add_common(p)
    p.add_argument("--ground-only", action="store_true", help="only the new lines out of the ground level")
    p.add_argument("--exact", action="store_true", help="photon-number dependent frequencies (needs N0, H̃0)")

    p = sub.add_parser("magnetization", help="equilibrium magnetization of a dilute gas")
    _add_common(p)
    p.add_argument("--temperature-k", type=float, help="temperature [K]")
    p.add_argument("--density-cm3", type=float, default=1.0, help="particle density [1/cm3]")

    p = sub.add_parser("verify", help="run the closed-form vs oracle checks")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None, help="replace every tolerance by this value")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--out")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            from .verify import DEFAULT_SEED

            if args.seed is None:
                args.seed = DEFAULT_SEED
            return run_verify(args, argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        rows = evaluate(args)
        _write(render(rows, COMMANDS[args.command][1], args.output, manifest(args, argv)), args.out)
        return EXIT_OK
    except ModelValidityError as exc:
        print(f"photondress: model validity error: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except (UsageError, ValueError) as exc:
        print(f"photondress: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
