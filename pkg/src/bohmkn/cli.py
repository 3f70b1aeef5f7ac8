"""Command-line front end.

Exit codes: 0 success, 1 numerical failure (or a failed verify suite),
2 configuration or validation error.  Errors are reported as one JSON
object on stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .config import Scenario, default_config_text, load_config, parse_config
from .current import quantum_current
from .ensemble import ensemble_field, loglog_slope, radiated_power, sample_amplitudes
from .errors import BohmKNError, ConfigError, NoRetardedRoot, NumericalError
from .io import Table, render
from .lienard_wiechert import null_roots
from .minkowski import electric_magnetic
from .tolerances import DEFAULT
from .trajectory import GaussTrajectory, position, velocity
from .verify import SUITES, run_verify


def _floats(text: str, n: int | None, name: str) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(name, f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(name, f"expected {n} numbers")
    if not np.all(np.isfinite(vals)):
        raise ConfigError(name, "must be finite")
    return np.array(vals)


def _scenario(args) -> Scenario:
    sc = load_config(args.config) if args.config else parse_config(default_config_text())
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed", "must be in [0, 2^64)")
        sc.seed = args.seed
    return sc


def _tolerances(args):
    if args.tolerance is None:
        return DEFAULT
    if not args.tolerance > 0:
        raise ConfigError("--tolerance", "must be positive")
    return dataclasses.replace(DEFAULT, root_residual=args.tolerance)


def _base_header(sc: Scenario) -> dict:
    p = sc.packet
    return {"units": sc.units.name, "length_unit": sc.units.length_label(), "u": list(p.u),
            "sigmaI": list(p.sigma_i), "M": p.M, "hbar": p.hbar, "q": sc.q}


def cmd_trajectory(args, sc: Scenario) -> Table:
    amp = sc.units.to_internal(_floats(args.amp, 4, "--amp"))
    lo, hi = sc.units.to_internal(_floats(args.s_range, 2, "--s-range"))
    if args.samples < 0:
        raise ConfigError("--samples", "must be non-negative")
    t = GaussTrajectory(sc.packet, amp, sc.offset).on_sheet(args.sheet)
    s = np.linspace(lo, hi, args.samples) if hi > lo else np.empty(0)
    cols = ["s"] + [f"{c}_X{m}" for m in range(4) for c in ("re", "im")] \
        + [f"{c}_V{m}" for m in range(4) for c in ("re", "im")]
    rows = []
    if s.size:
        X = position(t, s)
        V = velocity(t, s)
        for i in range(s.size):
            rows.append([float(s[i])] + [float(f(X[i, m])) for m in range(4) for f in (np.real, np.imag)]
                        + [float(f(V[i, m])) for m in range(4) for f in (np.real, np.imag)])
    gam = sc.packet.gamma
    header = _base_header(sc) | {"amp": list(amp), "sheet": args.sheet, "Gamma": list(gam)}
    if sc.units.length_m is not None:
        header["Gamma_per_s"] = [float(sc.units.rate_si(g)) for g in gam]
    return Table(cols, rows, header)


def cmd_roots(args, sc: Scenario) -> Table:
    amp = np.zeros(4) if args.amp is None else sc.units.to_internal(_floats(args.amp, 4, "--amp"))
    xs = [sc.units.to_internal(_floats(args.x, 4, "--x"))] if args.x else list(sc.grid_points())
    t = GaussTrajectory(sc.packet, amp, sc.offset)
    tol = _tolerances(args)
    rows = []
    for x in xs:
        for r in null_roots(x, t, tol):
            rows.append([float(v) for v in x] + [r.s.real, r.s.imag + 0.0, r.sheet, r.kind, r.residual])
    return Table(["x0", "x1", "x2", "x3", "re_s", "im_s", "sheet", "kind", "residual"], rows,
                 _base_header(sc) | {"amp": list(amp)})


def _field(pts, sc: Scenario, args, members=None):
    res = ensemble_field(pts, sc.ensemble(), args.part, args.threads, members, tol=_tolerances(args))
    if res.skipped == res.used:
        # complex roots (e.g. from a spin offset) are kept out of physical sums
        raise NoRetardedRoot("no member has a real retarded root at some field point; "
                             "inspect the roots with the roots subcommand")
    return res


def cmd_field(args, sc: Scenario) -> Table:
    pts = sc.grid_points()
    res = _field(pts, sc, args)
    E, B = electric_magnetic(np.real(res.F))
    cols = ["x0", "x1", "x2", "x3", "Ex", "Ey", "Ez", "Bx", "By", "Bz"]
    rows = [[float(v) for v in pts[i]] + [float(v) for v in E[i]] + [float(v) for v in B[i]]
            for i in range(pts.shape[0])]
    return Table(cols, rows, _base_header(sc) | {"part": args.part, "N": sc.N, "seed": sc.seed,
                                                  "members": res.used, "skipped_max": res.skipped})


def cmd_current(args, sc: Scenario) -> Table:
    pts = sc.grid_points()
    J = quantum_current(pts, sc.packet, sc.q)
    rows = [[float(v) for v in pts[i]] + [float(v) for v in J[i]] for i in range(pts.shape[0])]
    return Table(["x0", "x1", "x2", "x3", "J0", "J1", "J2", "J3"], rows, _base_header(sc))


def cmd_power(args, sc: Scenario) -> Table:
    spec = sc.ensemble()
    members = sample_amplitudes(spec)
    shift = 5.0 * float(np.max(sc.packet.sigma_i))
    P = radiated_power(lambda pts: _field(pts, sc, args, members).F, sc.radii, x0_of_R=lambda R: R + shift)
    header = _base_header(sc) | {"part": args.part, "N": sc.N, "seed": sc.seed}
    if len(sc.radii) > 1:
        header["loglog_slope"] = loglog_slope(sc.radii, P)
    return Table(["R", "power"], [[float(r), float(v)] for r, v in zip(sc.radii, P)], header)


def cmd_verify(args, sc: Scenario) -> Table:
    suites = None
    if args.suites:
        suites = args.suites.split(",")
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise ConfigError("--suites", f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    table, _ = run_verify(sc, sc.seed, args.threads, suites)
    return table


COMMANDS = {"trajectory": cmd_trajectory, "roots": cmd_roots, "field": cmd_field,
            "current": cmd_current, "power": cmd_power, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file (default: the built-in scenario)")
    common.add_argument("--seed", type=int, help="override ensemble.seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    common.add_argument("--tolerance", type=float, help="override the null-root residual tolerance")
    common.add_argument("--format", choices=("csv", "json"), help="override output.format")
    common.add_argument("--output", help="write here instead of output.path or stdout")

    ap = argparse.ArgumentParser(prog="bohmkn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("trajectory", parents=[common], help="dump X(s), V(s) of one member")
    p.add_argument("--amp", default="0,1,0,0", help="amplitude A as four comma-separated lengths")
    p.add_argument("--sheet", type=int, choices=(1, -1), default=1)
    p.add_argument("--s-range", default="-5,5",
                   help="lo,hi world-time range (a length, like --amp); lo >= hi gives no rows")
    p.add_argument("--samples", type=int, default=101)
    p = sub.add_parser("roots", parents=[common], help="null roots of both sheets")
    p.add_argument("--amp", help="amplitude A (default 0)")
    p.add_argument("--x", help="field point x0,x1,x2,x3 (default: the config grid)")
    for name, text in (("field", "ensemble field (E, B) on the config grid"),
                       ("power", "radiated power through spheres of the config radii")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--part", choices=("total", "velocity", "acceleration"), default="total")
    sub.add_parser("current", parents=[common], help="quantum current on the config grid")
    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    sub.add_parser("default-config", help="print the built-in scenario")
    return ap


def _error(code: int, kind: str, message: str, **extra) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message} | extra) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "default-config":
        sys.stdout.write(default_config_text())
        return 0
    try:
        if args.threads < 1:
            raise ConfigError("--threads", "must be at least 1")
        sc = _scenario(args)
        table = COMMANDS[args.command](args, sc)
    except ConfigError as e:
        return _error(2, type(e).__name__, e.message, field=e.field, line=e.line)
    except NumericalError as e:
        return _error(1, type(e).__name__, str(e))
    except (BohmKNError, ValueError) as e:
        return _error(2, type(e).__name__, str(e))
    text = render(table, args.format or sc.fmt)
    path = args.output or sc.path
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not table.header["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
