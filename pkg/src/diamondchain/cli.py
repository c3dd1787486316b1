"""Command-line front end emitting deterministic CSV.

Subcommands: point, sweep, threshold, validate, spectrum.  Output starts with
a ``#`` metadata line, then a header row, then data rows.  Floats use 12
significant digits in scientific notation.  ``lambda_plus``/``lambda_minus``
are reported in units of ``exp(-w_shift / T)``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .entanglement import concurrence_xstate, threshold_temperature
from .oracle import (
    MAX_ENUM_N,
    MAX_FULL_N,
    full_hilbert_solution,
    oracle_dimer_state,
    oracle_partition,
    random_specs,
)
from .presets import FIGURES
from .rdm import reduced_density
from .spectra import EDGE_CONFIGS, CouplingSet, closed_form_energies
from .transfer import decompose, make_spec, partition_function

PARAMS = ("J", "Delta", "J1", "h", "T", "alpha", "gamma", "eta")
IMPURITY_PARAMS = ("alpha", "gamma", "eta")
RECORD_COLUMNS = PARAMS + (
    "N",
    "rho11",
    "rho22",
    "rho23",
    "rho44",
    "lambda_plus",
    "lambda_minus",
    "w_shift",
    "C",
)
VALIDATION_TOL = 1e-10


class NumericalFailure(Exception):
    pass


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.11e}"


def _ring_size(text):
    if text.lower() in ("inf", "infinity"):
        return None
    try:
        N = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"N must be an integer >= 3 or 'inf', got {text!r}")
    if N < 3:
        raise argparse.ArgumentTypeError(f"N must be >= 3, got {N}")
    return N


def _finite_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"value must be finite, got {text!r}")
    return value


def _positive_float(text):
    value = _finite_float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"value must be > 0, got {text!r}")
    return value


def parse_sweep(text):
    """``var=start:stop:steps[:log]`` -> (var, start, stop, steps, scale)."""
    try:
        var, rng = text.split("=", 1)
        parts = rng.split(":")
        if len(parts) not in (3, 4):
            raise ValueError
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2])
        scale = parts[3] if len(parts) == 4 else "linear"
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like var=start:stop:steps[:log], got {text!r}")
    if var not in PARAMS:
        raise argparse.ArgumentTypeError(f"cannot sweep {var!r}; choose from {', '.join(PARAMS)}")
    if scale not in ("linear", "log"):
        raise argparse.ArgumentTypeError(f"sweep scale must be 'log' or omitted, got {scale!r}")
    if steps < 2:
        raise argparse.ArgumentTypeError("sweep needs steps >= 2")
    if start == stop or not (math.isfinite(start) and math.isfinite(stop)):
        raise argparse.ArgumentTypeError("sweep needs finite start != stop")
    if scale == "log" and (start <= 0 or stop <= 0):
        raise argparse.ArgumentTypeError("log sweep needs start, stop > 0")
    return (var, start, stop, steps, scale)


def sweep_values(sweep):
    _, start, stop, steps, scale = sweep
    if scale == "log":
        return np.geomspace(start, stop, steps)
    return np.linspace(start, stop, steps)


def evaluate(point):
    """One RunRecord (dict) for flat parameters plus ``N``."""
    spec = make_spec(**{k: point[k] for k in PARAMS}, N=point["N"])
    dec = decompose(spec)
    dimer = reduced_density(spec, dec)
    C = concurrence_xstate(dimer).C
    values = [dimer.rho11, dimer.rho22, dimer.rho23, dimer.rho44, C]
    if not all(math.isfinite(v) for v in values):
        raise NumericalFailure(f"non-finite result at {point}")
    record = {k: point[k] for k in PARAMS}
    record.update(
        N="inf" if point["N"] is None else point["N"],
        rho11=dimer.rho11,
        rho22=dimer.rho22,
        rho23=dimer.rho23,
        rho44=dimer.rho44,
        lambda_plus=dec.lambda_plus,
        lambda_minus=dec.lambda_minus,
        w_shift=dec.W.shift,
        C=C,
    )
    return record


def _evaluate_all(points, workers):
    if workers <= 1 or len(points) < 2:
        return [evaluate(p) for p in points]
    chunk = max(1, len(points) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, points, chunksize=chunk))


def _metadata(command, items):
    fields = " ".join(f"{k}={v}" for k, v in items)
    return f"# diamondchain {__version__} command={command} {fields}".rstrip()


def _write_table(out, meta, columns, rows):
    buf = io.StringIO()
    buf.write(meta + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    out.write(buf.getvalue())


def _physics_echo(args, names=PARAMS):
    return [(k, repr(getattr(args, k))) for k in names if getattr(args, k) is not None] + [
        ("N", "inf" if args.N is None else args.N)
    ]


def _base_point(args, parser, required):
    missing = [f"--{k}" for k in required if getattr(args, k) is None]
    if missing:
        parser.error(f"missing required flags: {' '.join(missing)}")
    point = {k: getattr(args, k) for k in PARAMS}
    for k in IMPURITY_PARAMS:
        if point[k] is None:
            point[k] = 0.0
    point["N"] = args.N
    return point


def _check_point(point, parser):
    try:
        make_spec(**{k: point[k] for k in PARAMS}, N=point["N"])
    except ValueError as exc:
        parser.error(str(exc))


def cmd_point(args, parser):
    point = _base_point(args, parser, ("J", "Delta", "J1", "h", "T"))
    _check_point(point, parser)
    record = evaluate(point)
    _write_table(args.out, _metadata("point", _physics_echo(args)), RECORD_COLUMNS, [record])


def _figure_points(preset, N):
    var, *_ = preset.sweep
    xs = sweep_values(preset.sweep)
    points, labels = [], []
    for curve in preset.curve_values:
        for model, strengths in preset.models.items():
            for x in xs:
                p = {"T": None, "h": None, "Delta": None}
                p.update(preset.fixed)
                p.update(strengths)
                p[preset.curve_var] = curve
                p[var] = float(x)
                p["N"] = N
                points.append(p)
                labels.append(
                    {"figure": preset.figure, "curve": f"{preset.curve_var}={curve:g}", "model": model}
                )
    return points, labels


def cmd_sweep(args, parser):
    if args.figure is not None:
        if args.sweep:
            parser.error("--figure and --sweep are mutually exclusive")
        preset = FIGURES[args.figure]
        points, labels = _figure_points(preset, args.N)
        var, start, stop, steps, scale = preset.sweep
        meta = _metadata(
            "sweep",
            [
                ("figure", preset.figure),
                *[(k, repr(v)) for k, v in preset.fixed.items()],
                ("curves", f"{preset.curve_var}=" + "|".join(f"{v:g}" for v in preset.curve_values)),
                *[(m, ",".join(f"{k}={v:g}" for k, v in s.items())) for m, s in preset.models.items()],
                ("sweep", f"{var}={start:g}:{stop:g}:{steps}:{scale}"),
                ("N", "inf" if args.N is None else args.N),
                ("preset_choice", "+".join(preset.choices) or "none"),
            ],
        )
        records = _evaluate_all(points, args.workers)
        rows = [dict(label, **rec) for label, rec in zip(labels, records)]
        _write_table(args.out, meta, ("figure", "curve", "model") + RECORD_COLUMNS, rows)
        return
    if not args.sweep:
        parser.error("sweep needs --sweep or --figure")
    if len(args.sweep) > 2:
        parser.error("at most two --sweep variables")
    names = [s[0] for s in args.sweep]
    if len(set(names)) != len(names):
        parser.error("sweep variables must be distinct")
    required = [k for k in ("J", "Delta", "J1", "h", "T") if k not in names]
    base = _base_point(args, parser, required)
    grids = [sweep_values(s) for s in args.sweep]
    points = []
    for combo in itertools.product(*grids):
        p = dict(base)
        for name, value in zip(names, combo):
            p[name] = float(value)
        _check_point(p, parser)
        points.append(p)
    echo = _physics_echo(args, [k for k in PARAMS if k not in names])
    for (var, start, stop, steps, scale) in args.sweep:
        echo.append(("sweep", f"{var}={start!r}:{stop!r}:{steps}:{scale}"))
    records = _evaluate_all(points, args.workers)
    _write_table(args.out, _metadata("sweep", echo), RECORD_COLUMNS, records)


THRESHOLD_COLUMNS = tuple(k for k in PARAMS if k != "T") + (
    "N",
    "T_max",
    "tol",
    "T_th",
    "status",
    "bracket_lo",
    "bracket_hi",
    "reentrant",
)


def cmd_threshold(args, parser):
    required = ("J", "Delta", "J1", "h")
    point = _base_point(args, parser, required)
    point["T"] = args.T_max
    _check_point(point, parser)
    spec = make_spec(**{k: point[k] for k in PARAMS}, N=point["N"])
    res = threshold_temperature(spec, args.T_max, args.tol)
    row = {k: point[k] for k in PARAMS if k != "T"}
    lo, hi = res.bracket if res.status == "found" else (None, None)
    row.update(
        N="inf" if point["N"] is None else point["N"],
        T_max=args.T_max,
        tol=args.tol,
        T_th=res.T_th,
        status=res.status,
        bracket_lo=lo,
        bracket_hi=hi,
        reentrant=res.reentrant,
    )
    echo = _physics_echo(args, [k for k in PARAMS if k != "T"])
    echo += [("T_max", repr(args.T_max)), ("tol", repr(args.tol))]
    _write_table(args.out, _metadata("threshold", echo), THRESHOLD_COLUMNS, [row])


def run_validation(seed, count, Ns, full_hilbert=False, inject_fault=False):
    """Compare transfer-matrix results with the oracles on a seeded battery.

    Returns ``(summary_rows, worst)`` where worst is (deviation, spec, r).
    """
    summary = []
    worst = (0.0, None, None)
    for N in Ns:
        max_dz = max_drho = 0.0
        for spec, r in random_specs((seed, N), count, N):
            log_z = partition_function(spec)
            rho = reduced_density(spec).rho
            if inject_fault:
                rho = rho.copy()
                rho[1, 2] = rho[2, 1] = -rho[1, 2]
            refs = [(oracle_partition(spec, r), oracle_dimer_state(spec, r).rho)]
            if full_hilbert:
                log_z_ed, rho_ed, _ = full_hilbert_solution(spec, r)
                refs.append((log_z_ed, rho_ed))
            for ref_log_z, ref_rho in refs:
                dz = abs(math.expm1(log_z - ref_log_z))
                drho = float(np.abs(rho - ref_rho).max())
                max_dz = max(max_dz, dz)
                max_drho = max(max_drho, drho)
                if max(dz, drho) > worst[0]:
                    worst = (max(dz, drho), spec, r)
        summary.append({"N": N, "count": count, "max_rel_dZ": max_dz, "max_abs_drho": max_drho})
    return summary, worst


def cmd_validate(args, parser):
    cap = MAX_FULL_N if args.full_hilbert else MAX_ENUM_N
    if args.N is not None:
        Ns = [args.N]
    else:
        Ns = [3] if args.full_hilbert else [3, 4, 5, 6]
    if max(Ns) > cap:
        parser.error(f"N must be <= {cap} in this mode")
    count = args.count if args.count is not None else (20 if args.full_hilbert else 50)
    summary, worst = run_validation(args.seed, count, Ns, args.full_hilbert, args.inject_fault)
    mode = "full-hilbert" if args.full_hilbert else "enumeration"
    ok = worst[0] <= VALIDATION_TOL
    rows = [dict(row, mode=mode, status="PASS" if max(row["max_rel_dZ"], row["max_abs_drho"]) <= VALIDATION_TOL else "FAIL") for row in summary]
    meta = _metadata("validate", [("mode", mode), ("seed", args.seed), ("count", count), ("tol", repr(VALIDATION_TOL))])
    _write_table(args.out, meta, ("mode", "N", "count", "max_rel_dZ", "max_abs_drho", "status"), rows)
    if not ok:
        print(f"validation failed: deviation {worst[0]:.3e} at {worst[1]} r={worst[2]}", file=sys.stderr)
        raise NumericalFailure("validation failed")


def cmd_spectrum(args, parser):
    point = _base_point(args, parser, ("J", "Delta", "J1", "h"))
    host = CouplingSet(point["J"], point["Delta"], point["J1"], point["h"])
    spec = make_spec(**{k: point[k] for k in PARAMS if k != "T"}, T=1.0)
    rows = []
    for kind, c in (("host", host), ("impurity", spec.impurity_couplings)):
        for ml, mr in EDGE_CONFIGS:
            eps = closed_form_energies(c, (ml, mr)).energies
            rows.append(
                {
                    "kind": kind,
                    "J": c.J,
                    "Delta": c.Delta,
                    "J1": c.J1,
                    "h": c.h,
                    "mu_left": ml,
                    "mu_right": mr,
                    **{f"eps{i + 1}": e for i, e in enumerate(eps)},
                }
            )
    echo = _physics_echo(args, [k for k in PARAMS if k != "T"])[:-1]
    echo.append(("basis", "phi1=|00>,phi2=(|01>+|10>)/sqrt2,phi3=(|01>-|10>)/sqrt2,phi4=|11>"))
    columns = ("kind", "J", "Delta", "J1", "h", "mu_left", "mu_right", "eps1", "eps2", "eps3", "eps4")
    _write_table(args.out, _metadata("spectrum", echo), columns, rows)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    for name in ("J", "Delta", "J1", "h", "alpha", "gamma", "eta"):
        common.add_argument(f"--{name}", type=_finite_float, default=None)
    common.add_argument("--T", type=_positive_float, default=None, help="temperature (k_B = 1)")
    common.add_argument("--N", type=_ring_size, default=None, help="ring size, or 'inf' (default)")
    common.add_argument("--out", type=argparse.FileType("w", encoding="utf-8"), default=None)
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="diamondchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("point", parents=[common], help="evaluate one parameter point")

    p = sub.add_parser("sweep", parents=[common], help="1-D/2-D grid or figure preset")
    p.add_argument("--sweep", type=parse_sweep, action="append", default=[], help="var=start:stop:steps[:log]")
    p.add_argument("--figure", choices=sorted(FIGURES))

    p = sub.add_parser("threshold", parents=[common], help="threshold temperature search")
    p.add_argument("--T-max", dest="T_max", type=_positive_float, default=5.0)
    p.add_argument("--tol", type=_positive_float, default=1e-4)

    p = sub.add_parser("validate", parents=[common], help="oracle comparison battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=None, help="specs per ring size")
    p.add_argument("--full-hilbert", action="store_true")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    sub.add_parser("spectrum", parents=[common], help="plaquette eigenenergies")
    return parser


COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    close = args.out is not None
    if args.out is None:
        args.out = sys.stdout
    try:
        COMMANDS[args.command](args, parser)
    except (NumericalFailure, FloatingPointError, ArithmeticError, np.linalg.LinAlgError) as exc:
        if not isinstance(exc, NumericalFailure) or str(exc) != "validation failed":
            print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    finally:
        if close:
            args.out.close()
    return 0
