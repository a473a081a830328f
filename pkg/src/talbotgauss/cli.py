"""Command-line front end.

    talbotgauss gauss   --q 4 --p 1 --all-kappa --method direct
    talbotgauss carpet  --rows 512 --cols 512 --out carpet.pgm --figure carpet.png
    talbotgauss evolve  --potential cos.txt --omega 0.7 --t 1 --out field.csv
    talbotgauss verify  --suite gauss

Exit codes: 0 success, 1 verification failure, 2 parameter error, 3 I/O error.
A ``--config`` file of ``key = value`` lines supplies defaults; flags win.
The thread count comes from TALBOTGAUSS_THREADS (default: all cores).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import gauss_arith as ga
from . import io
from . import periodic_schrodinger as ps
from . import talbot as tb
from .potential import PeriodicPotential, PotentialError
from .superosc import CALIBRATED_SIGN
from .testfunctions import BUILTIN_NAMES, builtin_test_function

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_IO = 0, 1, 2, 3
THREADS_ENV = "TALBOTGAUSS_THREADS"

GAUSS_HEADER = ["q", "p", "kappa", "method", "re", "im", "modulus", "phase", "error_estimate"]


class ParameterError(ValueError):
    pass


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ParameterError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _alpha(text: str) -> int:
    value = int(text)
    if value not in (1, -1):
        raise argparse.ArgumentTypeError("alpha must be 1 or -1")
    return value


# -- gauss --------------------------------------------------------------------

def _gauss_one(spec: ga.GaussSumSpec, args) -> ga.GaussSumResult:
    method = args.method
    if method == "direct":
        return ga.GaussSumResult(spec, ga.gauss_sum_direct(spec), "direct", 0.0)
    if method == "closed":
        return ga.GaussSumResult(spec, ga.gauss_closed_odd_q(spec), "closed_odd", 0.0)
    if method == "parity":
        c = ga.gauss_even_q_classify(spec)
        value = 0j if c.vanishes else c.modulus * complex(math.cos(c.phase), math.sin(c.phase))
        return ga.GaussSumResult(spec, value, "parity_even", 0.0)
    phi = builtin_test_function(args.testfn, args.width)
    if method == "talbot":
        return tb.gauss_via_talbot(spec, phi, args.K)
    return tb.gauss_via_superosc(spec, phi, args.K, args.N, args.Nprime, args.sign)


def run_gauss(args) -> int:
    if args.K is None:
        args.K = 100_000 if args.method == "talbot" else 2
    kappas = range(args.q) if args.all_kappa else [args.kappa]
    results = [_gauss_one(ga.GaussSumSpec(args.p, kappa, args.q), args) for kappa in kappas]
    rows = [r.as_row() for r in results]
    io.write_csv(args.out, GAUSS_HEADER, ([row[h] for h in GAUSS_HEADER] for row in rows))
    if args.figure:
        from .plotting import plot_gauss_values
        plot_gauss_values(rows, args.figure,
                          title=f"G(-{args.p}, kappa, {args.q}) [{args.method}]")
    return EXIT_OK


# -- carpet -------------------------------------------------------------------

def run_carpet(args) -> int:
    M = args.M
    period, talbot_time = 2 * math.pi / M, 2 * math.pi / M ** 2
    tmin = 0.0 if args.tmin is None else args.tmin
    tmax = talbot_time if args.tmax is None else args.tmax
    xmin = 0.0 if args.xmin is None else args.xmin
    xmax = period if args.xmax is None else args.xmax
    if not (tmax > tmin and xmax > xmin):
        raise ParameterError("t and x ranges must be non-degenerate")
    fmt = args.format or ("pgm" if str(args.out).lower().endswith(".pgm") else "csv")
    phi = builtin_test_function(args.testfn, args.width)
    start = time.perf_counter()
    raster = tb.carpet_raster(tb.CombParams(M, args.K), (tmin, tmax), (xmin, xmax),
                              args.rows, args.cols, phi, threads=thread_count())
    elapsed = time.perf_counter() - start
    if fmt == "pgm":
        bits = io.write_pgm(args.out, raster.intensity, args.bits)
        print(f"wrote {args.out} ({args.rows}x{args.cols}, {bits}-bit PGM)")
    else:
        io.write_csv(args.out, ["t", "x", "intensity"],
                     io.raster_rows(raster.t_axis, raster.x_axis, raster.intensity))
        print(f"wrote {args.out} ({args.rows}x{args.cols} CSV)")
    print(f"intensity min={raster.intensity.min():.6g} max={raster.intensity.max():.6g} "
          f"raster_seconds={elapsed:.3f}")
    times = tb.rational_times_in_range(M, tmin, tmax, q_max=6)
    print("rational times t = (2pi/M^2) p/q with q <= 6 in range:")
    print("p,q,t")
    for num, den, t in times:
        print(f"{num},{den},{t!r}")
    if args.figure:
        from .plotting import plot_carpet
        plot_carpet(raster, args.figure, rational_times=times)
    return EXIT_OK


# -- evolve -------------------------------------------------------------------

def run_evolve(args) -> int:
    V = io.read_harmonics(args.potential) if args.potential else PeriodicPotential.zero()
    if args.M_trunc is not None:
        V = V.truncated(args.M_trunc)
    times = np.linspace(0.0, args.t, args.tgrid) if args.tgrid > 1 else np.array([args.t])
    x = np.linspace(args.xmin, args.xmax, args.xgrid)
    options = dict(K_modes=args.kmodes, N=args.order, substeps=args.substeps,
                   oracle_steps=args.oracle_steps)
    rows = ps.mode_trajectory(times, args.omega, args.alpha, V, engine=args.engine, **options)
    field = ps.assemble_field(times, x, rows, args.omega, args.alpha)
    io.write_csv(args.out, ["t", "x", "re", "im"], io.field_rows(times, x, field))
    print(f"wrote {args.out} ({times.size}x{x.size} samples, engine={args.engine})")
    print(f"mode_norm_l2={np.linalg.norm(rows[-1]):.15g}")
    if args.engine != "oracle":
        reference = ps.mode_trajectory(times[-1:], args.omega, args.alpha, V, engine="oracle",
                                       K_modes=args.kmodes, oracle_steps=args.check_steps)
        dev = ps.max_mode_deviation(rows[-1], reference[-1])
        flag = " PAPER-LITERAL (no -i): documented divergence" if args.engine == "literal" else ""
        print(f"max_deviation_from_oracle={dev:.3e} (rk4, {args.check_steps} steps){flag}")
    if args.modes_out:
        lam = ps.mode_axis(args.kmodes) + args.omega
        amps = rows * np.exp(-1j * args.alpha * np.outer(times, lam * lam))
        io.write_csv(args.modes_out, ["omega_j", "t", "re", "im"],
                     ((w, t, a.real, a.imag) for j, w in enumerate(lam)
                      for t, a in zip(times, amps[:, j])))
    if args.figure:
        from .plotting import plot_field
        plot_field(times, x, field, args.figure,
                   title=f"omega={args.omega}, alpha={args.alpha}, engine={args.engine}")
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def run_verify(args) -> int:
    from .verify import run_suite
    results = run_suite(args.suite or "all")
    failed = [r.name for r in results if not r.passed]
    print(f"summary passed={len(results) - len(failed)} failed={len(failed)}"
          + (f" failing={','.join(failed)}" if failed else ""))
    if args.report:
        _write_verify_report(Path(args.report), results)
    return EXIT_FAIL if failed else EXIT_OK


def _write_verify_report(directory: Path, results) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    io.write_csv(directory / "verify_summary.csv", ["check", "status", "seconds", "detail"],
                 ((r.name, "PASS" if r.passed else "FAIL", r.seconds, r.detail)
                  for r in results))
    from .plotting import plot_convergence
    for r in results:
        if r.name == "superosc_recovery":
            errs = r.metrics["errors"]
            plot_convergence(r.metrics["Ns"], [errs[0], errs[1]],
                             directory / "superosc_recovery.png", xlabel="N = N'",
                             title="superoscillatory Gauss recovery, q=2, K=2",
                             labels=["kappa=0", "kappa=1"])
        elif r.name == "supershift":
            plot_convergence(r.metrics["Ns"], r.metrics["relative"],
                             directory / "supershift.png", xlabel="N'",
                             title="supershift distance / sup|u|")
    print(f"report written to {directory}")


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="talbotgauss",
        description="Gauss sums, Talbot carpets and periodic Schrodinger evolution.")
    parser.add_argument("--config", help="key = value file supplying defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauss", help="evaluate G(-p, kappa, q)")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--p", type=int, required=True)
    which = g.add_mutually_exclusive_group()
    which.add_argument("--kappa", type=int, default=0)
    which.add_argument("--all-kappa", action="store_true")
    g.add_argument("--method", choices=["direct", "closed", "parity", "talbot", "superosc"],
                   default="direct")
    g.add_argument("--K", type=int, default=None,
                   help="mode cutoff (default 100000 for talbot, 2 for superosc)")
    g.add_argument("--N", type=_positive_int, default=1024)
    g.add_argument("--Nprime", type=_positive_int, default=1024)
    g.add_argument("--sign", choices=["plus", "minus"], default=CALIBRATED_SIGN)
    g.add_argument("--testfn", choices=BUILTIN_NAMES, default="cos4")
    g.add_argument("--width", type=float, default=1.0)
    g.add_argument("--out", default="-", help="CSV path (default stdout)")
    g.add_argument("--figure", help="write a phasor plot of the values here")
    g.set_defaults(func=run_gauss)

    c = sub.add_parser("carpet", help="render a Talbot carpet raster")
    c.add_argument("--M", type=float, default=2 * math.pi)
    c.add_argument("--K", type=_positive_int, default=200)
    c.add_argument("--tmin", type=float)
    c.add_argument("--tmax", type=float, help="default: one Talbot period 2pi/M^2")
    c.add_argument("--xmin", type=float)
    c.add_argument("--xmax", type=float, help="default: one grating period 2pi/M")
    c.add_argument("--rows", type=int, default=512)
    c.add_argument("--cols", type=int, default=512)
    c.add_argument("--testfn", choices=BUILTIN_NAMES, default="bspline3")
    c.add_argument("--width", type=float, default=0.1,
                   help="profile half-width in units of x (default 0.1)")
    c.add_argument("--out", required=True)
    c.add_argument("--format", choices=["csv", "pgm"])
    c.add_argument("--bits", type=int, choices=[8, 16])
    c.add_argument("--figure", help="also render the carpet as an image file")
    c.set_defaults(func=run_carpet)

    e = sub.add_parser("evolve", help="evolve a plane wave against a periodic potential")
    e.add_argument("--potential", help="harmonics file, lines 'l re im' (default: V = 0)")
    e.add_argument("--alpha", type=_alpha, default=1)
    e.add_argument("--omega", type=float, default=0.7)
    e.add_argument("--t", type=float, default=1.0)
    e.add_argument("--tgrid", type=_positive_int, default=1,
                   help="number of times in [0, t] (1: only t)")
    e.add_argument("--engine", choices=["literal", "corrected", "oracle"], default="corrected")
    e.add_argument("--kmodes", type=_positive_int, default=16)
    e.add_argument("--mtrunc", dest="M_trunc", type=int)
    e.add_argument("--order", type=int, default=12, help="series order N")
    e.add_argument("--substeps", type=_positive_int, default=64)
    e.add_argument("--oracle-steps", type=_positive_int, default=4096)
    e.add_argument("--check-steps", type=_positive_int, default=1024,
                   help="RK4 steps of the reference run used for the deviation line")
    e.add_argument("--xgrid", type=int, default=64)
    e.add_argument("--xmin", type=float, default=-math.pi)
    e.add_argument("--xmax", type=float, default=math.pi)
    e.add_argument("--out", required=True)
    e.add_argument("--modes-out", help="CSV of mode amplitudes omega_j,t,re,im")
    e.add_argument("--figure")
    e.set_defaults(func=run_evolve)

    v = sub.add_parser("verify", help="run the self-verification suites")
    v.add_argument("--suite", choices=["", "gauss", "talbot", "superosc", "schrodinger", "all"],
                   default="all")
    v.add_argument("--report", help="directory for a summary CSV and convergence figures")
    v.set_defaults(func=run_verify)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return
    config = io.read_config(known.config)
    command = next((a for a in rest if not a.startswith("-")), None)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    target = subparsers.choices.get(command)
    if target is None:
        return
    actions = {a.dest: a for a in target._actions if a.dest != "help"}
    defaults = {}
    for key, value in config.items():
        if key not in actions:
            raise ParameterError(f"unknown config key {key!r} for '{command}'")
        if isinstance(actions[key], argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = value  # argparse applies the type to string defaults
            actions[key].required = False
    target.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_PARAM
    except (ga.GaussParameterError, io.FormatError, PotentialError, ParameterError,
            ps.TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
