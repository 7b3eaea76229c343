"""Command-line front end: ``selftest``, ``constants`` and ``sweep``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .config import load_config
from .core import as_context, dual_ball_volume
from .errors import ConfigError, GridResolutionError, HypothesisError
from .grids import build_dual_grid
from .selftest import format_table, run_selftest
from .sweep import resolve_threads, run_sweep
from .uncertainty import case1_constant, case2_constant, gs_norm, gs_norm_quadrature

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _err(msg):
    print(msg, file=sys.stderr)


def cmd_selftest(args):
    config = load_config(args.config)
    t0 = time.perf_counter()
    results = run_selftest(config, log=_err)
    print(format_table(results))
    failed = [r for r in results if not r.passed]
    for r in failed:
        if r.suite == "grid":
            _err(f"grid-resolution: {r.detail}")
    print(f"elapsed {time.perf_counter() - t0:.1f} s")
    return EXIT_FAIL if failed else EXIT_OK


def _row(name, value, source, flag=""):
    v = f"{value:.15g}" if isinstance(value, float) else str(value)
    print(f"{name:<34} {v:>24}  {source:<26} {flag}".rstrip())


def cmd_constants(args):
    try:
        ctx = as_context(args.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    a, b, p = args.a, args.b, args.p
    print(f"alpha = {ctx.alpha:g}, Q = {ctx.Q:g}, a = {a:g}, b = {b:g}, p = {p:g}")
    _row("Omega_alpha", ctx.omega_alpha, "1-D quadrature")
    _row("S_alpha", ctx.series_constant, "accelerated series")
    _row("gamma(E_1)", dual_ball_volume(1.0, ctx), "closed form")
    try:
        dual = build_dual_grid(ctx)
        _row("gamma(E_1)", float(dual.ball_measure(1.0)), "dual-grid quadrature")
    except GridResolutionError as exc:
        dual = None
        _row("gamma(E_1)", "n/a", "dual-grid quadrature", f"[{exc}]")
    for name, fn in (("case1 constant (p=1)", lambda: case1_constant(a, b, ctx)),
                     (f"case2 constant (p={p:g})", lambda: case2_constant(a, b, p, ctx))):
        try:
            _row(name, fn(), "constructive chain", "bound is min(1, C)")
        except (HypothesisError, ValueError) as exc:
            _row(name, "n/a", "constructive chain", f"[hypothesis violated: {exc}]")
    for s in (0.25, 1.0, 4.0):
        for q in (1.0, 2.0):
            _row(f"||g_{s:g}||_{q:g}", gs_norm(s, q, ctx), "closed form")
            if dual is not None:
                _row(f"||g_{s:g}||_{q:g}", gs_norm_quadrature(s, q, dual), "dual-grid quadrature")
    return EXIT_OK


def cmd_sweep(args):
    config = load_config(args.config)
    out = args.out if args.out is not None else config.output
    try:
        threads = resolve_threads(args.threads, config.threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    t0 = time.perf_counter()
    try:
        report = run_sweep(config, threads=threads)
    except GridResolutionError as exc:
        _err(str(exc))
        return EXIT_FAIL
    paths = report.write(out, plots=config.plots)
    n = len(report.rows)
    print(f"{n} rows, {report.n_failed} failed, {threads} threads, {time.perf_counter() - t0:.1f} s")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_FAIL if n and report.n_failed == n else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="laguerre-hpw",
                                     description="Fourier-Laguerre transform and HPW inequality checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--config", default=None, help="INI configuration file")
    p.set_defaults(func=cmd_selftest)
    p = sub.add_parser("constants", help="print closed-form and constructive constants")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=3.0)
    p.add_argument("--p", type=float, default=1.0)
    p.set_defaults(func=cmd_constants)
    p = sub.add_parser("sweep", help="evaluate HPW ratios over a parameter grid")
    p.add_argument("--config", required=True, help="INI configuration file")
    p.add_argument("--out", default=None, help="output directory (overrides the config)")
    p.add_argument("--threads", type=int, default=None, help="worker threads")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(f"configuration error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
