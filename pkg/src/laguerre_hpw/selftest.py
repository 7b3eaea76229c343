"""Invariant suites run by ``laguerre-hpw selftest``.

Every check produces a ``CheckResult`` holding the measured defect and its
tolerance.  A grid that fails its own self-test stops the suites for that
alpha with a ``grid-resolution`` diagnostic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import as_context, dual_ball_volume
from .errors import GridResolutionError
from .grids import SpectralFunction, build_dual_grid, build_space_grid
from .special import eigen_residual
from .transform import (dilation_identity_defect, get_plan, hausdorff_young_ratio,
                        l1_preservation_defect, plancherel_defect)
from .uncertainty import case1_constant, case2_constant, gs_norm, gs_norm_quadrature

__all__ = ["CheckResult", "run_selftest", "format_table", "EIGEN_POINTS"]

EIGEN_POINTS = ((1.0, 0, 0.0), (0.5, 3, 1.0), (2.0, 5, 0.5))
HY_EXPONENTS = (1.0, 1.25, 1.5, 2.0)
DILATIONS = (2**-0.5, 2**0.5)
GS_CASES = tuple((s, p) for s in (0.25, 1.0, 4.0) for p in (1.0, 2.0, 3.0))


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


def _check(suite, name, value, tol, detail=""):
    value = float(value)
    return CheckResult(suite, name, value, tol, bool(np.isfinite(value) and value <= tol), detail)


def _rel(a, b):
    return abs(a - b) / abs(b)


def constant_checks(ctx, space, dual, tol):
    """Closed-form constants against independent quadratures."""
    out = []
    S, om = ctx.series_constant, ctx.omega_alpha
    grid_ball = dual.ball_measure(1.0)
    out.append(_check("constants", "gamma(E_1) closed form vs grid", _rel(grid_ball, dual_ball_volume(1.0, ctx)),
                      tol))
    rho = space.norm_nodes()
    ball = space.integrate(np.exp(-rho**4)) / math.gamma(ctx.Q / 4 + 1)
    out.append(_check("constants", "Omega vs radial space quadrature", _rel(ball, om), tol))
    if ctx.alpha == 0:
        out.append(_check("constants", "S_0 = pi^2/32", _rel(S, math.pi**2 / 32), tol))
        out.append(_check("constants", "Omega_0 = 1/8", _rel(om, 0.125), tol))
    c1 = case1_constant(1.0, ctx.Q / 2 + 1, ctx)
    q = 1.5
    c2 = case2_constant(1.0, ctx.Q * (1 / q - 0.5) + 1, q, ctx)
    out.append(_check("constants", "case1 constant positive", 0.0 if c1 > 0 else 1.0, 0.5, f"C={c1:.6g}"))
    out.append(_check("constants", "case2 constant positive", 0.0 if c2 > 0 else 1.0, 0.5, f"C={c2:.6g}"))
    return out


def eigen_checks(tol):
    return [_check("eigen", f"lam={lam:g} m={m} alpha={al:g}", eigen_residual((lam, m), al), tol)
            for lam, m, al in EIGEN_POINTS]


def gs_checks(ctx, dual, tol):
    return [_check("gs_norm", f"s={s:g} p={p:g}", _rel(gs_norm_quadrature(s, p, dual), gs_norm(s, p, ctx)), tol)
            for s, p in GS_CASES]


def catalog_checks(entries, ctx, space, dual, tolerances, space_kwargs):
    """Plancherel, Hausdorff-Young, closed-form and dilation checks per entry."""
    out = []
    plan = get_plan(space, dual)
    for e in entries:
        func = e.function(ctx.alpha)
        f = space.sample(func)
        F = SpectralFunction(dual, plan.forward_values(f.values))
        out.append(_check("plancherel", e.id, plancherel_defect(f, dual, F=F), tolerances["plancherel"]))
        worst = max(hausdorff_young_ratio(f, p, dual, F=F) for p in HY_EXPONENTS)
        out.append(_check("hausdorff_young", e.id, worst - 1, tolerances["hausdorff_young"], f"max ratio {worst:.9f}"))
        exact = dual.sample(e.hat(ctx.alpha))
        mask = dual.full_active.copy()
        mask[:, dual.n_exact:] = False  # the tail rows are interpolatory stand-ins
        scale = np.max(np.abs(exact.values[mask]))
        err = np.max(np.abs(F.values - exact.values)[mask]) / scale
        out.append(_check("closed_form", e.id, err, tolerances["closed_form"]))
        dil = max(dilation_identity_defect((func, space), r, dual, F=F)[0] for r in DILATIONS)
        out.append(_check("dilation", e.id, dil, tolerances["dilation"]))
        l1 = max(l1_preservation_defect(func, r, ctx, **space_kwargs) for r in DILATIONS)
        out.append(_check("l1_preservation", e.id, l1, tolerances["l1_preservation"]))
    return out


def run_selftest(config, log=None):
    """All suites for every alpha of ``config``; returns a list of ``CheckResult``."""
    results = [*eigen_checks(config.tolerances["eigen"])]
    for alpha in config.alpha_list:
        ctx = as_context(alpha)
        t0 = time.perf_counter()
        try:
            space = build_space_grid(ctx, **config.space_kwargs())
            dual = build_dual_grid(ctx, **config.dual_kwargs())
        except GridResolutionError as exc:
            msg = str(exc)
            if "grid-resolution" not in msg:
                msg = f"grid-resolution: {msg}"
            results.append(CheckResult("grid", f"alpha={alpha:g}", float("nan"), 0.0, False, msg))
            continue
        results.append(CheckResult("grid", f"alpha={alpha:g}", 0.0, 0.0, True, f"space {space.shape}, dual {dual.shape}"))
        tol = config.tolerances
        suites = (
            lambda: constant_checks(ctx, space, dual, tol["constants"]),
            lambda: gs_checks(ctx, dual, tol["gs_norm"]),
            lambda: catalog_checks(config.entries(), ctx, space, dual, tol, config.space_kwargs()),
        )
        for suite in suites:
            try:
                part = suite()
            except Exception as exc:
                part = [CheckResult("error", f"alpha={alpha:g}", float("nan"), 0.0, False,
                                    f"{type(exc).__name__}: {exc}")]
            results.extend(CheckResult(r.suite, f"alpha={alpha:g} {r.name}", r.value, r.tolerance, r.passed, r.detail)
                           for r in part)
        if log is not None:
            log(f"alpha={alpha:g} finished in {time.perf_counter() - t0:.1f} s")
    return results


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<16} {'check':<{width}}  {'value':>10}  {'tol':>8}  status"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{r.suite:<16} {r.name:<{width}}  {r.value:>10.3e}  {r.tolerance:>8.1e}  {status}"
        if r.detail:
            line += f"  {r.detail}"
        lines.append(line)
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
