"""Quadrature grids on K = [0, inf) x R and on its dual R x N, sampled
functions on them, and the weighted L^p norms used throughout.

Dual rows are parametrised by ``mu = |(lam, m)| = |lam| k_m`` with
``k_m = 4m + 2alpha + 2`` and ``lam = mu / k_m``; all rows share the panels
near ``mu = 0``, where most of the spectral mass of a smooth function sits.
Rows ``m = 0..m_max`` are exact; a handful of extra rows at large m carry
interpolatory weights that stand in for the whole tail ``m > m_max`` (the
spectral data is smooth in ``1/k_m`` there).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy import optimize, special

from ._validation import check_complex_array, check_exponent, check_positive
from .core import as_context, homogeneous_norm, laguerre_zero_values, laguerre_zeta
from .errors import GridResolutionError, TruncationWarning
from .quadrature import PanelInterpolator, composite_rule

__all__ = [
    "SpaceGrid",
    "DualGrid",
    "SampledFunction",
    "SpectralFunction",
    "build_space_grid",
    "build_dual_grid",
    "lp_norm_space",
    "lp_norm_dual",
    "tail_mass",
]

MIN_NODES = 8


def _panels(n, order):
    """Split ``n`` nodes into panels of ``order`` nodes (one panel if fewer)."""
    if n < order:
        return 1, n
    return n // order, order


# ---------------------------------------------------------------------------
# space side


@dataclass(frozen=True, eq=False)
class SpaceGrid:
    alpha: float
    x_nodes: np.ndarray
    x_weights: np.ndarray
    t_nodes: np.ndarray
    t_weights: np.ndarray
    x_max: float
    t_max: float
    x_breaks: np.ndarray
    t_breaks: np.ndarray
    order_x: int
    order_t: int

    @property
    def shape(self):
        return (self.x_nodes.size, self.t_nodes.size)

    @property
    def weights(self):
        return np.outer(self.x_weights, self.t_weights)

    def mesh(self):
        return np.meshgrid(self.x_nodes, self.t_nodes, indexing="ij")

    def norm_nodes(self):
        return homogeneous_norm(self.x_nodes[:, None], self.t_nodes[None, :])

    def integrate(self, values):
        return np.sum(self.x_weights @ np.asarray(values) * self.t_weights)

    def sample(self, func):
        """``SampledFunction`` of ``func(x, t)`` (broadcast over a node mesh)."""
        vals = func(self.x_nodes[:, None], self.t_nodes[None, :])
        vals = np.broadcast_to(np.asarray(vals, dtype=complex), self.shape)
        return SampledFunction(self, np.array(vals))

    def x_interpolator(self):
        return PanelInterpolator(self.x_breaks, self.order_x, self.x_nodes)

    def t_interpolator(self):
        return PanelInterpolator(self.t_breaks, self.order_t, self.t_nodes)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: SpaceGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", check_complex_array(self.values, self.grid.shape))

    def with_values(self, values):
        return SampledFunction(self.grid, values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def __add__(self, other):
        return self.with_values(self.values + other.values)


def _space_self_test(grid, ctx):
    """Defects of a box-scaled Gaussian moment and of the ball-volume identity
    ``int exp(-(|(x,t)|/s)**4) dm = s**Q Gamma(Q/4 + 1) Omega_alpha``."""
    sx, st = grid.x_max / 8, grid.t_max / 8
    g = np.exp(-(grid.x_nodes[:, None] / sx) ** 2 - (grid.t_nodes[None, :] / st) ** 2)
    exact = sx ** (2 * ctx.alpha + 2) * st / (2 * math.sqrt(math.pi))
    smooth_defect = abs(grid.integrate(g) - exact) / exact
    s = min(grid.x_max, 2 * math.sqrt(grid.t_max)) / 4
    rho = homogeneous_norm(grid.x_nodes[:, None], grid.t_nodes[None, :]) / s
    exact = s**ctx.Q * math.gamma(ctx.Q / 4 + 1) * ctx.omega_alpha
    ball_defect = abs(grid.integrate(np.exp(-rho**4)) - exact) / exact
    return smooth_defect, ball_defect


def _graded(breaks, levels, ratio):
    """Split the first panel of ``breaks`` geometrically toward 0."""
    if levels <= 0 or breaks.size < 3:
        return breaks
    h = breaks[1]
    inner = h / ratio ** np.arange(levels, 0, -1)
    return np.concatenate([[0.0], inner, breaks[1:]])


def build_space_grid(ctx, x_max=8.0, t_max=16.0, n_x=256, n_t=512, order=16,
                     rel_tol=1e-8, grading=4):
    """Composite Gauss grid on ``[0, x_max] x [-t_max, t_max]`` with the
    density of ``dm_alpha`` folded into ``x_weights``.

    The first x-panel is Gauss-Jacobi for ``x**(2alpha+1)``; the t-panels are
    mirrored so the layout is exactly symmetric in t.  The built grid must
    reproduce a box-scaled Gaussian moment and the unit-ball volume (through
    a smooth radial profile) to ``rel_tol``, otherwise ``GridResolutionError``
    is raised.
    """
    ctx = as_context(ctx)
    x_max = check_positive(x_max, "x_max")
    t_max = check_positive(t_max, "t_max")
    if n_x < 1 or n_t < 1:
        raise GridResolutionError(f"grid sizes must be positive, got n_x={n_x}, n_t={n_t}")
    a = ctx.alpha

    px, ox = _panels(int(n_x), order)
    xb = _graded(np.linspace(0.0, x_max, px + 1), grading, 2.0)
    xn, xw = composite_rule(xb, ox, density_exponent=2 * a + 1)
    xw = xw / (math.pi * math.gamma(a + 1))

    pt, ot = _panels(int(n_t), order)
    # mirrored halves keep the t-layout exactly symmetric
    half = max(1, pt // 2)
    if pt == 1:
        ot = max(1, ot // 2)
    hb = _graded(np.linspace(0.0, t_max, half + 1), grading, 4.0)
    hn, hw = composite_rule(hb, ot)
    tn = np.concatenate([-hn[::-1], hn])
    tw = np.concatenate([hw[::-1], hw])
    tb = np.concatenate([-hb[::-1], hb[1:]])

    grid = SpaceGrid(a, xn, xw, tn, tw, x_max, t_max, xb, tb, ox, ot)
    smooth, ball = _space_self_test(grid, ctx)
    if min(n_x, n_t) < MIN_NODES or max(smooth, ball) > rel_tol:
        raise GridResolutionError(
            f"grid-resolution self-test failed (n_x={n_x}, n_t={n_t}): "
            f"smooth moment defect {smooth:.3e}, ball-volume defect {ball:.3e}",
            defect=max(smooth, ball))
    return grid


# ---------------------------------------------------------------------------
# dual side


def _row_breaks(top, k, mu_shared, lambda_panel):
    """Panels for one row on ``[0, top]``.

    Breaks follow 0, 1/4, 1/2, 1, 2, 4, ... (resolving ``mu**(alpha+1)`` at
    the origin) with steps capped at ``min(16, lambda_panel * k)`` up to
    ``mu_shared``; beyond it they are ``lambda_panel`` wide in lam.  Rows
    with ``k >= 16 / lambda_panel`` therefore share their panels on
    ``[0, mu_shared]``.
    """
    cap = min(16.0, lambda_panel * k)
    end = min(top, mu_shared)
    b = [0.0]
    g = 0.25
    while b[-1] < end * (1 - 1e-12):
        while g <= b[-1] * (1 + 1e-12):
            g *= 2
        b.append(min(g, b[-1] + cap, end))
    if top > b[-1] * (1 + 1e-12):
        width = max(cap, lambda_panel * k)
        n = int(math.ceil((top - b[-1]) / width - 1e-9))
        b.extend(np.linspace(b[-1], top, n + 1)[1:])
    return np.array(b)


def _tail_rows(alpha, m_max, n_tail):
    """Integer rows beyond ``m_max`` and the weights replacing
    ``sum_{m > m_max} L_m(0) k_m**-(alpha+2) G(m)`` by ``sum_j omega_j G(m_j)``.

    Nodes are Chebyshev-Lobatto points in ``y = 1/k_m`` on ``(0, y_{m_max+1}]``
    rounded to integers; the weights integrate polynomials in y exactly
    against the discrete tail measure (moments from ``laguerre_zeta``).
    """
    if n_tail == 0:
        return np.zeros(0, int), np.zeros(0)
    start = m_max + 1
    y0 = 1.0 / (4 * start + 2 * alpha + 2)
    j = np.arange(n_tail)
    y = y0 * (1 + np.cos(np.pi * j / n_tail)) / 2
    m = np.unique(np.maximum(np.rint((1 / y - 2 * alpha - 2) / 4).astype(int), start))
    k = 4.0 * m + 2 * alpha + 2
    z = (1 / k) / y0
    n = np.arange(m.size)
    moments = np.array([laguerre_zeta(alpha, alpha + 2 + i, start=start, rel_tol=1e-13).value
                        for i in n]) / y0 ** n
    omega = np.linalg.solve(z[None, :] ** n[:, None], moments)
    return m, omega


@dataclass(frozen=True, eq=False)
class DualGrid:
    """Gauss nodes in ``mu = |(lam, m)|`` for every row m, so ``lam = +-mu/k_m``.

    Rows have their own panels (``row_breaks``, padded by repeating the last
    break), stored as ``(n_mu, n_rows)`` arrays with ``active`` marking real
    nodes.  ``weights`` are full gamma-weights, zero on padding.
    Spectral values are laid out ``(2 n_mu, n_rows)``: the negative half in
    decreasing lam first, then the positive half.
    """

    alpha: float
    order: int
    m_values: np.ndarray
    multiplicity: np.ndarray
    n_exact: int
    lambda_max: float
    row_breaks: tuple = field(repr=False)
    mu_nodes: np.ndarray = field(repr=False)
    mu_weights: np.ndarray = field(repr=False)
    active: np.ndarray = field(repr=False)

    @property
    def k(self):
        return 4.0 * self.m_values + 2 * self.alpha + 2

    @property
    def m_max(self):
        return self.n_exact - 1

    @property
    def n_mu(self):
        return self.mu_nodes.shape[0]

    @property
    def shape(self):
        return (2 * self.n_mu, self.m_values.size)

    @property
    def signed_mu(self):
        return np.concatenate([-self.mu_nodes[::-1], self.mu_nodes])

    @property
    def lambda_nodes(self):
        return self.signed_mu / self.k[None, :]

    @property
    def norm_nodes(self):
        """``|(lam, m)|`` at every node."""
        return np.abs(self.signed_mu)

    @property
    def full_active(self):
        return np.concatenate([self.active[::-1], self.active])

    @cached_property
    def row_factor(self):
        """gamma-weight of row m per unit ``mu**(alpha+1) dmu``."""
        r = self.multiplicity * laguerre_zero_values(self.m_values, self.alpha) / self.k ** (self.alpha + 2)
        r.flags.writeable = False
        return r

    @cached_property
    def weights(self):
        w = self.mu_weights * self.row_factor[None, :] * self.active
        w = np.concatenate([w[::-1], w])
        w.flags.writeable = False
        return w

    def row_mu_max(self):
        return np.array([b[-1] for b in self.row_breaks])

    @cached_property
    def interpolators(self):
        out = []
        for j, b in enumerate(self.row_breaks):
            n = (b.size - 1) * self.order
            out.append(PanelInterpolator(b, self.order, self.mu_nodes[:n, j]))
        return out

    def integrate(self, values):
        return np.sum(self.weights * np.asarray(values))

    def sample(self, func):
        """``SpectralFunction`` of ``func(lam, m)`` (zero on padding)."""
        vals = func(self.lambda_nodes, self.m_values[None, :])
        vals = np.broadcast_to(np.asarray(vals, dtype=complex), self.shape)
        return SpectralFunction(self, np.where(self.full_active, vals, 0))

    def sample_norm(self, func):
        """``SpectralFunction`` of ``func(|(lam, m)|)``."""
        return SpectralFunction(self, np.where(self.full_active, func(self.norm_nodes), 0).astype(complex))

    def ball_measure(self, r):
        """Grid gamma-measure of ``E_r``."""
        return self.integrate(self.norm_nodes < r)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    grid: DualGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", check_complex_array(self.values, self.grid.shape))

    def with_values(self, values):
        return SpectralFunction(self.grid, values)

    def halves(self):
        """``(negative, positive)`` halves, both ordered by increasing mu."""
        n = self.grid.n_mu
        return self.values[:n][::-1], self.values[n:]


def build_dual_grid(ctx, lambda_max=16.0, n_lambda=16, m_max=64, mu_shared=208.0, n_tail=6,
                    lambda_panel=1.0, rel_tol=1e-6):
    """Dual grid with ``n_lambda`` Gauss nodes per mu-panel.

    Rows run to ``|lam| = lambda_max`` with panels geometric toward ``mu = 0``
    (the first one Gauss-Jacobi for ``mu**(alpha+1)``) and never wider than
    ``lambda_panel`` in lam, which keeps ``e^{i lam t}`` resolved on the
    space box; the interpolatory tail rows stop at ``mu_shared``.  The self-test compares the grid measure of
    ``E_1`` with its closed form.
    """
    ctx = as_context(ctx)
    a = ctx.alpha
    lambda_max = check_positive(lambda_max, "lambda_max")
    mu_shared = check_positive(mu_shared, "mu_shared")
    if min(n_lambda, m_max + 1) < MIN_NODES or n_tail < 0:
        raise GridResolutionError(
            f"grid-resolution: dual grid too small (n_lambda={n_lambda}, m_max={m_max}, n_tail={n_tail})")
    n = int(n_lambda)
    rows = np.arange(m_max + 1)
    tail_m, tail_omega = _tail_rows(a, int(m_max), int(n_tail))
    m_values = np.concatenate([rows, tail_m])
    k = 4.0 * m_values + 2 * a + 2
    base = laguerre_zero_values(m_values, a) / k ** (a + 2)
    mult = np.concatenate([np.ones(rows.size), tail_omega / base[rows.size:]])
    if np.any(mult <= 0):
        raise GridResolutionError("grid-resolution: negative tail weights", defect=float(mult.min()))
    if lambda_max * k[0] < 1.0:
        raise GridResolutionError("grid-resolution: lambda_max leaves E_1 uncovered in row m=0")

    breaks = [_row_breaks(min(lambda_max * kj, mu_shared if j >= rows.size else np.inf),
                          kj, mu_shared, lambda_panel)
              for j, kj in enumerate(k)]
    n_mu = max(b.size - 1 for b in breaks) * n
    nodes = np.zeros((n_mu, k.size))
    weights = np.zeros((n_mu, k.size))
    active = np.zeros((n_mu, k.size), dtype=bool)
    for j, b in enumerate(breaks):
        mu, w = composite_rule(b, n, density_exponent=a + 1)
        nodes[:mu.size, j] = mu
        nodes[mu.size:, j] = b[-1]
        weights[:mu.size, j] = w
        active[:mu.size, j] = True
    grid = DualGrid(a, n, m_values, mult, rows.size, lambda_max, tuple(breaks), nodes, weights, active)
    exact = 2 / (a + 2) * ctx.series_constant
    defect = abs(grid.ball_measure(1.0) - exact) / exact
    if defect > rel_tol:
        raise GridResolutionError(f"grid-resolution: dual ball measure defect {defect:.3e}", defect=defect)
    return grid


# ---------------------------------------------------------------------------
# norms


def _power_sum(weights, g, p):
    top = np.max(g)
    if top == 0:
        return 0.0
    return top * np.sum(weights * (g / top) ** p) ** (1 / p)


def _lagrange(nodes, bary, q):
    """Rows of the barycentric interpolation matrix from ``nodes`` to ``q``."""
    d = q[:, None] - nodes[None, :]
    hit = d == 0
    c = bary / np.where(hit, 1.0, d)
    L = c / np.sum(c, axis=1, keepdims=True)
    rows = hit.any(axis=1)
    L[rows] = hit[rows]
    return L


@lru_cache(maxsize=256)
def _jacobi_ref(n, right, left):
    """Gauss-Jacobi rule for ``(1 - xi)**right (1 + xi)**left`` on [-1, 1]."""
    if right == 0 and left == 0:
        return np.polynomial.legendre.leggauss(n)
    return special.roots_jacobi(n, right, left)


class _Line:
    """Integrand ``(|f| extra / top)**p x**e`` along panels of one axis.

    On a panel starting at ``x = 0`` the factor ``x**origin_power`` is moved
    into the Gauss-Jacobi weight and ``extra`` is dropped there; callers use
    this when ``extra**p == x**origin_power`` (dual weights ``mu**w``).
    """

    def __init__(self, interp, p, e, top, extra=None, origin_power=0.0):
        self.interp, self.p, self.e, self.top = interp, p, e, top
        self.extra, self.origin_power = extra, origin_power

    def pieces(self, vals, cuts, zero_left, zero_right, idx):
        """Integrals over ``[cuts[:, k], cuts[:, k+1]]`` summed over k, for a
        batch of lines sharing the panel of ``cuts``; ``zero_left/right``
        flag the cut ends where f has a simple zero."""
        it = self.interp
        n = it.n
        panel = int(np.clip(np.searchsorted(it.breaks, cuts[0, 0], side="right") - 1, 0, it.nodes.shape[0] - 1))
        nodes, bary = it.nodes[panel], it.bary[panel]
        total = np.zeros(cuts.shape[0])
        for k in range(cuts.shape[1] - 1):
            a, b = cuts[:, k:k + 1], cuts[:, k + 1:k + 2]
            half = (b - a) / 2
            at_origin = k == 0 and cuts[0, 0] == 0
            left = (self.e + self.origin_power) if at_origin else (self.p if zero_left[k] else 0.0)
            right = self.p if zero_right[k] else 0.0
            xi, wi = _jacobi_ref(n, float(right), float(left))
            x = a + half * (xi + 1)
            L = _lagrange(nodes, bary, x.ravel()).reshape(*x.shape, n)
            g = np.abs(np.einsum("cqj,jc->cq", L, vals)) / self.top
            if self.extra is not None and not (at_origin and self.origin_power):
                g = g * self.extra(x, idx[:, None])
            g = g**self.p
            if zero_left[k] and not at_origin:
                g = g / (x - a) ** self.p
            if right:
                g = g / (b - x) ** right
            if not at_origin:
                g = g * x**self.e
            total += np.sum(wi * g, axis=1) * half[:, 0] ** (1 + left + right)
        return total


def _line_power_sums(line, V, idx):
    """``(P, C)`` panel integrals of ``line``'s integrand for the lines in
    the columns of ``V`` (sampled at the interpolator's nodes).

    Panels where f changes sign are split at the roots of the interpolant:
    ``|f|**p`` has a kink on a zero of f unless p is an even integer, and a
    Gauss rule across it converges slowly.  Each piece carries the
    ``|x - root|**p`` behaviour in its Jacobi weight.  Cuts where the
    interpolant does not actually vanish (possible for complex f) are kept
    as plain panel splits.
    """
    it = line.interp
    P, n = it.nodes.shape
    C = V.shape[1]
    Vp = V.reshape(P, n, C)
    # panels off the origin reuse the sampled Gauss-Legendre nodes directly
    xn, wn = composite_rule(it.breaks, n, density_exponent=line.e)
    g = np.abs(V) / line.top
    if line.extra is not None:
        g = g * line.extra(xn[:, None], idx[None, :])
    sums = (wn[:, None] * g**line.p).reshape(P, n, C).sum(axis=1)
    if it.breaks[0] == 0:
        zeros = np.zeros(1, dtype=bool)
        sums[0] = line.pieces(Vp[0], np.tile(it.breaks[:2], (C, 1)), zeros, zeros, idx)
    if line.p == int(line.p) and int(line.p) % 2 == 0:
        return sums
    # common phase per line turns zeros of (phase * real) data into sign changes
    peak = V[np.argmax(np.abs(V), axis=0), np.arange(C)]
    G = (Vp * np.exp(-1j * np.angle(peak))[None, None, :]).real
    ends = [_lagrange(it.nodes[i], it.bary[i], it.breaks[i:i + 2]) for i in range(P)]
    seq = np.concatenate([np.stack([np.einsum("j,jc->c", E[0], G[i]) for i, E in enumerate(ends)])[:, None],
                          G,
                          np.stack([np.einsum("j,jc->c", E[1], G[i]) for i, E in enumerate(ends)])[:, None]],
                         axis=1)
    # a sign change must clear round-off on both sides (f may vanish exactly at an end)
    thr = 1e-12 * np.max(np.abs(G), axis=(0, 1))
    flips = (seq.max(axis=1) > thr) & (seq.min(axis=1) < -thr)
    leg = np.polynomial.legendre
    for i in np.nonzero(flips.any(axis=1))[0]:
        cols = np.nonzero(flips[i])[0]
        lo, hi = it.breaks[i], it.breaks[i + 1]
        y = (2 * it.nodes[i] - lo - hi) / (hi - lo)
        coef = leg.legfit(y, G[i][:, cols], n - 1)
        groups = {}
        for k, c in enumerate(cols):
            r = leg.legroots(coef[:, k])
            # roots at a panel end or repeated would leave zero-length pieces
            r = np.sort(r[(np.abs(r.imag) < 1e-9) & (np.abs(r.real) < 1 - 1e-8)].real)
            r = r[np.concatenate([[True], np.diff(r) > 1e-8])] if r.size else r
            x = lo + (r + 1) * (hi - lo) / 2
            fx = np.abs(_lagrange(it.nodes[i], it.bary[i], x) @ Vp[i][:, c]) if x.size else x
            true = tuple(fx <= 1e-7 * np.max(np.abs(Vp[i][:, c])))
            groups.setdefault(true, []).append((c, x))
        for true, members in groups.items():
            cs = np.array([c for c, _ in members])
            cuts = np.empty((cs.size, len(true) + 2))
            cuts[:, 0], cuts[:, -1] = lo, hi
            for j, (_, x) in enumerate(members):
                cuts[j, 1:-1] = x
            flags = np.array(true, dtype=bool)
            zl = np.concatenate([[False], flags])
            zr = np.concatenate([flags, [False]])
            sums[i, cs] = line.pieces(Vp[i][:, cs], cuts, zl, zr, cs)
    return sums


def lp_norm_space(f, p, weight_exponent=0.0, split_roots=True):
    """``|| |(x,t)|**a f ||_p`` on the space grid; ``p = inf`` is the node max.

    With ``split_roots`` (and p not an even integer) panels where f changes
    sign along x are re-integrated between the roots, see
    ``_line_power_sums``.
    """
    p = check_exponent(p)
    grid = f.grid
    w = float(weight_exponent)
    g = np.abs(f.values)
    if w:
        g = g * grid.norm_nodes() ** w
    if np.isinf(p):
        return float(np.max(g))
    top = np.max(g)
    if top == 0:
        return 0.0
    if not split_roots or (p == int(p) and int(p) % 2 == 0):
        return float(_power_sum(grid.weights, g, p))
    t = grid.t_nodes
    extra = (lambda x, idx: homogeneous_norm(x, t[idx]) ** w) if w else None
    line = _Line(grid.x_interpolator(), p, 2 * grid.alpha + 1, top, extra)
    sums = _line_power_sums(line, f.values, np.arange(t.size))
    c0 = 1 / (math.pi * math.gamma(grid.alpha + 1))
    return float(top * (c0 * np.sum(grid.t_weights * sums.sum(axis=0))) ** (1 / p))


def _half_row_sup(interp, vals, w, start):
    """Refined sup of ``mu**w |F(mu)|`` on one half-row near node ``start``."""
    n = interp.n
    nodes = interp.nodes.ravel()
    best = float(np.abs(vals[start]) * nodes[start] ** w)
    values = vals[: nodes.size].reshape(-1, 1)

    def h(q):
        return float(np.abs(interp(values, [q])[0, 0])) * q**w

    panel = start // n
    for pnl in (panel - 1, panel, panel + 1):
        if not 0 <= pnl < interp.nodes.shape[0]:
            continue
        lo, hi = interp.breaks[pnl], interp.breaks[pnl + 1]
        best = max(best, h(lo), h(hi))
        res = optimize.minimize_scalar(lambda q: -h(q), bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-10 * max(hi, 1.0)})
        best = max(best, -res.fun)
    return best


def lp_norm_dual(F, p, weight_exponent=0.0, refine=True):
    """``|| |(lam,m)|**w F ||_p`` against gamma_alpha.

    Finite p integrates each half-row along mu with the weight ``mu**(w p)``
    folded into the Gauss-Jacobi rule at ``mu = 0`` and, unless ``refine`` is
    off or p is an even integer, with panels split at sign changes of F.
    For ``p = inf`` the node maximum is refined by maximising the panel
    interpolant of F around the best nodes (down to ``mu = 0``), since the
    sup of a transform is often attained at the edge ``lam -> 0``.
    """
    p = check_exponent(p)
    grid = F.grid
    w = float(weight_exponent)
    g = np.abs(F.values)
    if w:
        g = g * grid.norm_nodes ** w
    g = np.where(grid.full_active, g, 0.0)
    top = float(np.max(g))
    if top == 0:
        return 0.0
    if not np.isinf(p):
        if not refine or (w == 0 and p == int(p) and int(p) % 2 == 0):
            return float(_power_sum(grid.weights, g, p))
        neg, pos = F.halves()
        extra = (lambda x, idx: x**w) if w else None
        total = 0.0
        for j, interp in enumerate(grid.interpolators):
            nj = interp.nodes.size
            line = _Line(interp, p, grid.alpha + 1, top, extra, origin_power=w * p)
            V = np.stack([pos[:nj, j], neg[:nj, j]], axis=1)
            total += grid.row_factor[j] * _line_power_sums(line, V, np.arange(2)).sum()
        return float(top * total ** (1 / p))
    if not refine:
        return top
    neg, pos = F.halves()
    gn, gp = g[: grid.n_mu][::-1], g[grid.n_mu:]
    best = top
    for j in np.nonzero(np.max(g, axis=0) >= 0.9 * top)[0]:
        interp = grid.interpolators[j]
        for half, gh in ((neg, gn), (pos, gp)):
            best = max(best, _half_row_sup(interp, half[:, j], w, int(np.argmax(gh[:, j]))))
    return float(best)


def tail_mass(F, fraction=0.1):
    """Share of ``||F||_2**2`` carried by the outer ``fraction`` of each row's mu-range."""
    grid = F.grid
    mass = grid.weights * np.abs(F.values) ** 2
    total = np.sum(mass)
    if total == 0:
        return 0.0
    edge = grid.norm_nodes >= (1 - fraction) * grid.row_mu_max()[None, :]
    return float(np.sum(mass * edge) / total)


def warn_tail(F, threshold=1e-10):
    tm = tail_mass(F)
    if tm > threshold:
        warnings.warn(f"spectral tail mass {tm:.2e} exceeds {threshold:.0e}", TruncationWarning, stacklevel=3)
    return tm
