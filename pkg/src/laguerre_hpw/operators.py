"""Translation, convolution, dilation and the sub-Laplacian on K.

``L = -(d_x^2 + (2alpha+1)/x d_x + x^2 d_t^2)`` is available as a
finite-difference operator acting on callables and as the spectral
multiplier ``|(lam, m)|**gamma`` acting through the transform.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np
from scipy import special

from ._validation import check_positive
from .core import SpacePoint, as_context
from .errors import CostGuardError, SingularTermError, TailWarning
from .grids import SampledFunction
from .transform import forward, inverse

__all__ = [
    "evaluate",
    "translate",
    "convolve",
    "dilate",
    "sublaplacian_fd",
    "sublaplacian_spectral",
    "fd_weights",
]

DEFAULT_COST_BUDGET = 1e9


# ---------------------------------------------------------------------------
# off-grid evaluation


def _boundary_level(f):
    """Largest |f| on the outermost panels, relative to max |f|."""
    v = np.abs(f.values)
    top = v.max()
    if top == 0:
        return 0.0
    g = f.grid
    edge = max(v[-g.order_x:].max(), v[:, :g.order_t].max(), v[:, -g.order_t:].max())
    return edge / top


def evaluate(f, x, t, chunk=20000, warn=True):
    """Tensor panel interpolation of a ``SampledFunction`` at ``(x, t)``.

    Points outside the grid box read as 0; a ``TailWarning`` is emitted if
    that happens while f is not negligible on the edge of the box.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(x.shape, t.shape)
    xq = np.broadcast_to(x, shape).ravel()
    tq = np.broadcast_to(t, shape).ravel()
    g = f.grid
    ix, it = g.x_interpolator(), g.t_interpolator()
    V = f.values.reshape(ix.nodes.shape[0], ix.n, it.nodes.shape[0], it.n)
    out = np.empty(xq.size, dtype=complex)
    outside = False
    for s in range(0, xq.size, chunk):
        px, Lx, inx = ix.matrix(xq[s:s + chunk])
        pt, Lt, int_ = it.matrix(tq[s:s + chunk])
        block = V[px, :, pt, :]
        out[s:s + chunk] = np.einsum("pi,pij,pj->p", Lx, block, Lt)
        outside = outside or not (inx.all() and int_.all())
    if warn and outside and _boundary_level(f) > 1e-10:
        warnings.warn("evaluation left the space box; values there were read as 0",
                      TailWarning, stacklevel=3)
    return out.reshape(shape)


def _as_evaluator(f):
    if isinstance(f, SampledFunction):
        return lambda x, t: evaluate(f, x, t)
    if callable(f):
        return lambda x, t: np.asarray(f(x, t), dtype=complex)
    raise TypeError("expected a SampledFunction or a callable f(x, t)")


# ---------------------------------------------------------------------------
# translation


@lru_cache(maxsize=32)
def _translation_rule(alpha, n_theta, n_r):
    """Points ``(rho, theta)`` and weights of the probability measure in the
    translation formula; ``rho`` is the radial factor multiplying ``x y``."""
    n_theta = int(n_theta) + int(n_theta) % 2  # even: the theta-average is then even in rho
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    if alpha == 0:
        rho = np.ones(1)
        wr = np.ones(1)
    else:
        # v = rho**2 carries the weight (1 - v)**(alpha - 1) / 2
        xi, w = special.roots_jacobi(int(n_r), alpha - 1, 0.0)
        rho = np.sqrt((1 + xi) / 2)
        wr = (alpha / math.pi) * 0.5 * 2.0 ** (-alpha) * w * (2 * math.pi)
    R, TH = np.meshgrid(rho, theta, indexing="ij")
    W = np.outer(wr, np.full(n_theta, 1.0 / n_theta))
    return R.ravel(), TH.ravel(), W.ravel()


def _translated_values(ev, x, t, y, s, rule):
    """``T_(x,t) f(y, s)`` for broadcastable arrays, by the quadrature ``rule``."""
    R, TH, W = rule
    x, t, y, s = (np.asarray(a, dtype=float)[..., None] for a in (x, t, y, s))
    xyr = x * y * R
    xa = np.sqrt(np.maximum(x * x + y * y + 2 * xyr * np.cos(TH), 0.0))
    ta = s + t + xyr * np.sin(TH)
    return np.sum(ev(xa, ta) * W, axis=-1)


def translate(f, by, ctx=None, grid=None, n_theta=64, n_r=16):
    """``T_(x,t) f`` at the nodes of the space grid.

    ``f`` is a ``SampledFunction`` (off-grid values by panel interpolation)
    or a callable together with ``grid``.  Translation by the origin returns
    an exact copy.
    """
    if not isinstance(by, SpacePoint):
        by = SpacePoint(*by)
    if isinstance(f, SampledFunction):
        grid = f.grid
    elif grid is None:
        raise ValueError("a callable f needs a grid")
    alpha = grid.alpha if ctx is None else as_context(ctx).alpha
    if by.x == 0 and by.t == 0:
        if isinstance(f, SampledFunction):
            return f.with_values(f.values.copy())
        return grid.sample(f)
    ev = _as_evaluator(f)
    rule = _translation_rule(alpha, n_theta, n_r)
    Y, S = grid.mesh()
    out = np.empty(grid.shape, dtype=complex)
    for i in range(grid.shape[0]):
        out[i] = _translated_values(ev, by.x, by.t, Y[i], S[i], rule)
    return SampledFunction(grid, out)


# ---------------------------------------------------------------------------
# convolution


def convolve(f, g, ctx=None, grid=None, points=None, n_theta=32, n_r=12,
             cost_budget=DEFAULT_COST_BUDGET):
    """Density of ``(f dm) * (g dm)``:
    ``h(y, s) = int f(x, -t) (T_(y,s) g)(x, t) dm_alpha(x, t)``.

    Integration runs over the space grid (of ``f`` when sampled, else
    ``grid``); ``points`` (a pair of arrays) selects the output points,
    defaulting to the grid nodes.  Raises ``CostGuardError`` when
    ``outputs * grid nodes * rule points`` exceeds ``cost_budget``.
    """
    if isinstance(f, SampledFunction):
        grid = f.grid
    elif isinstance(g, SampledFunction) and grid is None:
        grid = g.grid
    if grid is None:
        raise ValueError("callables need a grid")
    alpha = grid.alpha if ctx is None else as_context(ctx).alpha
    rule = _translation_rule(alpha, n_theta, n_r)
    if points is None:
        Y, S = grid.mesh()
    else:
        Y, S = (np.asarray(p, dtype=float) for p in points)
    yq, sq = np.broadcast_arrays(Y, S)
    yq = np.ravel(yq)
    sq = np.ravel(sq)
    cost = float(yq.size) * grid.shape[0] * grid.shape[1] * rule[0].size
    if cost > cost_budget:
        raise CostGuardError(f"convolution needs {cost:.2e} evaluations, budget is {cost_budget:.2e}")
    fv = grid.sample(_as_evaluator(f)).values[:, ::-1]  # f(x, -t): the t-grid is symmetric
    gev = _as_evaluator(g)
    X, T = grid.mesh()
    W = grid.weights * fv
    nz = np.abs(W) > 0
    Xn, Tn, Wn = X[nz], T[nz], W[nz]
    out = np.empty(yq.size, dtype=complex)
    for i in range(yq.size):
        tg = _translated_values(gev, yq[i], sq[i], Xn, Tn, rule)
        out[i] = np.sum(Wn * tg)
    if points is None:
        return SampledFunction(grid, out.reshape(grid.shape))
    return out.reshape(np.shape(yq))


# ---------------------------------------------------------------------------
# dilation


def dilate(f, r, ctx=None):
    """``(delta_r f)(x, t) = r**-Q f(x/r, t/r**2)``, resampled by interpolation."""
    r = check_positive(r, "r")
    g = f.grid
    Q = 2 * (g.alpha if ctx is None else as_context(ctx).alpha) + 4
    if r == 1.0:
        return f.with_values(f.values.copy())
    X, T = g.mesh()
    return f.with_values(r ** (-Q) * evaluate(f, X / r, T / r**2))


# ---------------------------------------------------------------------------
# sub-Laplacian


@lru_cache(maxsize=None)
def fd_weights(order, derivative):
    """Central stencil weights on offsets ``-p..p`` (``p = order/2``)."""
    if order % 2 or order < 2:
        raise ValueError("stencil order must be a positive even integer")
    p = order // 2
    off = np.arange(-p, p + 1, dtype=float)
    V = off[None, :] ** np.arange(off.size)[:, None]
    rhs = np.zeros(off.size)
    rhs[derivative] = math.factorial(derivative)
    w = np.linalg.solve(V, rhs)
    w.flags.writeable = False
    return off, w


def _check_even(func, t, h, f0):
    fh = func(np.full_like(t, h), t)
    f2 = func(np.full_like(t, 2 * h), t)
    slope = (4 * (fh - f0) - (f2 - f0)) / 2  # odd coefficient times h
    scale = np.abs(fh - f0) + 1e-12 * np.maximum(np.abs(f0), 1e-300)
    if np.any(np.abs(slope) > 1e-2 * scale + 1e-300):
        raise SingularTermError("function is not even in x at x = 0; the (2alpha+1)/x term has no limit")


def sublaplacian_fd(func, x, t, ctx, order=6, h=1e-3):
    """``L func`` at the points ``(x, t)`` by central differences.

    Stencil points with negative x use the even extension ``func(|x|, t)``;
    at ``x = 0`` the singular term is replaced by its limit
    ``(2alpha+1) f_xx``.  A function that is not even in x raises
    ``SingularTermError`` wherever the stencil crosses ``x = 0``.
    """
    alpha = as_context(ctx).alpha
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    off, w2 = fd_weights(order, 2)
    _, w1 = fd_weights(order, 1)

    def ev(xx, tt):
        return np.asarray(func(np.abs(xx), tt), dtype=complex)

    f0 = ev(x, t)
    crosses = x < off[-1] * h
    if np.any(crosses):
        _check_even(ev, t[crosses], h, ev(np.zeros_like(t[crosses]), t[crosses]))
    fxx = sum(wi * ev(x + oi * h, t) for oi, wi in zip(off, w2)) / h**2
    fx = sum(wi * ev(x + oi * h, t) for oi, wi in zip(off, w1) if wi != 0) / h
    ftt = sum(wi * ev(x, t + oi * h) for oi, wi in zip(off, w2)) / h**2
    safe_x = np.where(x > 0, x, 1.0)
    radial = np.where(x > 0, (2 * alpha + 1) * fx / safe_x, (2 * alpha + 1) * fxx)
    out = -(fxx + radial + x**2 * ftt)
    return out


def sublaplacian_spectral(f, gamma_power, dual, tail_threshold=1e-10):
    """``inverse(|(lam, m)|**gamma_power * forward(f))``."""
    if gamma_power < 0:
        raise ValueError("gamma_power must be >= 0")
    F = forward(f, dual)
    if gamma_power:
        F = F.with_values(F.values * dual.norm_nodes ** gamma_power)
    return inverse(F, f.grid, tail_threshold=tail_threshold)
