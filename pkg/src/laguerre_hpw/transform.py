"""Fourier-Laguerre transform by direct quadrature, its inverse, and the
identity checks (Plancherel, Hausdorff-Young, dilation) built on it.

For a row with index m the kernel ``e^{-u/2} L_m(u)/L_m(0)`` with
``u = mu x**2 / k_m`` depends only on ``|lam|``, so it is tabulated once per
row as a ``(n_mu, n_x)`` matrix and the t-integral is applied afterwards for
both signs of lam.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

import numpy as np

from ._validation import check_positive, conjugate_exponent
from .core import as_context
from .errors import GridResolutionError
from .grids import SampledFunction, SpectralFunction, lp_norm_dual, lp_norm_space, warn_tail
from .special import laguerre_function

__all__ = [
    "TransformPlan",
    "get_plan",
    "forward",
    "inverse",
    "plancherel_defect",
    "hausdorff_young_ratio",
    "dilation_identity_defect",
    "interpolate_dilated",
    "l1_preservation_defect",
]


class TransformPlan:
    """Cached kernels for one (space grid, dual grid) pair."""

    def __init__(self, space, dual):
        if space.alpha != dual.alpha:
            raise ValueError("space and dual grids were built for different alpha")
        self.space = space
        self.dual = dual
        self.alpha = space.alpha
        x2 = space.x_nodes**2
        self._kernels = []
        self._lams = []
        bound = 0.0
        for j, (m, k) in enumerate(zip(dual.m_values, dual.k)):
            mu = dual.mu_nodes[dual.active[:, j], j]
            psi = laguerre_function(int(m), self.alpha, mu[:, None] * x2[None, :] / k)
            bound = max(bound, float(np.max(np.abs(psi))))
            self._kernels.append(psi)
            self._lams.append(mu / k)
        self.phi_bound = bound
        if bound > 1 + 1e-12:
            raise GridResolutionError(f"eigenfunction bound violated on grid: max |phi| = {bound}")
        self._xw_kernels = [psi * space.x_weights[None, :] for psi in self._kernels]
        self._kernels_t = [np.ascontiguousarray(psi.T) for psi in self._kernels]

    def _phases(self, j):
        return np.exp(-1j * np.outer(self._lams[j], self.space.t_nodes))

    def forward_values(self, values):
        """Transform of one ``(n_x, n_t)`` array or a stack ``(B, n_x, n_t)``."""
        values = np.asarray(values, dtype=complex)
        single = values.ndim == 2
        stack = values[None] if single else values
        B = stack.shape[0]
        nx, nt = self.space.shape
        flat = np.moveaxis(stack, 0, 1).reshape(nx, B * nt)
        n_mu = self.dual.n_mu
        out = np.zeros((B, 2 * n_mu, self.dual.m_values.size), dtype=complex)
        vt = self.space.t_weights
        # contiguous real operands keep the products on the BLAS path
        re, im = np.ascontiguousarray(flat.real), np.ascontiguousarray(flat.imag)
        real_input = not im.any()
        for j, kern in enumerate(self._xw_kernels):
            q = kern.shape[0]
            H = kern @ re if real_input else kern @ re + 1j * (kern @ im)
            H = H.reshape(q, B, nt)
            E = self._phases(j) * vt
            out[:, n_mu:n_mu + q, j] = np.einsum("qt,qbt->bq", E, H)
            out[:, n_mu - q:n_mu, j] = np.einsum("qt,qbt->bq", E.conj(), H)[:, ::-1]
        return out[0] if single else out

    def inverse_values(self, values):
        values = np.asarray(values, dtype=complex)
        n_mu = self.dual.n_mu
        W = self.dual.weights * values
        neg, pos = W[:n_mu][::-1], W[n_mu:]
        out = np.zeros(self.space.shape, dtype=complex)
        for j, K in enumerate(self._kernels_t):
            q = K.shape[1]
            P = self._phases(j).conj()
            A = pos[:q, j, None] * P + neg[:q, j, None] * P.conj()
            out += K @ np.ascontiguousarray(A.real) + 1j * (K @ np.ascontiguousarray(A.imag))
        return out


_PLANS = OrderedDict()
_LOCK = threading.Lock()
_MAX_PLANS = 8


def get_plan(space, dual):
    """Shared plan for a grid pair (a small LRU keyed on grid identity)."""
    key = (id(space), id(dual))
    with _LOCK:
        hit = _PLANS.get(key)
        if hit is not None and hit[0] is space and hit[1] is dual:
            _PLANS.move_to_end(key)
            return hit[2]
    plan = TransformPlan(space, dual)
    with _LOCK:
        _PLANS[key] = (space, dual, plan)
        while len(_PLANS) > _MAX_PLANS:
            _PLANS.popitem(last=False)
    return plan


def forward(f, dual, ctx=None):
    """``f_hat(lam, m) = int f(x,t) phi_(-lam,m)(x,t) dm_alpha`` on ``dual``."""
    if ctx is not None and as_context(ctx).alpha != f.grid.alpha:
        raise ValueError("context alpha does not match the grid")
    plan = get_plan(f.grid, dual)
    return SpectralFunction(dual, plan.forward_values(f.values))


def inverse(F, space, ctx=None, tail_threshold=1e-10):
    """``f(x,t) = int F phi_(lam,m)(x,t) dgamma_alpha`` on ``space``.

    Emits ``TruncationWarning`` when F keeps more than ``tail_threshold`` of
    its L^2 mass near the edge of the dual grid.
    """
    if ctx is not None and as_context(ctx).alpha != F.grid.alpha:
        raise ValueError("context alpha does not match the grid")
    warn_tail(F, tail_threshold)
    plan = get_plan(space, F.grid)
    return SampledFunction(space, plan.inverse_values(F.values))


def plancherel_defect(f, dual, F=None):
    """``| ||f||_2 - ||f_hat||_2 | / ||f||_2``."""
    n = lp_norm_space(f, 2)
    if n == 0:
        raise ValueError("Plancherel defect undefined for f = 0")
    F = forward(f, dual) if F is None else F
    return abs(n - lp_norm_dual(F, 2)) / n


def hausdorff_young_ratio(f, p, dual, F=None):
    """``||f_hat||_{p'} / ||f||_p`` for ``1 <= p <= 2``."""
    p = float(p)
    if not 1 <= p <= 2:
        raise ValueError("Hausdorff-Young needs 1 <= p <= 2")
    n = lp_norm_space(f, p)
    if n == 0:
        raise ValueError("ratio undefined for f = 0")
    F = forward(f, dual) if F is None else F
    return lp_norm_dual(F, conjugate_exponent(p)) / n


def interpolate_dilated(F, r):
    """``F(r**2 lam, m)`` at the nodes of its own grid, with a mask of the
    nodes where ``r**2 |lam|`` stays inside the row's range."""
    r = check_positive(r, "r")
    grid = F.grid
    n_mu = grid.n_mu
    neg, pos = F.halves()
    out = np.zeros_like(F.values)
    ok = np.zeros(grid.shape, dtype=bool)
    for j, interp in enumerate(grid.interpolators):
        nj = interp.nodes.size
        q = r * r * interp.nodes.ravel()
        _, _, inside = interp.matrix(q)
        for half, sign in ((pos, 1), (neg, -1)):
            vals = interp(half[:nj, j], q) * inside
            if sign > 0:
                out[n_mu:n_mu + nj, j] = vals
                ok[n_mu:n_mu + nj, j] = inside
            else:
                out[n_mu - nj:n_mu, j] = vals[::-1]
                ok[n_mu - nj:n_mu, j] = inside[::-1]
    return out, ok


def dilation_identity_defect(f, r, dual, F=None):
    """Return ``(transform_defect, l1_defect)`` for the intertwining
    ``(delta_r f)^(lam, m) = f_hat(r**2 lam, m)``.

    ``f`` may be a callable ``f(x, t)`` on a given space grid, passed as a
    pair ``(func, space)``, in which case ``delta_r f`` is sampled exactly;
    a ``SampledFunction`` is dilated by panel interpolation.  The transform
    defect is the max node discrepancy relative to ``max |f_hat|``.
    """
    from .operators import dilate

    r = check_positive(r, "r")
    if isinstance(f, tuple):
        func, space = f
        Q = 2 * space.alpha + 4
        g = space.sample(func)
        gd = space.sample(lambda x, t: r ** (-Q) * func(x / r, t / r**2))
    else:
        g = f
        gd = dilate(f, r)
    F = forward(g, dual) if F is None else F
    if r == 1.0:
        return 0.0, 0.0
    Fd = forward(gd, dual)
    target, ok = interpolate_dilated(F, r)
    if not ok.any():
        raise ValueError(f"r={r} pushes every node outside the dual grid")
    scale = np.max(np.abs(F.values[dual.full_active]))
    defect = float(np.max(np.abs(Fd.values - target)[ok]) / scale)
    n1 = lp_norm_space(g, 1)
    l1 = abs(lp_norm_space(gd, 1) - n1) / n1
    return defect, float(l1)


def l1_preservation_defect(func, r, ctx, x_max=8.0, t_max=16.0, n_x=256, n_t=512):
    """``| ||delta_r f||_1 - ||f||_1 | / ||f||_1`` for a callable ``f(x, t)``.

    Both functions are sampled on one box, the given one enlarged by
    ``max(r, 1)`` (``max(r, 1)**2`` in t) with node counts scaled alike, so
    that neither is truncated by its edge.
    """
    from .grids import build_space_grid

    r = check_positive(r, "r")
    ctx = as_context(ctx)
    s = max(r, 1.0)
    space = build_space_grid(ctx, x_max=x_max * s, t_max=t_max * s * s,
                             n_x=16 * int(np.ceil(n_x * s / 16)), n_t=16 * int(np.ceil(n_t * s * s / 16)))
    Q = ctx.Q
    n1 = lp_norm_space(space.sample(func), 1)
    nd = lp_norm_space(space.sample(lambda x, t: r ** (-Q) * func(x / r, t / r**2)), 1)
    return float(abs(nd - n1) / n1)
