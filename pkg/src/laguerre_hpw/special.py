"""Generalized Laguerre polynomials and the eigenfunctions phi_(lam, m)."""

from __future__ import annotations

import numpy as np

from .core import DualPoint, SpacePoint, as_context, dual_norm, laguerre_zero_values

__all__ = [
    "LaguerreEval",
    "laguerre_poly",
    "laguerre_at_zero",
    "laguerre_function",
    "phi",
    "eigen_residual",
]

_RESCALE = 1e150


class LaguerreEval:
    """A single evaluation ``L_m^alpha(u)``."""

    __slots__ = ("m", "alpha", "u", "value")

    def __init__(self, m, alpha, u):
        self.m, self.alpha, self.u = int(m), float(alpha), float(u)
        self.value = float(laguerre_poly(self.m, self.alpha, self.u))

    def __repr__(self):
        return f"LaguerreEval(m={self.m}, alpha={self.alpha}, u={self.u}, value={self.value!r})"


def laguerre_poly(m, alpha, u):
    """``L_m^alpha(u)`` by the forward three-term recurrence."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    u = np.asarray(u, dtype=float)
    prev = np.ones_like(u)
    if m == 0:
        return prev
    cur = 1.0 + alpha - u
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 + alpha - u) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_at_zero(m, alpha):
    return laguerre_zero_values(m, alpha)


def laguerre_function(m, alpha, u):
    """``e^{-u/2} L_m^alpha(u) / L_m^alpha(0)`` for ``u >= 0``.

    Runs the recurrence of the normalized polynomial with periodic rescaling
    and folds the Gaussian factor into the accumulated log-magnitude, so large
    ``u`` neither overflows nor loses the polynomial growth to underflow.
    """
    u = np.asarray(u, dtype=float)
    log_scale = -0.5 * u
    prev = np.ones_like(u)
    if m == 0:
        return np.exp(log_scale)
    cur = 1.0 - u / (alpha + 1)
    for k in range(1, m):
        prev, cur = cur, ((2 * k + alpha + 1 - u) * cur - k * prev) / (k + alpha + 1)
        if k % 16 == 0:
            big = np.abs(cur) > _RESCALE
            if big.any():
                s = np.where(big, np.abs(cur), 1.0)
                cur = cur / s
                prev = prev / s
                log_scale = log_scale + np.log(s)
    return cur * np.exp(log_scale)


def phi(lam, m, x, t, ctx):
    """Eigenfunction ``phi_(lam,m)(x,t) = e^{i lam t} e^{-|lam| x^2 / 2} L_m(|lam| x^2) / L_m(0)``."""
    alpha = as_context(ctx).alpha
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(1j * lam * t) * laguerre_function(int(m), alpha, abs(lam) * x * x)


def _default_probes():
    x = np.array([0.0, 0.3, 0.7, 1.2, 2.0])
    t = np.array([-1.0, 0.0, 0.5, 1.5])
    X, T = np.meshgrid(x, t, indexing="ij")
    return X.ravel(), T.ravel()


def eigen_residual(q, ctx, order=6, h=1e-3, probes=None):
    """Max normalized residual ``|L_fd phi - |q| phi| / (1 + |q|)`` over probe points."""
    from .operators import sublaplacian_fd

    if not isinstance(q, DualPoint):
        q = DualPoint(*q)
    if q.lam == 0:
        raise ValueError("eigen_residual needs lam != 0")
    ctx = as_context(ctx)
    x, t = _default_probes() if probes is None else map(np.asarray, probes)
    if np.any(np.asarray(x) < 0):
        raise ValueError("probe points must have x >= 0")
    eig = float(dual_norm(q.lam, q.m, ctx))

    def f(xx, tt):
        return phi(q.lam, q.m, xx, tt, ctx)

    lf = sublaplacian_fd(f, x, t, ctx, order=order, h=h)
    return float(np.max(np.abs(lf - eig * f(x, t))) / (1 + abs(eig)))


def space_point_phi(q: DualPoint, p: SpacePoint, ctx):
    """``phi`` at single points, for the point-typed interface."""
    return complex(phi(q.lam, q.m, p.x, p.t, ctx))
