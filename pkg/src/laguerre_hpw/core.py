"""Points, norms, measures and closed-form geometric constants of the
Laguerre hypergroup K = [0, inf) x R and its dual R x N.

The space measure is ``dm(x, t) = x**(2a+1) / (pi Gamma(a+1)) dx dt`` and the
dual (Plancherel) measure is ``L_m^a(0) |lam|**(a+1) dlam`` summed over m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .errors import DivergentIntegralError

__all__ = [
    "SpacePoint",
    "DualPoint",
    "HypergroupContext",
    "SeriesResult",
    "as_context",
    "homogeneous_norm",
    "dual_norm",
    "space_density",
    "plancherel_weight",
    "laguerre_zero_values",
    "laguerre_zeta",
    "unit_ball_volume",
    "series_constant",
    "dual_ball_volume",
    "space_ball_moment",
    "dual_tail_integral",
]


@dataclass(frozen=True)
class SpacePoint:
    x: float
    t: float

    def __post_init__(self):
        if not self.x >= 0:
            raise ValueError(f"radial coordinate must be >= 0, got x={self.x}")


@dataclass(frozen=True)
class DualPoint:
    lam: float
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"Laguerre index must be a non-negative integer, got m={self.m}")


class SeriesResult(NamedTuple):
    value: float
    tail_bound: float
    n_terms: int


def laguerre_zero_values(m, alpha):
    """``L_m^alpha(0) = Gamma(m+alpha+1) / (m! Gamma(alpha+1))`` in log space."""
    m = np.asarray(m, dtype=float)
    return np.exp(special.gammaln(m + alpha + 1) - special.gammaln(m + 1) - special.gammaln(alpha + 1))


def _zeta_log_term(x, alpha, s):
    return (special.gammaln(x + alpha + 1) - special.gammaln(x + 1) - special.gammaln(alpha + 1)
            - s * np.log(4 * x + 2 * alpha + 2))


def _zeta_tail(M, alpha, s):
    """Euler-Maclaurin estimate of sum_{m>=M} f(m) and its remainder bound."""
    k = 4 * M + 2 * alpha + 2
    f = math.exp(_zeta_log_term(M, alpha, s))
    g1 = special.digamma(M + alpha + 1) - special.digamma(M + 1) - 4 * s / k
    g2 = special.polygamma(1, M + alpha + 1) - special.polygamma(1, M + 1) + 16 * s / k**2
    g3 = special.polygamma(2, M + alpha + 1) - special.polygamma(2, M + 1) - 128 * s / k**3
    d1 = f * g1
    d3 = f * (g3 + 3 * g1 * g2 + g1**3)
    integral, _ = integrate.quad(lambda x: math.exp(_zeta_log_term(x, alpha, s)), M, np.inf,
                                 epsabs=0.0, epsrel=1e-13, limit=200)
    estimate = integral + 0.5 * f - d1 / 12.0 + d3 / 720.0
    # B4 remainder with f''' monotone on [M, inf)
    return estimate, abs(d3) / 720.0


def laguerre_zeta(alpha, s, start=0, rel_tol=1e-10, min_terms=32):
    """Sum ``sum_{m >= start} L_m^alpha(0) / (4m + 2alpha + 2)**s``.

    Terms decay like ``m**(alpha - s)``, so plain truncation is hopeless at
    tight tolerances; the sum is split into ``n_terms`` direct terms plus an
    Euler-Maclaurin tail.  ``tail_bound`` bounds the error of the returned value.
    """
    if s <= alpha + 1:
        raise DivergentIntegralError(f"series diverges for s={s} <= alpha+1={alpha + 1}")
    n = int(min_terms)
    while True:
        m = np.arange(start, start + n, dtype=float)
        direct = math.fsum(np.exp(_zeta_log_term(m, alpha, s)))
        tail, bound = _zeta_tail(start + n, alpha, s)
        value = direct + tail
        if bound <= rel_tol * abs(value) or n >= 1 << 20:
            return SeriesResult(value, bound, n)
        n *= 2


def _omega(alpha):
    # t-extent of the ball at radius x is sqrt(1 - x**4); the x-integral has
    # algebraic end behaviour handled by quad's weight='alg'
    val, _ = integrate.quad(lambda x: math.sqrt((1 + x) * (1 + x * x)), 0.0, 1.0,
                            weight="alg", wvar=(2 * alpha + 1, 0.5), epsabs=0.0, epsrel=1e-13)
    return val / (math.pi * math.gamma(alpha + 1))


@dataclass(frozen=True)
class HypergroupContext:
    """Order ``alpha`` and the constants derived from it.

    ``omega_alpha`` is the measure of the unit ball ``{x**4 + 4t**2 < 1}`` and
    ``series_constant`` is ``sum_m L_m^alpha(0) / (4m + 2alpha + 2)**(alpha+2)``.
    """

    alpha: float
    rel_tol: float = 1e-10
    Q: float = field(init=False)
    omega_alpha: float = field(init=False)
    series_constant: float = field(init=False)
    series_tail_bound: float = field(init=False)
    m_max_series: int = field(init=False)

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        alpha = float(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "Q", 2 * alpha + 4)
        object.__setattr__(self, "omega_alpha", _omega(alpha))
        res = laguerre_zeta(alpha, alpha + 2, rel_tol=self.rel_tol)
        object.__setattr__(self, "series_constant", res.value)
        object.__setattr__(self, "series_tail_bound", res.tail_bound)
        object.__setattr__(self, "m_max_series", res.n_terms)


@lru_cache(maxsize=64)
def _cached_context(alpha, rel_tol):
    return HypergroupContext(alpha, rel_tol)


def as_context(ctx, rel_tol=1e-10):
    """Accept a context or a bare ``alpha``."""
    if isinstance(ctx, HypergroupContext):
        return ctx
    return _cached_context(float(ctx), rel_tol)


def homogeneous_norm(x, t=None):
    """``|(x, t)| = (x**4 + 4 t**2)**(1/4)``; accepts a SpacePoint or arrays."""
    if t is None:
        x, t = x.x, x.t
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return (x**4 + 4 * t**2) ** 0.25


def dual_norm(lam, m=None, ctx=0.0):
    """Dual quasi-norm ``4 |lam| (m + (alpha+1)/2)``, the sub-Laplacian eigenvalue."""
    if isinstance(lam, DualPoint):
        ctx = m if m is not None else ctx
        lam, m = lam.lam, lam.m
    alpha = as_context(ctx).alpha
    return 4 * np.abs(lam) * (np.asarray(m) + (alpha + 1) / 2)


def space_density(x, ctx):
    """Density of ``dm_alpha`` with respect to ``dx dt``."""
    if isinstance(x, SpacePoint):
        x = x.x
    alpha = as_context(ctx).alpha
    return np.asarray(x, dtype=float) ** (2 * alpha + 1) / (math.pi * math.gamma(alpha + 1))


def plancherel_weight(lam, m=None, ctx=0.0):
    """Density ``L_m^alpha(0) |lam|**(alpha+1)`` of the Plancherel measure."""
    if isinstance(lam, DualPoint):
        ctx = m if m is not None else ctx
        lam, m = lam.lam, lam.m
    alpha = as_context(ctx).alpha
    return laguerre_zero_values(m, alpha) * np.abs(lam) ** (alpha + 1)


def unit_ball_volume(ctx):
    return as_context(ctx).omega_alpha


def series_constant(ctx):
    return as_context(ctx).series_constant


def dual_ball_volume(r, ctx):
    """Plancherel measure of ``E_r = {|(lam, m)| < r}``."""
    if not r > 0:
        raise ValueError("r must be positive")
    ctx = as_context(ctx)
    a = ctx.alpha
    return 2 * r ** (a + 2) / (a + 2) * ctx.series_constant


def space_ball_moment(c, r, ctx):
    """``int_{B_r} |(x,t)|**(-c) dm_alpha``, from ``m(B_s) = s**Q Omega``."""
    if not r > 0:
        raise ValueError("r must be positive")
    ctx = as_context(ctx)
    if c >= ctx.Q:
        raise DivergentIntegralError(f"moment diverges at the origin for c={c} >= Q={ctx.Q}")
    return ctx.Q * ctx.omega_alpha / (ctx.Q - c) * r ** (ctx.Q - c)


def dual_tail_integral(c, r, ctx):
    """``int_{E_r^c} |(lam,m)|**(-c) dgamma_alpha`` for ``c > alpha + 2``."""
    if not r > 0:
        raise ValueError("r must be positive")
    ctx = as_context(ctx)
    e = c - ctx.alpha - 2
    if e <= 0:
        raise DivergentIntegralError(f"tail integral diverges for c={c} <= alpha+2={ctx.alpha + 2}")
    return 2 / e * r ** (-e) * ctx.series_constant
