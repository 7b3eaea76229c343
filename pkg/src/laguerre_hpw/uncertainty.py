"""Heisenberg-Pauli-Weyl functionals on K and the constructive constants.

Four inequality families are covered:

* ``T15``: ``||f||_p^{a+b} <= C || |x|^a f ||_p^b || mu^{b/2} f_hat ||_{p'}^a``
  for ``1 <= p < 2`` and ``b > Q(1/p - 1/2)``;
* ``T16``: ``||f_hat||_p^{a+b} <~ || |x|^a f ||_{p'}^b || mu^{b/2} f_hat ||_p^a``
  for ``2 <= p < inf``, ``0 < a < Q/p``, ``0 < b < 4``;
* ``T17``: the ``T15`` form at ``p = 2`` for all ``a, b > 0``;
* ``T18``: the ``T15`` form on ``1 <= p <= 2`` under ``b > Q(1/p - 1/2)``.

Here ``|x|`` is the homogeneous norm ``|(x,t)|`` and ``mu = |(lam, m)|``.
Every functional takes a ``SampledFunction`` (which carries its space grid)
and a ``DualGrid``; a precomputed transform may be passed as ``F``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from ._validation import check_exponent, check_positive, conjugate_exponent, require
from .core import as_context, dual_ball_volume, dual_tail_integral
from .grids import SampledFunction, lp_norm_dual, lp_norm_space
from .transform import forward

__all__ = [
    "THEOREMS",
    "HpwRecord",
    "default_theorem",
    "is_admissible",
    "hpw_ratio",
    "scale_invariance_defect",
    "normalized_dual_norm",
    "case1_constant",
    "case2_constant",
    "mainlem_bound_check",
    "gs_norm",
    "gs_norm_quadrature",
    "ineq332_check",
    "ineq332_slope",
    "optimal_s",
    "elementary_bound_check",
]

THEOREMS = ("T15", "T16", "T17", "T18")


@dataclass(frozen=True)
class HpwRecord:
    """Both sides of one HPW inequality for one function.

    ``norm_p`` is the unweighted norm raised to ``a + b`` on the left
    (``||f||_p``, or ``||f_hat||_p`` for ``T16``); ``wnorm_space`` and
    ``wnorm_dual`` are the two weighted norms on the right.
    """

    p: float
    a: float
    b: float
    lhs: float
    rhs: float
    ratio: float
    theorem_id: str
    admissible: bool
    norm_p: float
    wnorm_space: float
    wnorm_dual: float

    def as_dict(self):
        return asdict(self)


def default_theorem(p):
    p = check_exponent(p, allow_inf=False)
    if p < 2:
        return "T15"
    return "T17" if p == 2 else "T16"


def is_admissible(theorem_id, p, a, b, ctx):
    """Whether ``(p, a, b)`` satisfies the hypotheses of ``theorem_id``."""
    Q = as_context(ctx).Q
    p, a, b = float(p), float(a), float(b)
    if not (a > 0 and b > 0 and math.isfinite(p) and p >= 1):
        return False
    if theorem_id == "T15":
        return p < 2 and b > Q * (1 / p - 0.5)
    if theorem_id == "T16":
        return p >= 2 and a < Q / p and b < 4
    if theorem_id == "T17":
        return p == 2
    if theorem_id == "T18":
        return p <= 2 and b > Q * (1 / p - 0.5)
    raise ValueError(f"unknown theorem id {theorem_id!r}; expected one of {THEOREMS}")


def _norms(f, p, a, b, dual, theorem_id, F):
    F = forward(f, dual) if F is None else F
    q = conjugate_exponent(p)
    if theorem_id == "T16":
        return lp_norm_dual(F, p), lp_norm_space(f, q, a), lp_norm_dual(F, p, b / 2)
    return lp_norm_space(f, p), lp_norm_space(f, p, a), lp_norm_dual(F, q, b / 2)


def hpw_ratio(f, p, a, b, dual, ctx=None, theorem_id=None, F=None):
    """Evaluate both sides of the selected inequality; ``ratio = rhs / lhs``.

    Parameters outside the theorem's hypotheses are still evaluated and the
    record is flagged ``admissible=False``.
    """
    p = check_exponent(p, allow_inf=False)
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    theorem_id = default_theorem(p) if theorem_id is None else theorem_id
    alpha = f.grid.alpha if ctx is None else as_context(ctx).alpha
    ok = is_admissible(theorem_id, p, a, b, alpha)
    n, ws, wd = _norms(f, p, a, b, dual, theorem_id, F)
    if n == 0:
        raise ValueError("HPW ratio is undefined for f = 0")
    lhs = n ** (a + b)
    rhs = ws**b * wd**a
    return HpwRecord(p, a, b, lhs, rhs, rhs / lhs, theorem_id, ok, n, ws, wd)


def _rescaled(f, c, r, space):
    """``c * delta_r f`` and ``f`` on ``space``; exact for callables."""
    from .operators import dilate

    if isinstance(f, SampledFunction):
        return f, dilate(f, r) * c
    Q = 2 * space.alpha + 4
    return space.sample(f), space.sample(lambda x, t: c * r ** (-Q) * f(x / r, t / r**2))


def scale_invariance_defect(f, p, a, b, c, r, dual, space=None, theorem_id=None):
    """``|ratio(c delta_r f) - ratio(f)| / ratio(f)``.

    ``f`` is a ``SampledFunction`` (dilated by interpolation) or a callable
    ``f(x, t)`` sampled on ``space``.  When the dilated function leaves the
    grid box the evaluation emits ``TailWarning`` and the lost mass shows up
    in the returned defect.
    """
    c = check_positive(c, "c")
    r = check_positive(r, "r")
    if not isinstance(f, SampledFunction) and space is None:
        raise ValueError("a callable f needs a space grid")
    g, h = _rescaled(f, c, r, space)
    base = hpw_ratio(g, p, a, b, dual, theorem_id=theorem_id).ratio
    if r == 1.0:
        # the scaling cancels algebraically; only c enters
        moved = hpw_ratio(g * c, p, a, b, dual, theorem_id=theorem_id).ratio
    else:
        moved = hpw_ratio(h, p, a, b, dual, theorem_id=theorem_id).ratio
    return abs(moved - base) / base


def normalized_dual_norm(record):
    """``|| mu^{b/2} g_hat ||`` for the rescaling ``g = c delta_r f`` with
    ``||g|| = || |x|^a g || = 1``; by invariance it equals ``ratio**(1/a)``."""
    return record.ratio ** (1 / record.a)


# ---------------------------------------------------------------------------
# constructive constants


@dataclass(frozen=True)
class ConstantChain:
    """Choices made while building a constructive constant.

    ``branch`` is ``"annulus"`` when ``r2 < r1`` and the bound comes from the
    mass on ``r2 <= mu < r1``.  Otherwise (``"trivial"``) the two estimates
    alone already exceed the Plancherel floor unless the dual norm is above
    1, so the bound is 1.  ``log_value`` is kept because ``value`` can
    underflow for exponents near 1.
    """

    s0: float
    r1: float
    r2: float
    plancherel_floor: float
    log_value: float
    branch: str

    @property
    def value(self):
        return math.exp(self.log_value)


def _chain(s0, log_r1, log_r2, floor, log_value):
    r1, r2 = (float(np.exp(v)) for v in (log_r1, log_r2))
    if log_r2 >= log_r1:
        return ConstantChain(float(s0), r1, r2, float(floor), 0.0, "trivial")
    return ConstantChain(float(s0), r1, r2, float(floor), float(log_value), "annulus")


def _log_ball_radius(log_volume, ctx):
    a = ctx.alpha
    return (log_volume + math.log((a + 2) / (2 * ctx.series_constant))) / (a + 2)


def case1_constant(a, b, ctx, details=False):
    """Lower bound for ``|| mu^{b/2} f_hat ||_inf`` when
    ``||f||_1 = || |x|^a f ||_1 = 1`` (requires ``b > Q/2``).

    Each free choice takes half of what is available: ``s0`` makes
    ``1 - s0**-a = 1/2``; ``r1`` puts the high-frequency tail at half the
    Plancherel floor; ``r2`` caps the low-frequency mass (using
    ``|f_hat| <= 1``) at half of what remains.  Returns
    ``C = r2**(b/2) (1 - s0**-a)**2 / (4 gamma(E_r1) s0**Q Omega)``, or 1 when
    ``r2 >= r1`` (see ``ConstantChain``).  The lower bound is ``min(1, C)``.
    """
    ctx = as_context(ctx)
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    require(b > ctx.Q / 2, f"case p=1 needs b > Q/2 = {ctx.Q / 2}, got b={b}")
    Q, S, om = ctx.Q, ctx.series_constant, ctx.omega_alpha
    e = b - ctx.alpha - 2
    s0 = 2.0 ** (1 / a)
    gap = (1 - s0 ** (-a)) ** 2
    floor = gap / (s0**Q * om)
    # 2/(e) r**-e S = floor/2
    log_r1 = math.log(4 * S / (e * floor)) / e
    log_r2 = _log_ball_radius(math.log(floor / 4), ctx)
    log_value = (b / 2 * log_r2 + math.log(gap)
                 - math.log(4 * dual_ball_volume(1.0, ctx) * s0**Q * om) - (ctx.alpha + 2) * log_r1)
    chain = _chain(s0, log_r1, log_r2, floor, log_value)
    return chain if details else chain.value


def case2_constant(a, b, p, ctx, details=False):
    """Lower bound for ``|| mu^{b/2} f_hat ||_{p'}`` when
    ``||f||_p = || |x|^a f ||_p = 1``, for ``1 < p < 2`` and
    ``b > Q(1/p - 1/2)``.

    The implicit constants of the argument are made explicit: the
    Hausdorff-Young constant is 1 and ``m(B_s) = s**Q Omega`` enters the
    Holder step.  ``s0 = 2**(1/(a p))``; ``r1`` makes the Holder tail bound
    ``I3**(1 - 2/p')`` half the Plancherel floor; ``r2`` makes the low-ball
    bound ``gamma(E_r2)**(1 - 2/p')`` a quarter of it.  Returns 1 when
    ``r2 >= r1``.  The lower bound is ``min(1, C)``.
    """
    ctx = as_context(ctx)
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    p = float(p)
    require(1 < p < 2, f"case 1<p<2 needs p in (1, 2), got p={p}")
    require(b > ctx.Q * (1 / p - 0.5), f"case 1<p<2 needs b > Q(1/p-1/2) = {ctx.Q * (1 / p - 0.5)}")
    Q, om = ctx.Q, ctx.omega_alpha
    q = p / (p - 1)
    hold = 1 - 2 / q
    s0 = 2.0 ** (1 / (a * p))
    floor = (1 - s0 ** (-a * p)) ** (2 / p) * (s0**Q * om) ** (1 - 2 / p)
    c = b * q / (q - 2)
    e = c - ctx.alpha - 2
    # I3(r) = k r**-e with k = I3(1); solve (k r**-e)**hold = floor / 2
    k = dual_tail_integral(c, 1.0, ctx)
    log_r1 = (math.log(k) - math.log(floor / 2) / hold) / e
    log_r2 = _log_ball_radius(math.log(floor / 4) / hold, ctx)
    log_ball = math.log(dual_ball_volume(1.0, ctx)) + (ctx.alpha + 2) * log_r1
    log_value = (b * q / 2 * log_r2 + q / 2 * math.log(floor / 4) + (2 - q) / 2 * log_ball) / q
    chain = _chain(s0, log_r1, log_r2, floor, log_value)
    return chain if details else chain.value


@dataclass(frozen=True)
class HolderReport:
    i1: float
    i1_bound: float
    i2: float
    i2_bound: float
    i3: float

    @property
    def ok(self):
        return self.i1 <= self.i1_bound and self.i2 <= self.i2_bound

    @property
    def slack(self):
        """``(i1_bound / i1, i2_bound / i2)``; infinite when a side vanishes."""
        return (self.i1_bound / self.i1 if self.i1 else np.inf,
                self.i2_bound / self.i2 if self.i2 else np.inf)


def mainlem_bound_check(f, p, b, r, dual, F=None):
    """Split ``||f_hat||_2^2`` at ``|(lam,m)| = r`` and test both Holder bounds.

    ``I1 = int_{E_r} |f_hat|^2 <= ||f_hat||_{p'}^2 gamma(E_r)^{1-2/p'}`` and
    ``I2 = int_{E_r^c} |f_hat|^2 <= ||mu^{b/2} f_hat||_{p'}^2 I3^{1-2/p'}``
    with ``I3 = int_{E_r^c} mu^{-b p'/(p'-2)} dgamma`` in closed form.
    """
    ctx = as_context(f.grid.alpha)
    p = float(p)
    r = check_positive(r, "r")
    require(1 < p < 2, f"needs 1 < p < 2, got p={p}")
    require(b > ctx.Q * (1 / p - 0.5), f"needs b > Q(1/p-1/2) = {ctx.Q * (1 / p - 0.5)}")
    F = forward(f, dual) if F is None else F
    q = p / (p - 1)
    mass = dual.weights * np.abs(F.values) ** 2
    inside = dual.norm_nodes < r
    i1 = float(np.sum(mass[inside]))
    i2 = float(np.sum(mass[~inside]))
    hold = 1 - 2 / q
    i3 = dual_tail_integral(b * q / (q - 2), r, ctx)
    b1 = lp_norm_dual(F, q) ** 2 * dual_ball_volume(r, ctx) ** hold
    b2 = lp_norm_dual(F, q, b / 2) ** 2 * i3**hold
    return HolderReport(i1, b1, i2, b2, i3)


# ---------------------------------------------------------------------------
# heat-type weights g_s = exp(-s mu^2)


def gs_norm(s, p, ctx):
    """Exact ``||g_s||_p`` from ``||g_s||_p^p = (s p)^{-Q/4} Gamma(Q/4) S_alpha``."""
    s = check_positive(s, "s")
    p = check_exponent(p)
    if np.isinf(p):
        return 1.0
    ctx = as_context(ctx)
    Q = ctx.Q
    return float(((s * p) ** (-Q / 4) * special.gamma(Q / 4) * ctx.series_constant) ** (1 / p))


def gs_norm_quadrature(s, p, dual):
    """``||g_s||_p`` by quadrature on the dual grid."""
    s = check_positive(s, "s")
    g = dual.sample_norm(lambda mu: np.exp(-s * mu**2))
    return lp_norm_dual(g, p)


@dataclass(frozen=True)
class WeightReport:
    s: float
    weighted: float
    space: float
    k: float


def ineq332_check(f, a, p, s, dual, F=None):
    """``K = ||g_s f_hat||_p s^{a/4} / || |x|^a f ||_{p'}``.

    The inequality claims ``K`` stays bounded in ``s`` for ``2 <= p < inf``
    and ``0 < a < Q/p``; hypotheses are only checked, not enforced.
    """
    p = check_exponent(p, allow_inf=False)
    a = check_positive(a, "a")
    s = check_positive(s, "s")
    require(p >= 2, f"needs p >= 2, got p={p}")
    F = forward(f, dual) if F is None else F
    gF = F.with_values(F.values * np.exp(-s * dual.norm_nodes**2))
    num = lp_norm_dual(gF, p)
    den = lp_norm_space(f, conjugate_exponent(p), a)
    if den == 0:
        raise ValueError("weighted space norm vanishes")
    return WeightReport(s, num, den, num * s ** (a / 4) / den)


def ineq332_slope(f, p, s_values, dual, F=None):
    """Least-squares slope of ``log ||g_s f_hat||_p`` against ``log s``."""
    F = forward(f, dual) if F is None else F
    s_values = np.asarray(s_values, dtype=float)
    vals = [lp_norm_dual(F.with_values(F.values * np.exp(-s * dual.norm_nodes**2)), p)
            for s in s_values]
    return float(np.polyfit(np.log(s_values), np.log(vals), 1)[0])


def optimal_s(a, b, n_space, n_dual):
    """Minimiser of ``s^{-a/4} n_space + s^{b/4} n_dual``:
    ``(a n_space / (b n_dual))**(4 / (a + b))``."""
    for v, name in ((a, "a"), (b, "b"), (n_space, "n_space"), (n_dual, "n_dual")):
        check_positive(v, name)
    return (a * n_space / (b * n_dual)) ** (4 / (a + b))


@dataclass(frozen=True)
class BoundReport:
    b: float
    sup: float
    argmax: float
    ok: bool


def elementary_bound_check(b, z_max=1e6, n=20001, tol=1e-12):
    """Scan ``z**(-b/4) (1 - exp(-z))`` on a log grid of ``(0, z_max]``."""
    b = float(b)
    if not 0 < b < 4:
        raise ValueError("needs 0 < b < 4")
    z = np.logspace(-12, np.log10(z_max), n)
    v = z ** (-b / 4) * -np.expm1(-z)
    i = int(np.argmax(v))
    return BoundReport(b, float(v[i]), float(z[i]), bool(v[i] <= 1 + tol))
