"""Composite Gauss rules on panels and barycentric interpolation on them."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import special


@lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=None)
def _jacobi(n, a, b):
    # weight (1 - x)**a (1 + x)**b on [-1, 1]
    x, w = special.roots_jacobi(n, a, b)
    return x, w


def _bary_weights(x):
    # affine to [-1, 1] first: the weights are scale-free up to a constant,
    # and wide or tiny panels would otherwise overflow the products
    x = (2 * x - (x.max() + x.min())) / (x.max() - x.min())
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    w = 1.0 / np.prod(d, axis=1)
    return w / np.max(np.abs(w))


def composite_rule(breaks, n, density_exponent=0.0):
    """Nodes and weights for ``int f(x) x**e dx`` over ``[breaks[0], breaks[-1]]``.

    Every panel uses ``n`` Gauss-Legendre points, except that a first panel
    starting at 0 with ``e != 0`` uses Gauss-Jacobi so the density's
    non-smoothness at the origin stays out of the error budget.
    """
    breaks = np.asarray(breaks, dtype=float)
    nodes, weights = [], []
    for i, (lo, hi) in enumerate(zip(breaks[:-1], breaks[1:])):
        half = 0.5 * (hi - lo)
        if i == 0 and lo == 0.0 and density_exponent != 0.0:
            xi, wi = _jacobi(n, 0.0, float(density_exponent))
            x = lo + half * (xi + 1)
            w = wi * half ** (density_exponent + 1)
        else:
            xi, wi = _legendre(n)
            x = lo + half * (xi + 1)
            w = wi * half * np.abs(x) ** density_exponent
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


class PanelInterpolator:
    """Panel-local Lagrange interpolation for data sampled by ``composite_rule``."""

    def __init__(self, breaks, n, nodes):
        self.breaks = np.asarray(breaks, dtype=float)
        self.n = int(n)
        self.nodes = np.asarray(nodes, dtype=float).reshape(-1, self.n)
        self.bary = np.array([_bary_weights(p) for p in self.nodes])

    @property
    def lo(self):
        return self.breaks[0]

    @property
    def hi(self):
        return self.breaks[-1]

    def matrix(self, q):
        """Return ``(panel, L, inside)`` with ``values[panel*n + j] @ L[:, j]``
        the interpolant at ``q``; points outside the panels get ``inside=False``."""
        q = np.asarray(q, dtype=float).ravel()
        inside = (q >= self.lo) & (q <= self.hi)
        panel = np.clip(np.searchsorted(self.breaks, q, side="right") - 1, 0, len(self.breaks) - 2)
        xn = self.nodes[panel]
        bw = self.bary[panel]
        d = q[:, None] - xn
        exact = d == 0.0
        d = np.where(exact, 1.0, d)
        c = bw / d
        with np.errstate(divide="ignore", invalid="ignore"):
            L = c / np.sum(c, axis=1, keepdims=True)
        hit = exact.any(axis=1)
        if hit.any():
            L[hit] = exact[hit].astype(float)
        L[~inside] = 0.0
        return panel, L, inside

    def __call__(self, values, q):
        """Interpolate along the first axis of ``values`` at points ``q``."""
        values = np.asarray(values)
        panel, L, inside = self.matrix(q)
        v = values.reshape(len(self.nodes), self.n, *values.shape[1:])[panel]
        return np.einsum("qj,qj...->q...", L, v)
