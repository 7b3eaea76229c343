"""Test functions on K with closed-form Fourier-Laguerre transforms.

Every entry is a finite sum of terms

    c * x**(2j) * exp(i lam0 t) * exp(-beta x**2 - eta (t - tau)**2),

whose transform is

    c / (2 sqrt(pi eta)) * exp(-(lam - lam0)**2 / (4 eta) - i (lam - lam0) tau)
      * (-d/dbeta)**j [(beta - l)**m (beta + l)**-(m + alpha + 1)],   l = |lam| / 2.

The derivative is expanded with the Leibniz rule.  An eigenfunction times a
Gaussian window is such a sum once ``L_m(u) / L_m(0)`` is written out in
powers of ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = ["Term", "CatalogEntry", "default_catalog", "get_entry", "KINDS"]

KINDS = ("gaussian", "modulated_gaussian", "polynomial_gaussian", "shifted_bump", "eigen_packet")


@dataclass(frozen=True)
class Term:
    coef: complex
    j: int
    lam0: float
    beta: float
    eta: float
    tau: float = 0.0

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        g = np.exp(-self.beta * x * x - self.eta * (t - self.tau) ** 2)
        if self.lam0:
            g = g * np.exp(1j * self.lam0 * t)
        if self.j:
            g = g * x ** (2 * self.j)
        return self.coef * g

    def hat(self, lam, m, alpha):
        lam = np.asarray(lam, dtype=float)
        m = np.asarray(m)
        lam, m = np.broadcast_arrays(lam, m)
        d = lam - self.lam0
        front = self.coef / (2 * math.sqrt(math.pi * self.eta)) * np.exp(-d * d / (4 * self.eta))
        if self.tau:
            front = front * np.exp(-1j * d * self.tau)
        ell = np.abs(lam) / 2
        sp = self.beta + ell
        rho = (self.beta - ell) / sp
        n = m + alpha + 1
        # (-d/dbeta)^j B = (-1)^j sum_i C(j,i) d^i (beta-l)^m d^(j-i) (beta+l)^-n
        acc = np.zeros(lam.shape)
        for i in range(self.j + 1):
            k = self.j - i
            falling = np.ones(lam.shape)
            for q in range(i):
                falling = falling * (m - q)
            live = m >= i
            power = np.where(live, m - i, 0)
            term = (math.comb(self.j, i) * falling * (-1.0) ** k * special.poch(n, k)
                    * rho**power * sp ** (-(alpha + 1) - i - k))
            acc = acc + np.where(live, term, 0.0)
        return front * (-1.0) ** self.j * acc


def _packet_terms(lam0, m0, beta_w, eta_w, alpha):
    """``phi_(lam0, m0)(x, t) exp(-beta_w x^2 - eta_w t^2)`` as a sum of terms."""
    s = abs(lam0)
    l0 = special.binom(m0 + alpha, m0)
    terms = []
    for j in range(m0 + 1):
        c = (-1) ** j * special.binom(m0 + alpha, m0 - j) / math.factorial(j) / l0
        terms.append(Term(c * s**j, j, lam0, beta_w + s / 2, eta_w))
    return terms


@dataclass(frozen=True)
class CatalogEntry:
    """One smooth, rapidly decaying test function with a closed-form hat."""

    id: str
    kind: str
    parameters: dict = field(default_factory=dict)
    oracle: str = "closed_form_hat"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown catalog kind {self.kind!r}")

    def terms(self, alpha):
        p = self.parameters
        if self.kind == "eigen_packet":
            return _packet_terms(p["lam0"], int(p["m0"]), p["beta"], p["eta"], alpha)
        return [Term(1.0, int(p.get("j", 0)), p.get("lam0", 0.0), p["beta"], p["eta"], p.get("tau", 0.0))]

    def function(self, alpha):
        terms = self.terms(alpha)
        return lambda x, t: sum(tm(x, t) for tm in terms)

    def hat(self, alpha):
        terms = self.terms(alpha)
        return lambda lam, m: sum(tm.hat(lam, m, alpha) for tm in terms)

    def sample(self, space):
        return space.sample(self.function(space.alpha))


def default_catalog():
    out = []
    for beta in (0.5, 1.0, 2.0):
        for eta in (0.5, 1.0, 2.0):
            out.append(CatalogEntry(f"gaussian_b{beta:g}_e{eta:g}", "gaussian", {"beta": beta, "eta": eta}))
    out.append(CatalogEntry("modulated_l1", "modulated_gaussian", {"lam0": 1.0, "beta": 0.5, "eta": 0.5}))
    out.append(CatalogEntry("polygauss_x2", "polynomial_gaussian", {"j": 1, "beta": 1.0, "eta": 1.0}))
    out.append(CatalogEntry("shifted_bump_t2", "shifted_bump", {"beta": 1.0, "eta": 1.0, "tau": 2.0}))
    out.append(CatalogEntry("eigen_packet_l1_m2", "eigen_packet",
                            {"lam0": 1.0, "m0": 2, "beta": 0.5, "eta": 0.5}))
    return out


def get_entry(entry_id):
    for e in default_catalog():
        if e.id == entry_id:
            return e
    raise KeyError(f"no catalog entry {entry_id!r}")
