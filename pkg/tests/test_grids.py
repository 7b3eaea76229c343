import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, special

from laguerre_hpw.catalog import get_entry
from laguerre_hpw.core import as_context, homogeneous_norm
from laguerre_hpw.errors import GridResolutionError, TruncationWarning
from laguerre_hpw.grids import (SampledFunction, build_dual_grid, build_space_grid, lp_norm_dual,
                                lp_norm_space, tail_mass, warn_tail)


def gaussian_lp(alpha, beta, eta, p):
    return (1 / (2 * (p * beta) ** (alpha + 1) * math.sqrt(math.pi * p * eta))) ** (1 / p)


def brute_space_norm(func, alpha, p, w):
    c = 1 / (math.pi * special.gamma(alpha + 1))

    def g(x, t):
        return abs(func(x, t)) ** p * homogeneous_norm(x, t) ** (w * p) * x ** (2 * alpha + 1) * c

    val = integrate.dblquad(g, -12, 12, 0, 9, epsabs=1e-14, epsrel=1e-12)[0]
    return val ** (1 / p)


def dual_weighted_gs(alpha, s, p, w):
    ctx = as_context(alpha)
    e = (alpha + 2 + w * p) / 2
    return (ctx.series_constant * special.gamma(e) * (s * p) ** (-e)) ** (1 / p)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
@pytest.mark.parametrize("which", ["grids0", "grids1"])
def test_gaussian_lp_closed_form(p, which, request):
    space, _ = request.getfixturevalue(which)
    f = space.sample(lambda x, t: np.exp(-0.7 * x * x - 1.3 * t * t))
    assert_allclose(lp_norm_space(f, p), gaussian_lp(space.alpha, 0.7, 1.3, p), rtol=1e-12)


@pytest.mark.parametrize("alpha,p,w", [(0.0, 1.0, 1.0), (0.0, 1.5, 0.5), (1.0, 2.0, 2.0), (1.0, 4 / 3, 0.25)])
def test_weighted_space_norm_brute(alpha, p, w, grids0, grids1):
    space = grids0[0] if alpha == 0 else grids1[0]
    func = lambda x, t: np.exp(-x * x - t * t)
    got = lp_norm_space(space.sample(func), p, w)
    assert_allclose(got, brute_space_norm(func, alpha, p, w), rtol=1e-9)


def test_root_split_norm_of_sign_changing_function(grids0):
    # L^1 of the eigen packet crosses zero lines; compare with a brute quadrature
    space, _ = grids0
    func = get_entry("eigen_packet_l1_m2").function(0.0)
    got = lp_norm_space(space.sample(func), 1)
    c = 1 / math.pi
    # zeros of L_2(x^2) split the x-range; the t-factor is even
    z = np.sqrt(np.sort(np.real(np.roots([0.5, -2.0, 1.0]))))
    pts = [0.0, *z, 9.0]
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += 2 * integrate.dblquad(lambda x, t: abs(func(x, t)) * x * c, 0, 12, lo, hi,
                                       epsabs=1e-14, epsrel=1e-12)[0]
    assert_allclose(got, total, rtol=1e-9)


def test_space_sup_norm(grids0):
    space, _ = grids0
    f = space.sample(lambda x, t: np.exp(-x * x - t * t) * (1 + 0.5j))
    # a node max: the closest node to the peak sits at x ~ 4e-4
    assert lp_norm_space(f, np.inf) == np.max(np.abs(f.values))
    assert_allclose(lp_norm_space(f, np.inf), abs(1 + 0.5j), rtol=1e-6)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
@pytest.mark.parametrize("p,w", [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (1.0, 1.5), (2.0, 1.0), (3.0, 0.5),
                                 (1.5, 0.75)])
def test_weighted_dual_norm_closed_form(alpha, p, w, grids0, grids1):
    dual = (grids0 if alpha == 0 else grids1)[1]
    g = dual.sample_norm(lambda mu: np.exp(-mu**2))
    assert_allclose(lp_norm_dual(g, p, w), dual_weighted_gs(alpha, 1.0, p, w), rtol=1e-8)


def test_dual_sup_norm_weighted(grids0):
    _, dual = grids0
    g = dual.sample_norm(lambda mu: np.exp(-mu**2))
    # sup of mu^w e^{-mu^2} is (w/2)^(w/2) e^(-w/2)
    w = 1.5
    assert_allclose(lp_norm_dual(g, np.inf, w), (w / 2) ** (w / 2) * math.exp(-w / 2), rtol=1e-10)


def test_space_grid_is_symmetric_and_graded(grids0):
    space, _ = grids0
    assert_allclose(space.t_nodes, -space.t_nodes[::-1], atol=0)
    assert_allclose(space.t_weights, space.t_weights[::-1], atol=0)
    assert space.x_nodes[0] < 1e-3
    assert space.shape == (320, 640)


def test_starved_grids_raise():
    with pytest.raises(GridResolutionError, match="grid-resolution"):
        build_space_grid(0.0, n_x=4)
    with pytest.raises(GridResolutionError, match="grid-resolution"):
        build_dual_grid(0.0, n_lambda=4)


def test_dual_ball_measure(grids0, grids1):
    for space, dual in (grids0, grids1):
        ctx = as_context(dual.alpha)
        assert_allclose(dual.ball_measure(1.0), 2 / (ctx.alpha + 2) * ctx.series_constant, rtol=1e-10)


def test_tail_mass_and_warning(grids0):
    _, dual = grids0
    flat = dual.sample_norm(lambda mu: np.ones_like(mu))
    assert tail_mass(flat) > 0.01
    with pytest.warns(TruncationWarning):
        warn_tail(flat)
    narrow = dual.sample_norm(lambda mu: np.exp(-mu**2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert warn_tail(narrow) < 1e-10


def test_sampled_function_validation(grids0):
    space, _ = grids0
    with pytest.raises(ValueError):
        SampledFunction(space, np.zeros((3, 3)))
    bad = np.zeros(space.shape)
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        SampledFunction(space, bad)
    f = space.sample(lambda x, t: np.exp(-x * x - t * t))
    assert_allclose((2 * f + f).values, 3 * f.values)
