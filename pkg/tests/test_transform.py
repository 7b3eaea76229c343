import math
import warnings

import numpy as np
import pytest
from conftest import exact_row_mask
from numpy.testing import assert_allclose

from laguerre_hpw.catalog import get_entry
from laguerre_hpw.errors import TruncationWarning
from laguerre_hpw.grids import lp_norm_space
from laguerre_hpw.special import laguerre_function
from laguerre_hpw.transform import (TransformPlan, dilation_identity_defect, forward, get_plan,
                                    hausdorff_young_ratio, interpolate_dilated, inverse,
                                    l1_preservation_defect, plancherel_defect)


def pointwise_hat(f, lam, m):
    """Direct space-grid quadrature of f_hat at one (lam, m)."""
    g = f.grid
    X, T = g.mesh()
    kern = np.exp(-1j * lam * T) * laguerre_function(m, g.alpha, abs(lam) * X * X)
    return complex(g.integrate(f.values * kern))


def test_catalog_matches_closed_form(grids0, transformed0, catalog):
    _, dual = grids0
    mask = exact_row_mask(dual)
    for e in catalog:
        _, F = transformed0[e.id]
        exact = dual.sample(e.hat(0.0)).values
        err = np.max(np.abs(F.values - exact)[mask]) / np.max(np.abs(exact[mask]))
        assert err < 1e-10, e.id


def test_gaussian_pointwise_values(grids0):
    space, _ = grids0
    f = space.sample(lambda x, t: np.exp(-x * x / 2 - t * t / 2))
    assert_allclose(pointwise_hat(f, 1.0, 0).real, math.sqrt(2 / math.pi) * math.exp(-0.5) / 2, rtol=1e-12)
    assert_allclose(pointwise_hat(f, 1.0, 0).real, 0.24197, atol=5e-6)
    assert abs(pointwise_hat(f, 1.0, 1)) < 1e-14


@pytest.mark.parametrize("which", ["transformed0", "transformed1"])
def test_plancherel_catalog(which, request):
    for key, (f, F) in request.getfixturevalue(which).items():
        assert plancherel_defect(f, F.grid, F=F) < 1e-12, key


def test_hausdorff_young(grids0, transformed0):
    _, dual = grids0
    for key, (f, F) in transformed0.items():
        for p in (1.0, 1.25, 1.5, 2.0):
            assert hausdorff_young_ratio(f, p, dual, F=F) <= 1 + 1e-9, (key, p)


def test_hausdorff_young_equality_for_positive_functions(grids0, transformed0):
    # f >= 0 gives f_hat(0, m) = ||f||_1, the sup of |f_hat|
    _, dual = grids0
    f, F = transformed0["gaussian_b1_e1"]
    assert_allclose(hausdorff_young_ratio(f, 1.0, dual, F=F), 1.0, rtol=1e-9)


def test_roundtrip(grids0, transformed0):
    space, _ = grids0
    for key in ("gaussian_b1_e1", "shifted_bump_t2", "eigen_packet_l1_m2"):
        f, F = transformed0[key]
        back = inverse(F, space)
        err = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
        assert err < 1e-6, key


@pytest.mark.parametrize("r", [2**-0.5, 2**0.5])
def test_dilation_identity_exact_sampling(grids0, transformed0, r):
    space, dual = grids0
    for e in map(get_entry, ("gaussian_b0.5_e0.5", "polygauss_x2", "eigen_packet_l1_m2")):
        _, F = transformed0[e.id]
        d, _ = dilation_identity_defect((e.function(0.0), space), r, dual, F=F)
        assert d < 1e-5, e.id


def test_dilation_identity_interpolated(small0):
    space, dual = small0
    f = get_entry("gaussian_b2_e2").sample(space)
    d, l1 = dilation_identity_defect(f, 2**-0.5, dual)
    assert d < 1e-5
    assert l1 < 1e-8
    assert dilation_identity_defect(f, 1.0, dual) == (0.0, 0.0)


def test_interpolate_dilated_identity(small0):
    space, dual = small0
    F = forward(get_entry("gaussian_b1_e1").sample(space), dual)
    vals, ok = interpolate_dilated(F, 1.0)
    assert_allclose(vals[ok], F.values[ok], rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_l1_preservation(alpha, catalog):
    for e in catalog:
        for r in (2**-0.5, 2**0.5):
            assert l1_preservation_defect(e.function(alpha), r, alpha) < 1e-8, (e.id, r)


def test_plan_cache_and_alpha_mismatch(small0, grids1):
    space, dual = small0
    assert get_plan(space, dual) is get_plan(space, dual)
    with pytest.raises(ValueError):
        TransformPlan(space, grids1[1])
    with pytest.raises(ValueError):
        forward(space.sample(lambda x, t: np.exp(-x * x - t * t)), dual, ctx=1.0)


def test_inverse_warns_on_spectral_truncation(small0):
    space, dual = small0
    flat = dual.sample_norm(lambda mu: np.ones_like(mu))
    with pytest.warns(TruncationWarning):
        inverse(flat, space)
    F = forward(get_entry("gaussian_b1_e1").sample(space), dual)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        inverse(F, space)


def test_forward_is_linear(small0, rng):
    space, dual = small0
    f = get_entry("gaussian_b1_e1").sample(space)
    g = get_entry("modulated_l1").sample(space)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    lhs = forward(a * f + b * g, dual).values
    rhs = a * forward(f, dual).values + b * forward(g, dual).values
    assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)
    assert lp_norm_space(f, 2) > 0
