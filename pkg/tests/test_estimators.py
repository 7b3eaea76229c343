import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from laguerre_hpw.catalog import get_entry
from laguerre_hpw.estimators import FourierLaguerreTransformer, HpwRatioTransformer, SubLaplacianMultiplier
from laguerre_hpw.grids import SampledFunction, SpectralFunction, lp_norm_dual, lp_norm_space
from laguerre_hpw.operators import sublaplacian_spectral
from laguerre_hpw.uncertainty import hpw_ratio

GRID = dict(n_x=128, n_t=256, m_max=32)
IDS = ("gaussian_b1_e1", "modulated_l1")


@pytest.fixture(scope="module")
def fitted():
    return FourierLaguerreTransformer(**GRID).fit()


@pytest.fixture(scope="module")
def X(fitted):
    return np.stack([get_entry(i).sample(fitted.space_).values for i in IDS])


def test_params_and_clone():
    est = HpwRatioTransformer(p=1.5, a=2.0, **GRID)
    params = est.get_params()
    assert params["p"] == 1.5 and params["a"] == 2.0 and params["n_x"] == 128
    twin = clone(est)
    assert twin.get_params() == params and not hasattr(twin, "plan_")
    assert est.set_params(b=3.0).b == 3.0


def test_not_fitted():
    with pytest.raises(NotFittedError):
        FourierLaguerreTransformer(**GRID).transform(np.zeros((1, 128, 256)))


def test_roundtrip(fitted, X):
    F = fitted.transform(X)
    assert F.shape == (2, *fitted.dual_.shape)
    back = fitted.inverse_transform(F)
    np.testing.assert_allclose(back.real, X.real, atol=1e-6 * np.max(np.abs(X)))
    for f, Fv in zip(X, F):
        l2 = lp_norm_space(SampledFunction(fitted.space_, f), 2)
        np.testing.assert_allclose(lp_norm_dual(SpectralFunction(fitted.dual_, Fv), 2), l2, rtol=1e-10)


def test_flat_layout(fitted, X):
    flat = X.reshape(2, -1)
    F = fitted.transform(flat)
    assert F.shape == (2, int(np.prod(fitted.dual_.shape)))
    np.testing.assert_array_equal(F, fitted.transform(X).reshape(2, -1))
    assert fitted.inverse_transform(F).shape == flat.shape


@pytest.mark.parametrize("bad", [np.zeros((1, 10, 10)), np.zeros((1, 7)), np.zeros((0, 128, 256)),
                                 np.full((1, 128, 256), np.nan)])
def test_shape_errors(fitted, bad):
    with pytest.raises(ValueError):
        fitted.transform(bad)


def test_fit_checks_shape():
    with pytest.raises(ValueError):
        FourierLaguerreTransformer(**GRID).fit(np.zeros((1, 3, 3)))


def test_sublaplacian_multiplier(fitted, X):
    est = SubLaplacianMultiplier(**GRID).fit()
    out = est.transform(X[:1])
    ref = sublaplacian_spectral(SampledFunction(fitted.space_, X[0]), 1, fitted.dual_)
    np.testing.assert_allclose(out[0], ref.values, atol=1e-10)
    np.testing.assert_allclose(SubLaplacianMultiplier(gamma_power=0, **GRID).fit().transform(X).real, X.real,
                               atol=1e-6)
    with pytest.raises(ValueError):
        SubLaplacianMultiplier(gamma_power=-1, **GRID).fit().transform(X)


def test_hpw_ratio_transformer(fitted, X):
    est = HpwRatioTransformer(p=1.5, a=1.0, b=2.0, **GRID).fit()
    out = est.transform(X)
    assert out.shape == (2, 4)
    rec = hpw_ratio(SampledFunction(fitted.space_, X[1]), 1.5, 1.0, 2.0, fitted.dual_)
    np.testing.assert_allclose(out[1], [rec.norm_p, rec.wnorm_space, rec.wnorm_dual, rec.ratio], rtol=1e-12)
    with pytest.raises(ValueError):
        HpwRatioTransformer(p=0.5, **GRID).fit().transform(X)
