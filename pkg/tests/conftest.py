import numpy as np
import pytest

from laguerre_hpw.catalog import default_catalog
from laguerre_hpw.grids import SpectralFunction, build_dual_grid, build_space_grid
from laguerre_hpw.transform import get_plan


@pytest.fixture(scope="session")
def grids0():
    return build_space_grid(0.0), build_dual_grid(0.0)


@pytest.fixture(scope="session")
def grids1():
    return build_space_grid(1.0), build_dual_grid(1.0)


@pytest.fixture(scope="session")
def small0():
    """Coarse grids for tests that only need a few digits."""
    return build_space_grid(0.0, n_x=128, n_t=256), build_dual_grid(0.0, m_max=32)


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def transform_catalog(space, dual, catalog):
    """``{entry id: (f, F)}`` with one batched forward transform."""
    fs = [e.sample(space) for e in catalog]
    FF = get_plan(space, dual).forward_values(np.stack([f.values for f in fs]))
    return {e.id: (f, SpectralFunction(dual, Fv)) for e, f, Fv in zip(catalog, fs, FF)}


@pytest.fixture(scope="session")
def transformed0(grids0, catalog):
    return transform_catalog(*grids0, catalog)


@pytest.fixture(scope="session")
def transformed1(grids1, catalog):
    return transform_catalog(*grids1, catalog)


def exact_row_mask(dual):
    mask = dual.full_active.copy()
    mask[:, dual.n_exact:] = False
    return mask


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
