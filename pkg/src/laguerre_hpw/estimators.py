"""scikit-learn style wrappers around the transform and the HPW functionals.

Samples are functions on the space grid, passed as arrays of shape
``(n_samples, n_x, n_t)`` or flattened to ``(n_samples, n_x * n_t)``;
outputs keep the layout of the input.  ``fit`` only builds the grids, so it
ignores ``X`` apart from optional shape checks.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_exponent, check_positive, check_sample_stack
from .core import as_context
from .grids import SampledFunction, SpectralFunction, build_dual_grid, build_space_grid
from .transform import get_plan
from .uncertainty import hpw_ratio

__all__ = ["FourierLaguerreTransformer", "SubLaplacianMultiplier", "HpwRatioTransformer"]


class _GridEstimator(BaseEstimator, TransformerMixin):
    def __init__(self, alpha=0.0, x_max=8.0, t_max=16.0, n_x=256, n_t=512,
                 lambda_max=16.0, n_lambda=16, m_max=64):
        self.alpha = alpha
        self.x_max = x_max
        self.t_max = t_max
        self.n_x = n_x
        self.n_t = n_t
        self.lambda_max = lambda_max
        self.n_lambda = n_lambda
        self.m_max = m_max

    def fit(self, X=None, y=None):
        ctx = as_context(self.alpha)
        self.space_ = build_space_grid(ctx, x_max=self.x_max, t_max=self.t_max, n_x=self.n_x, n_t=self.n_t)
        self.dual_ = build_dual_grid(ctx, lambda_max=self.lambda_max, n_lambda=self.n_lambda, m_max=self.m_max)
        self.plan_ = get_plan(self.space_, self.dual_)
        if X is not None:
            check_sample_stack(X, self.space_.shape)
        return self

    def _space_stack(self, X):
        check_is_fitted(self, "plan_")
        return check_sample_stack(X, self.space_.shape)

    @staticmethod
    def _restore(stack, flat):
        return stack.reshape(stack.shape[0], -1) if flat else stack


class FourierLaguerreTransformer(_GridEstimator):
    """Forward transform on ``transform`` and the inverse on ``inverse_transform``.

    Spectral outputs have shape ``(n_samples, 2 n_mu, n_rows)`` in the
    layout of ``DualGrid`` (or flattened).
    """

    def transform(self, X):
        stack, flat = self._space_stack(X)
        return self._restore(self.plan_.forward_values(stack), flat)

    def inverse_transform(self, F):
        check_is_fitted(self, "plan_")
        stack, flat = check_sample_stack(F, self.dual_.shape, "F")
        out = np.stack([self.plan_.inverse_values(v) for v in stack])
        return self._restore(out, flat)


class SubLaplacianMultiplier(_GridEstimator):
    """``f -> inverse(|(lam, m)|**gamma_power * forward(f))``; ``gamma_power = 1``
    applies the sub-Laplacian itself."""

    def __init__(self, gamma_power=1.0, alpha=0.0, x_max=8.0, t_max=16.0, n_x=256, n_t=512,
                 lambda_max=16.0, n_lambda=16, m_max=64):
        super().__init__(alpha, x_max, t_max, n_x, n_t, lambda_max, n_lambda, m_max)
        self.gamma_power = gamma_power

    def transform(self, X):
        if not self.gamma_power >= 0:
            raise ValueError("gamma_power must be >= 0")
        stack, flat = self._space_stack(X)
        F = self.plan_.forward_values(stack) * self.dual_.norm_nodes ** self.gamma_power
        out = np.stack([self.plan_.inverse_values(v) for v in F])
        return self._restore(out, flat)


class HpwRatioTransformer(_GridEstimator):
    """Map each sample to ``[norm_p, wnorm_space, wnorm_dual, ratio]`` for the
    selected HPW inequality."""

    def __init__(self, p=2.0, a=1.0, b=1.0, theorem_id=None, alpha=0.0, x_max=8.0, t_max=16.0,
                 n_x=256, n_t=512, lambda_max=16.0, n_lambda=16, m_max=64):
        super().__init__(alpha, x_max, t_max, n_x, n_t, lambda_max, n_lambda, m_max)
        self.p = p
        self.a = a
        self.b = b
        self.theorem_id = theorem_id

    def transform(self, X):
        check_exponent(self.p, allow_inf=False)
        check_positive(self.a, "a")
        check_positive(self.b, "b")
        stack, _ = self._space_stack(X)
        F = self.plan_.forward_values(stack)
        out = np.empty((stack.shape[0], 4))
        for i, (v, Fv) in enumerate(zip(stack, F)):
            f = SampledFunction(self.space_, v)
            rec = hpw_ratio(f, self.p, self.a, self.b, self.dual_, theorem_id=self.theorem_id,
                            F=SpectralFunction(self.dual_, Fv))
            out[i] = rec.norm_p, rec.wnorm_space, rec.wnorm_dual, rec.ratio
        return out

