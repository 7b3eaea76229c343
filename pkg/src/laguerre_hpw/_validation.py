"""Small argument checks shared by the public functions."""

import numbers

import numpy as np

from .errors import HypothesisError


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_exponent(p, name="p", allow_inf=True):
    """Lebesgue exponent in [1, inf]."""
    p = float(p)
    if np.isnan(p) or p < 1 or (np.isinf(p) and not allow_inf):
        raise ValueError(f"{name} must lie in [1, inf{']' if allow_inf else ')'}, got {p}")
    return p


def conjugate_exponent(p):
    p = check_exponent(p)
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1)


def check_complex_array(values, shape, name="values"):
    """Return ``values`` as a complex array with the expected shape."""
    arr = np.asarray(values)
    if arr.dtype.kind not in "biufc":
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex, copy=False)
    if arr.shape != tuple(shape):
        raise ValueError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def require(condition, message):
    if not condition:
        raise HypothesisError(message)


def check_sample_stack(X, shape, name="X"):
    """Return a ``(n_samples, *shape)`` complex stack and whether ``X`` was flat.

    Accepted layouts are ``(n_samples, *shape)`` and, sklearn-style,
    ``(n_samples, prod(shape))``.
    """
    arr = np.asarray(X)
    size = int(np.prod(shape))
    if arr.ndim == 2 and arr.shape[1] == size:
        flat = True
        arr = arr.reshape(arr.shape[0], *shape)
    elif arr.ndim == 1 + len(shape) and arr.shape[1:] == tuple(shape):
        flat = False
    else:
        raise ValueError(f"{name} has shape {arr.shape}; expected (n_samples, {size}) "
                         f"or (n_samples, {', '.join(map(str, shape))})")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} holds no samples")
    stack = np.stack([check_complex_array(a, shape, name) for a in arr])
    return stack, flat
