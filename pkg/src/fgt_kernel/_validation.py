"""Input checks shared by the public functions and estimator classes."""

import math

import numpy as np

from .exceptions import EmptySampleError, InvalidBandwidthError, InvalidParameterError


def as_sample_array(sample):
    """Return the income values of ``sample`` as a 1-D float array.

    Accepts an :class:`~fgt_kernel.distributions.IncomeSample`, any
    sequence, or an ``(n, 1)`` column as passed by scikit-learn tooling.
    """
    values = getattr(sample, "values", sample)
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise InvalidParameterError(f"sample must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptySampleError("sample is empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("sample contains non-finite values")
    if np.any(arr < 0):
        raise InvalidParameterError("incomes must be nonnegative")
    return arr


def check_bandwidth(h):
    try:
        h = float(h)
    except (TypeError, ValueError):
        raise InvalidBandwidthError(f"bandwidth must be a number, got {h!r}") from None
    if not (h > 0 and math.isfinite(h)):
        raise InvalidBandwidthError(f"bandwidth must be positive and finite, got {h!r}")
    return h


def check_positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidParameterError(f"{name} must be positive, got {value!r}")
    return value


def check_nonnegative(name, value):
    value = float(value)
    if not (value >= 0 and math.isfinite(value)):
        raise InvalidParameterError(f"{name} must be nonnegative, got {value!r}")
    return value


def vectorised(func):
    """Wrap ``func`` so its output always has the input's shape."""

    def wrapped(u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(np.asarray(func(u), dtype=float), u.shape)

    return wrapped
