"""Compensated summation.

Estimator values are double sums with up to ``n * [z/h]`` terms, so plain
left-to-right accumulation loses digits the tests care about.  Two
routines are provided:

``compensated_sum``
    Vectorised pairwise reduction where every pairwise addition also
    records its exact rounding error (Knuth's TwoSum).  The collected
    errors are added back at the end, which gives a result close to the
    correctly rounded sum for any realistic input.

``neumaier_sum``
    Scalar running sum with the Kahan-Babuska-Neumaier correction, for
    small Python iterables.
"""

import math

import numpy as np


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``a + b = s + e`` exactly."""
    s = a + b
    bp = s - a
    e = (a - (s - bp)) + (b - bp)
    return s, e


def compensated_sum(values, axis=-1):
    """Sum ``values`` along ``axis`` with error-free pairwise reduction.

    Parameters
    ----------
    values : array_like
        Values to reduce.  Non-finite values propagate as in ``np.sum``.
    axis : int
        Axis to reduce.

    Returns
    -------
    float or ndarray
        Sum with the reduced axis removed.
    """
    a = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if a.shape[-1] == 0:
        out = np.zeros(a.shape[:-1])
        return float(out) if out.ndim == 0 else out

    with np.errstate(invalid="ignore", over="ignore"):
        plain, total = _pairwise(a)
    # inf/nan inputs make the error terms meaningless
    total = np.where(np.isfinite(plain), total, plain)
    return float(total) if total.ndim == 0 else total


def _pairwise(a):
    """Return the plain pairwise sum and the error-corrected one."""
    correction = np.zeros(a.shape[:-1])
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,))
            a = np.concatenate([a, pad], axis=-1)
        s, e = two_sum(a[..., 0::2], a[..., 1::2])
        correction = correction + np.where(np.isfinite(e), e, 0.0).sum(axis=-1)
        a = s
    return a[..., 0], a[..., 0] + correction


def neumaier_sum(iterable):
    total = 0.0
    c = 0.0
    for x in iterable:
        x = float(x)
        t = total + x
        if abs(total) >= abs(x):
            c += (total - t) + x
        else:
            c += (x - t) + total
        total = t
    if not math.isfinite(total):
        return total
    return total + c


def compensated_mean(values, axis=-1):
    a = np.asarray(values, dtype=float)
    n = a.shape[axis] if a.ndim else 1
    return compensated_sum(a, axis=axis) / n
