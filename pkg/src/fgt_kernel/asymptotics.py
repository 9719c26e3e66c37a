"""Limiting variance and efficiency of the kernel FGT estimator."""

import warnings

from .exceptions import DegenerateCaseError, NegativeVarianceWarning

NEGATIVE_VARIANCE_WARNING = (
    "asymptotic variance formula is negative for these inputs; "
    "the value is returned unchanged"
)


def asymptotic_variance(kernel, p_z_alpha, p_z_2alpha):
    """``R(K) * P(z, 2 alpha) - P(z, alpha)**2`` with ``R(K) = integral K**2``.

    A negative result is returned as is, with a
    :class:`~fgt_kernel.exceptions.NegativeVarianceWarning`.
    """
    p1, p2 = float(p_z_alpha), float(p_z_2alpha)
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        warnings.warn("index values outside [0, 1]", UserWarning, stacklevel=2)
    if p2 > p1:
        warnings.warn("P(z, 2 alpha) exceeds P(z, alpha)", UserWarning, stacklevel=2)
    value = kernel.square_integral * p2 - p1 * p1
    if value < 0:
        warnings.warn(NEGATIVE_VARIANCE_WARNING, NegativeVarianceWarning, stacklevel=2)
    return value


def empirical_variance_limit(p_z_alpha, p_z_2alpha):
    """``n Var`` limit of the empirical estimator, ``P(z, 2a) - P(z, a)**2``."""
    return float(p_z_2alpha) - float(p_z_alpha) ** 2


def efficiency(kernel, p_z_alpha, p_z_2alpha, atol=1e-15):
    """Ratio of the kernel and empirical limiting variances.

    Raises
    ------
    DegenerateCaseError
        When ``P(z, 2 alpha) - P(z, alpha)**2`` is zero (within ``atol``).
    """
    p1, p2 = float(p_z_alpha), float(p_z_2alpha)
    denom = p2 - p1 * p1
    if abs(denom) <= atol:
        raise DegenerateCaseError(
            "P(z, 2 alpha) - P(z, alpha)^2 is zero; efficiency is undefined"
        )
    return (kernel.square_integral * p2 - p1 * p1) / denom
