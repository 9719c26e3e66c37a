"""Bandwidth rules tied to sample size."""

import math

from .exceptions import InvalidParameterError


def default_bandwidth(n):
    """``h = (n ln n) ** -1/2``, the rule used for the reference simulation."""
    n = int(n)
    if n < 2:
        raise InvalidParameterError("default_bandwidth needs n >= 2")
    return (n * math.log(n)) ** -0.5


def lil_bandwidth(n):
    """``h = (ln ln n / n) ** 1/4``, the law-of-iterated-logarithm rate."""
    n = int(n)
    if n < 3:
        raise InvalidParameterError("lil_bandwidth needs n >= 3")
    return (math.log(math.log(n)) / n) ** 0.25


BANDWIDTH_RULES = {"nlogn": default_bandwidth, "lil": lil_bandwidth}


def resolve_bandwidth(rule, n, fixed=None):
    """Bandwidth for ``rule`` in {"nlogn", "lil", "fixed"}."""
    if rule == "fixed":
        if fixed is None or not fixed > 0:
            raise InvalidParameterError("fixed bandwidth rule needs a positive value")
        return float(fixed)
    try:
        return BANDWIDTH_RULES[rule](n)
    except KeyError:
        raise InvalidParameterError(
            f"unknown bandwidth rule {rule!r}; use nlogn, lil or fixed"
        ) from None


def consistency_regime(n, h):
    """Value of ``n h**2 / ln ln n``.

    The almost-sure consistency results need this to grow without bound.
    Under the ``nlogn`` rule it equals ``1 / (ln n ln ln n)`` and shrinks,
    so callers report the regime as not met.
    """
    n = int(n)
    if n < 3:
        raise InvalidParameterError("needs n >= 3")
    return n * h * h / math.log(math.log(n))


def regime_note(rule, n, h):
    if n < 3:
        return None
    if rule == "nlogn":
        return (
            f"n*h^2/loglog(n) = {consistency_regime(n, h):.4g}: the nlogn rule does not "
            "satisfy the n*h^2/loglog(n) -> inf condition of the a.s. consistency results"
        )
    return None
