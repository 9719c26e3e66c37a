"""Income distributions, seeded sampling and the exact FGT index."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import as_sample_array, check_nonnegative
from .exceptions import InvalidParameterError
from .quadrature import integrate

#: Recorded in simulation reports so samples can be regenerated elsewhere.
GENERATOR_ID = "numpy.random.Philox(SeedSequence(seed)).random -> inverse_cdf"
SEED_SCHEME_ID = "SeedSequence([base_seed, replication]).generate_state(1, uint64)[0]"


@dataclass(frozen=True)
class IncomeSample:
    """Validated nonnegative income observations."""

    values: np.ndarray

    def __post_init__(self):
        arr = as_sample_array(self.values)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    @property
    def n(self):
        return self.values.size

    def shifted(self, c):
        return IncomeSample(self.values + c)


@dataclass(frozen=True)
class IncomeDistribution:
    name: str
    pdf: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    inverse_cdf: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]
    params: dict
    mean: float | None = None
    variance: float | None = None

    def describe(self):
        return {"name": self.name, **self.params, "support": list(self.support)}


def truncated_pareto(x0=0.02, beta=0.2, upper=1.0):
    """Pareto(scale ``x0``, shape ``beta``) truncated and renormalised to ``[x0, upper]``.

    ``cdf(x) = (1 - (x0/x)**beta) / (1 - (x0/upper)**beta)``.
    """
    x0, beta, upper = float(x0), float(beta), float(upper)
    if not (0 < x0 < upper and math.isfinite(upper)):
        raise InvalidParameterError(f"need 0 < x0 < upper, got x0={x0}, upper={upper}")
    if not (beta > 0 and math.isfinite(beta)):
        raise InvalidParameterError(f"beta must be positive, got {beta}")

    mass = -math.expm1(beta * math.log(x0 / upper))  # 1 - (x0/upper)**beta

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= x0) & (x <= upper)
        safe = np.where(inside, x, x0)
        return np.where(inside, beta * x0 ** beta * safe ** (-beta - 1.0) / mass, 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        safe = np.clip(x, x0, upper)
        val = -np.expm1(beta * np.log(x0 / safe)) / mass
        return np.where(x <= x0, 0.0, np.where(x >= upper, 1.0, val))

    def inverse_cdf(p):
        p = np.asarray(p, dtype=float)
        # (x0/x)**beta = 1 - p*mass
        return np.clip(x0 * np.exp(-np.log1p(-p * mass) / beta), x0, upper)

    if beta == 1.0:
        m1 = x0 * math.log(upper / x0) / mass
    else:
        m1 = beta * x0 ** beta * (upper ** (1 - beta) - x0 ** (1 - beta)) / ((1 - beta) * mass)
    if beta == 2.0:
        m2 = 2 * x0 ** 2 * math.log(upper / x0) / mass
    else:
        m2 = beta * x0 ** beta * (upper ** (2 - beta) - x0 ** (2 - beta)) / ((2 - beta) * mass)

    return IncomeDistribution(
        name="pareto",
        pdf=pdf,
        cdf=cdf,
        inverse_cdf=inverse_cdf,
        support=(x0, upper),
        params={"x0": x0, "beta": beta, "upper": upper, "construction": "truncated"},
        mean=m1,
        variance=m2 - m1 * m1,
    )


def uniform_01():
    def pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 0) & (x <= 1), 1.0, 0.0)

    def cdf(x):
        return np.clip(np.asarray(x, dtype=float), 0.0, 1.0)

    def inverse_cdf(p):
        return np.clip(np.asarray(p, dtype=float), 0.0, 1.0)

    return IncomeDistribution(
        name="uniform", pdf=pdf, cdf=cdf, inverse_cdf=inverse_cdf,
        support=(0.0, 1.0), params={}, mean=0.5, variance=1.0 / 12.0,
    )


def make_distribution(name, **params):
    """Build a distribution from its CLI/config name."""
    name = str(name).lower()
    if name == "uniform":
        return uniform_01()
    if name in ("pareto", "truncated_pareto"):
        keys = {k: params[k] for k in ("x0", "beta", "upper") if params.get(k) is not None}
        return truncated_pareto(**keys)
    raise InvalidParameterError(f"unknown distribution {name!r}; use 'pareto' or 'uniform'")


def derive_seed(base_seed, replication):
    """Deterministic per-replication seed, independent of execution order."""
    ss = np.random.SeedSequence([int(base_seed), int(replication)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def draw_sample(dist, n, seed):
    """Draw ``n`` incomes by inverse-cdf sampling from a Philox stream."""
    n = int(n)
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    u = rng.random(n)
    return IncomeSample(dist.inverse_cdf(u))


def fgt_integrand(dist, z, alpha):
    """Vectorised ``x -> ((z - x)/z)**alpha * f(x)`` on ``[0, z]``."""

    def func(x):
        base = np.clip((z - x) / z, 0.0, 1.0)
        return base ** alpha * dist.pdf(x)

    return func


def true_fgt(dist, z, alpha, tol=1e-10):
    """Exact index ``P(z, alpha)`` by adaptive quadrature of the density.

    Returns 0 for ``z <= 0``.  With ``alpha == 0`` the value is ``F(z)``.

    Raises
    ------
    NumericalFailureError
        If the quadrature cannot meet ``tol``; the exception carries the
        best estimate.
    """
    alpha = check_nonnegative("alpha", alpha)
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    z = float(z)
    if z <= 0:
        return 0.0
    lo, hi = dist.support
    upper = min(z, hi)
    if upper <= max(lo, 0.0):
        return 0.0
    breakpoints = [p for p in (lo, hi) if 0 < p < z]
    value, _ = integrate(fgt_integrand(dist, z, alpha), 0.0, z, tol=tol, breakpoints=breakpoints)
    return value
