"""FGT poverty index estimators.

Four estimators of ``P(z, alpha) = E[((z - X)/z)_+ ** alpha]`` are provided:

* ``empirical_fgt``: the plug-in sample mean.
* ``classical_kernel_fgt``: Riemann grid sum of the Parzen-Rosenblatt
  density over cells ``[ih, (i+1)h)``, ``i = 0..[z/h]``.
* ``adaptive_kernel_fgt``: the same with a per-observation bandwidth
  ``h * lambda_j`` and a per-observation grid.
* ``bias_reduced_fgt``: grid sum of the bias-corrected density, i.e. each
  kernel term ``K(u)`` becomes ``K(u) - h**2/2 * mu2 * K''(u)``.

The kernel estimators first average ``K`` and ``K''`` over the sample at
every grid point and then take a compensated weighted sum over the grid.
This is the defining double sum with the summation order exchanged, and it
lets many poverty lines share one pass over the data.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_sample_array, check_bandwidth, check_nonnegative
from .exceptions import InvalidParameterError, NumericalFailureError, TheoryRangeWarning
from .kernels import bias_corrected_density, classical_density
from .quadrature import integrate
from .summation import compensated_mean, compensated_sum

ESTIMATORS = ("empirical", "classical", "adaptive", "bias_reduced")
THEORY_WARNING = "alpha outside α=0 or α≥1 theory"
DEGENERATE_GRID_WARNING = "degenerate grid: h > z, only cell i=0 is used"

# Grid floors closer than this (relative) to the next integer are rounded up.
FLOOR_GUARD = 1e-12


@dataclass(frozen=True)
class FgtParams:
    """Poverty line ``z > 0`` and aversion ``alpha >= 0``."""

    z: float
    alpha: float

    def __post_init__(self):
        try:
            z = float(self.z)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"z must be a number, got {self.z!r}") from None
        if not (z > 0 and math.isfinite(z)):
            raise InvalidParameterError(f"poverty line z must be positive, got {self.z!r}")
        alpha = check_nonnegative("alpha", self.alpha)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "alpha", alpha)

    @property
    def theory_covered(self):
        return self.alpha == 0 or self.alpha >= 1


@dataclass
class FgtEstimate:
    value: float
    estimator_id: str
    n: int
    z: float
    alpha: float
    bandwidth: float | None = None
    grid_cells: int | None = None
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        d = {
            "estimator": self.estimator_id,
            "value": self.value,
            "z": self.z,
            "alpha": self.alpha,
            "n": self.n,
            "bandwidth": self.bandwidth,
            "grid_cells": self.grid_cells,
            "warnings": list(self.warnings),
        }
        if self.details:
            d["details"] = dict(self.details)
        return d


@dataclass
class LocalFactors:
    """Per-observation bandwidth multipliers with geometric mean one."""

    lambdas: np.ndarray
    pilot_bandwidth: float
    sensitivity: float

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.ndim != 1 or not np.all(lam > 0) or not np.all(np.isfinite(lam)):
            raise InvalidParameterError("local factors must be positive and finite")
        self.lambdas = lam

    @classmethod
    def unit(cls, n):
        return cls(np.ones(int(n)), pilot_bandwidth=math.nan, sensitivity=0.0)

    @property
    def geometric_mean(self):
        return math.exp(compensated_mean(np.log(self.lambdas)))


def _params(params, z=None, alpha=None):
    if params is None:
        return FgtParams(z, alpha)
    if isinstance(params, FgtParams):
        return params
    return FgtParams(*params)


def grid_cells(z, h):
    """Integer part of ``z / h`` with a guard against round-off just below an integer."""
    q = np.asarray(z, dtype=float) / np.asarray(h, dtype=float)
    m = np.floor(q)
    near = (m + 1.0) - q <= FLOOR_GUARD * np.maximum(1.0, q)
    m = np.where(near, m + 1.0, m).astype(np.int64)
    return int(m) if m.ndim == 0 else m


def grid_weights(z, alpha, points):
    """``((z - t)/z) ** alpha`` at grid points ``t <= z``; bases clipped at 0."""
    base = np.maximum((z - np.asarray(points, dtype=float)) / z, 0.0)
    return base ** alpha


def _kernel_warnings(p, h=None):
    out = []
    if not p.theory_covered:
        out.append(THEORY_WARNING)
    if h is not None and h > p.z:
        out.append(DEGENERATE_GRID_WARNING)
    for msg in out:
        warnings.warn(msg, TheoryRangeWarning if msg == THEORY_WARNING else UserWarning,
                      stacklevel=3)
    return out


# --------------------------------------------------------------------------
# empirical


def empirical_terms(values, z, alpha):
    """Per-observation ``(1 - X/z)_+ ** alpha`` with the headcount rule at ``alpha = 0``."""
    values = np.asarray(values, dtype=float)
    if alpha == 0:
        return (values < z).astype(float)
    return np.maximum(1.0 - values / z, 0.0) ** alpha


def empirical_fgt(sample, params=None, *, z=None, alpha=None):
    """Plug-in estimate ``1/n sum (1 - X_i/z)_+ ** alpha``.

    ``alpha = 0`` counts incomes strictly below ``z`` (headcount ratio).
    """
    values = as_sample_array(sample)
    p = _params(params, z, alpha)
    value = compensated_mean(empirical_terms(values, p.z, p.alpha))
    return FgtEstimate(value=value, estimator_id="empirical", n=values.size, z=p.z, alpha=p.alpha)


# --------------------------------------------------------------------------
# fixed-bandwidth grid engine


def exact_zero_radius(kernel, limit=1e4):
    """Smallest tested radius beyond which ``K`` and ``K''`` evaluate to exactly 0.

    Pruning observations farther than this from a grid point drops only
    exact zeros, so results do not depend on it.  Returns ``inf`` when the
    kernel never underflows within ``limit``.
    """
    r = max(float(kernel.effective_support_radius), 1.0)
    while r <= limit:
        probe = np.array([r, -r, 2 * r, -2 * r, 4 * r, -4 * r])
        if not np.any(kernel.eval(probe)) and not np.any(kernel.eval_second_derivative(probe)):
            return r
        r *= 2
    return math.inf


@dataclass
class GridMeans:
    """Sample means of ``K`` and ``K''`` at the grid points ``i * h``."""

    h: float
    points: np.ndarray
    mean_k: np.ndarray
    mean_kdd: np.ndarray
    n: int

    def corrected(self, mu2):
        return self.mean_k - (self.h * self.h / 2.0) * mu2 * self.mean_kdd


_ROWS = 8192
_COLS = 512


def grid_means(sample, kernel, h, z_max):
    """Average ``K((ih - X_j)/h)`` and ``K''`` over ``j`` for ``i = 0..[z_max/h]``."""
    values = np.sort(as_sample_array(sample))
    h = check_bandwidth(h)
    m = grid_cells(z_max, h)
    points = np.arange(m + 1) * h
    n = values.size
    cutoff = exact_zero_radius(kernel) * h

    sum_k = np.zeros(m + 1)
    sum_kdd = np.zeros(m + 1)
    for c0 in range(0, m + 1, _COLS):
        t = points[c0:c0 + _COLS]
        if math.isfinite(cutoff):
            lo = np.searchsorted(values, t[0] - cutoff, side="left")
            hi = np.searchsorted(values, t[-1] + cutoff, side="right")
        else:
            lo, hi = 0, n
        parts_k, parts_kdd = [], []
        for r0 in range(lo, hi, _ROWS):
            x = values[r0:min(r0 + _ROWS, hi)]
            u = (t[None, :] - x[:, None]) / h
            parts_k.append(compensated_sum(kernel.eval(u), axis=0))
            parts_kdd.append(compensated_sum(kernel.eval_second_derivative(u), axis=0))
        if parts_k:
            sum_k[c0:c0 + t.size] = compensated_sum(np.stack(parts_k), axis=0)
            sum_kdd[c0:c0 + t.size] = compensated_sum(np.stack(parts_kdd), axis=0)
    return GridMeans(h=h, points=points, mean_k=sum_k / n, mean_kdd=sum_kdd / n, n=n)


def fgt_from_grid(grid, z, alpha, mu2=0.0):
    """Grid-sum estimate for one ``(z, alpha)``; ``mu2=0`` gives the classical value."""
    m = grid_cells(z, grid.h)
    if m >= grid.points.size:
        raise InvalidParameterError("grid was built for a smaller poverty line")
    w = grid_weights(z, alpha, grid.points[:m + 1])
    terms = grid.mean_k[:m + 1] if mu2 == 0 else grid.corrected(mu2)[:m + 1]
    return compensated_sum(w * terms), m


def _grid_estimate(sample, kernel, h, params, z, alpha, mu2, estimator_id):
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)
    warn = _kernel_warnings(p, h)
    grid = grid_means(values, kernel, h, p.z)
    value, m = fgt_from_grid(grid, p.z, p.alpha, mu2)
    return FgtEstimate(
        value=value, estimator_id=estimator_id, n=values.size, z=p.z, alpha=p.alpha,
        bandwidth=h, grid_cells=m, warnings=warn,
    )


def classical_kernel_fgt(sample, kernel, h, params=None, *, z=None, alpha=None):
    """Classical kernel estimate ``1/n sum_j sum_{i=0}^{[z/h]} ((z-ih)/z)^alpha K((ih-X_j)/h)``."""
    return _grid_estimate(sample, kernel, h, params, z, alpha, 0.0, "classical")


def bias_reduced_fgt(sample, kernel, h, params=None, *, z=None, alpha=None):
    """Bias-reduced kernel estimate.

    Same grid sum as :func:`classical_kernel_fgt` with every kernel term
    replaced by ``K(u) - h**2/2 * mu2 * K''(u)``, ``mu2`` being the
    kernel's second moment.
    """
    return _grid_estimate(
        sample, kernel, h, params, z, alpha, kernel.second_moment, "bias_reduced"
    )


def riemann_sum_fgt(sample, kernel, h, params=None, *, z=None, alpha=None):
    """Riemann sum of the bias-corrected density over ``[0, z]``.

    Full cells ``i < [z/h]`` get weight one and the last, partial cell gets
    weight ``(z - h[z/h]) / h``.  Equals ``bias_reduced_fgt + remainder_term``.
    """
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)
    grid = grid_means(values, kernel, h, p.z)
    m = grid_cells(p.z, h)
    terms = grid.corrected(kernel.second_moment)[:m + 1]
    w = grid_weights(p.z, p.alpha, grid.points[:m + 1])
    cell = np.ones(m + 1)
    cell[m] = (p.z - h * m) / h
    return compensated_sum(cell * w * terms)


def remainder_term(sample, kernel, h, params=None, *, z=None, alpha=None):
    """Boundary-cell remainder ``V`` such that the Riemann sum equals estimate + ``V``.

    ``V = 1/n sum_j ((z - h m) - h)/h * (1 - h m/z)**alpha * [K(u_j) - h**2/2 mu2 K''(u_j)]``
    with ``m = [z/h]`` and ``u_j = (m h - X_j)/h``.
    """
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)
    m = grid_cells(p.z, h)
    t = m * h
    u = (t - values) / h
    boundary = compensated_mean(
        kernel.eval(u) - (h * h / 2.0) * kernel.second_moment * kernel.eval_second_derivative(u)
    )
    prefactor = ((p.z - t) - h) / h
    return prefactor * float(grid_weights(p.z, p.alpha, t)) * boundary


def integral_form_fgt(sample, kernel, h, params=None, *, z=None, alpha=None, tol=1e-10):
    """``integral_0^z ((z-x)/z)**alpha * f_tilde(x) dx`` by adaptive quadrature.

    ``f_tilde`` is :func:`~fgt_kernel.kernels.bias_corrected_density`.
    This is the quantity the grid estimators discretise.
    """
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")

    def integrand(x):
        return grid_weights(p.z, p.alpha, x) * bias_corrected_density(values, kernel, h, x)

    # panels no wider than h so every kernel bump is resolved from the start
    cells = min(grid_cells(p.z, h), 100_000)
    breaks = np.linspace(0.0, p.z, cells + 2)[1:-1] if cells else ()
    value, _ = integrate(integrand, 0.0, p.z, tol=tol, breakpoints=breaks)
    return value


def classical_integral_fgt(sample, kernel, h, params=None, *, z=None, alpha=None, tol=1e-10):
    """Integral of the weighted classical density over ``[0, z]``."""
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)

    def integrand(x):
        return grid_weights(p.z, p.alpha, x) * classical_density(values, kernel, h, x)

    cells = min(grid_cells(p.z, h), 100_000)
    breaks = np.linspace(0.0, p.z, cells + 2)[1:-1] if cells else ()
    value, _ = integrate(integrand, 0.0, p.z, tol=tol, breakpoints=breaks)
    return value


# --------------------------------------------------------------------------
# adaptive


def local_bandwidth_factors(sample, kernel, pilot_h, sensitivity=0.5):
    """Silverman-style local factors ``lambda_j = (f_hat(X_j) / g) ** -sensitivity``.

    ``f_hat`` is the classical pilot density with bandwidth ``pilot_h``,
    floored at 1e-12, and ``g`` its geometric mean over the sample, so the
    factors have geometric mean one.  Sparse regions get ``lambda > 1``.
    """
    values = as_sample_array(sample)
    pilot_h = check_bandwidth(pilot_h)
    sensitivity = float(sensitivity)
    if not 0.0 <= sensitivity <= 1.0:
        raise InvalidParameterError(f"sensitivity must be in [0, 1], got {sensitivity}")
    if sensitivity == 0.0:
        return LocalFactors(np.ones(values.size), pilot_h, sensitivity)
    pilot = np.maximum(classical_density(values, kernel, pilot_h, values), 1e-12)
    log_pilot = np.log(pilot)
    log_g = compensated_mean(log_pilot)
    lambdas = np.exp(-sensitivity * (log_pilot - log_g))
    return LocalFactors(lambdas, pilot_h, sensitivity)


@dataclass
class AdaptiveTerms:
    """Flattened non-zero kernel terms of the per-observation grids."""

    h: float
    obs: np.ndarray        # observation index of each term
    step: np.ndarray       # h * lambda_j of each term
    index: np.ndarray      # grid index i of each term
    kernel_values: np.ndarray
    n: int


def adaptive_terms(values, kernel, h, lambdas, z_max):
    values = np.asarray(values, dtype=float)
    step = h * lambdas
    m = np.atleast_1d(grid_cells(z_max, step))
    radius = exact_zero_radius(kernel)
    centre = values / step
    if math.isfinite(radius):
        lo = np.maximum(np.ceil(centre - radius), 0).astype(np.int64)
        hi = np.minimum(np.floor(centre + radius).astype(np.int64), m)
    else:
        lo = np.zeros(values.size, dtype=np.int64)
        hi = m
    counts = np.maximum(hi - lo + 1, 0)
    obs = np.repeat(np.arange(values.size), counts)
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    index = lo[obs] + (np.arange(obs.size) - offsets[obs])
    s = step[obs]
    u = (index * s - values[obs]) / s
    return AdaptiveTerms(h, obs, s, index, kernel.eval(u), values.size)


def fgt_from_adaptive_terms(terms, z, alpha):
    m_obs = grid_cells(z, terms.step)
    keep = terms.index <= m_obs
    w = grid_weights(z, alpha, terms.index[keep] * terms.step[keep])
    return compensated_sum(w * terms.kernel_values[keep]) / terms.n


def adaptive_kernel_fgt(sample, kernel, h, factors, params=None, *, z=None, alpha=None):
    """Adaptive kernel estimate with per-observation bandwidth ``h * lambda_j``.

    Observation ``j`` is summed over its own grid ``i * h * lambda_j``,
    ``i = 0..[z / (h lambda_j)]``.
    """
    values = as_sample_array(sample)
    h = check_bandwidth(h)
    p = _params(params, z, alpha)
    lambdas = factors.lambdas if isinstance(factors, LocalFactors) else np.asarray(factors, float)
    if lambdas.shape != values.shape:
        raise InvalidParameterError(
            f"got {lambdas.size} local factors for a sample of size {values.size}"
        )
    warn = _kernel_warnings(p, h)
    terms = adaptive_terms(values, kernel, h, lambdas, p.z)
    value = fgt_from_adaptive_terms(terms, p.z, p.alpha)
    details = {}
    if isinstance(factors, LocalFactors):
        details = {"sensitivity": factors.sensitivity, "pilot_bandwidth": factors.pilot_bandwidth}
    return FgtEstimate(
        value=value, estimator_id="adaptive", n=values.size, z=p.z, alpha=p.alpha,
        bandwidth=h, grid_cells=grid_cells(p.z, h), warnings=warn, details=details,
    )


__all__ = [
    "ESTIMATORS",
    "FgtEstimate",
    "FgtParams",
    "LocalFactors",
    "NumericalFailureError",
    "adaptive_kernel_fgt",
    "bias_reduced_fgt",
    "classical_integral_fgt",
    "classical_kernel_fgt",
    "empirical_fgt",
    "grid_cells",
    "grid_means",
    "integral_form_fgt",
    "local_bandwidth_factors",
    "remainder_term",
    "riemann_sum_fgt",
]
