"""scikit-learn compatible wrapper around the FGT estimators.

``FGTIndex`` is fitted on an income sample and predicts the index for an
array of poverty lines::

    est = FGTIndex(estimator="bias_reduced", alpha=1).fit(incomes)
    est.predict([0.1, 0.2, 0.3])

Hyperparameters follow the scikit-learn conventions (stored verbatim in
``__init__``, validated in ``fit``), so ``get_params``/``set_params``,
``clone`` and grid utilities work unchanged.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_sample_array
from .bandwidth import resolve_bandwidth
from .estimators import (
    ESTIMATORS,
    THEORY_WARNING,
    FgtEstimate,
    FgtParams,
    adaptive_terms,
    empirical_terms,
    fgt_from_adaptive_terms,
    fgt_from_grid,
    grid_cells,
    grid_means,
    local_bandwidth_factors,
)
from .exceptions import InvalidParameterError, TheoryRangeWarning
from .kernels import get_kernel
from .summation import compensated_mean


class FGTIndex(BaseEstimator):
    """FGT poverty index estimator.

    Parameters
    ----------
    estimator : {"empirical", "classical", "adaptive", "bias_reduced"}
    alpha : float
        Poverty aversion, ``alpha >= 0``.
    kernel : str
        Kernel name.
    bandwidth : {"nlogn", "lil"} or float
        Bandwidth rule, or a fixed bandwidth.
    sensitivity : float
        Exponent of the adaptive local factors, in ``[0, 1]``.

    Attributes
    ----------
    sample_ : ndarray
        Sorted training incomes.
    bandwidth_ : float or None
        Resolved bandwidth (``None`` for the empirical estimator).
    local_factors_ : LocalFactors or None
        Adaptive factors, aligned with ``sample_``.
    """

    def __init__(self, estimator="bias_reduced", alpha=0.0, kernel="gaussian",
                 bandwidth="nlogn", sensitivity=0.5):
        self.estimator = estimator
        self.alpha = alpha
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.sensitivity = sensitivity

    def fit(self, X, y=None):
        name = str(self.estimator).replace("-", "_")
        if name not in ESTIMATORS:
            raise InvalidParameterError(f"unknown estimator {self.estimator!r}")
        FgtParams(1.0, self.alpha)  # validates alpha
        self.estimator_id_ = name
        self.sample_ = np.sort(as_sample_array(X))
        self.n_features_in_ = 1
        self.kernel_ = get_kernel(self.kernel)
        self.local_factors_ = None
        self._cache = {}
        if name == "empirical":
            self.bandwidth_ = None
            return self
        if isinstance(self.bandwidth, str):
            self.bandwidth_ = resolve_bandwidth(self.bandwidth, self.sample_.size)
        else:
            self.bandwidth_ = resolve_bandwidth("fixed", self.sample_.size, self.bandwidth)
        if name == "adaptive":
            self.local_factors_ = local_bandwidth_factors(
                self.sample_, self.kernel_, self.bandwidth_, self.sensitivity
            )
        return self

    def _values(self, zs):
        name, h, a = self.estimator_id_, self.bandwidth_, float(self.alpha)
        if name == "empirical":
            return np.array([compensated_mean(empirical_terms(self.sample_, z, a)) for z in zs])
        z_max = float(np.max(zs))
        if name == "adaptive":
            terms = adaptive_terms(self.sample_, self.kernel_, h, self.local_factors_.lambdas, z_max)
            return np.array([fgt_from_adaptive_terms(terms, z, a) for z in zs])
        grid = self._cache.get("grid")
        if grid is None or grid_cells(z_max, h) >= grid.points.size:
            grid = self._cache["grid"] = grid_means(self.sample_, self.kernel_, h, z_max)
        mu2 = self.kernel_.second_moment if name == "bias_reduced" else 0.0
        return np.array([fgt_from_grid(grid, z, a, mu2)[0] for z in zs])

    def predict(self, z):
        """Estimated ``P(z, alpha)`` for each poverty line in ``z``."""
        check_is_fitted(self, "sample_")
        zs = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
        for zz in zs:
            FgtParams(zz, self.alpha)
        if self.estimator_id_ != "empirical" and not FgtParams(1.0, self.alpha).theory_covered:
            warnings.warn(THEORY_WARNING, TheoryRangeWarning, stacklevel=2)
        return self._values(zs)

    def estimate(self, z):
        """Single :class:`FgtEstimate` with diagnostics at poverty line ``z``."""
        check_is_fitted(self, "sample_")
        p = FgtParams(z, self.alpha)
        value = float(self._values(np.array([p.z]))[0])
        warn = []
        if self.estimator_id_ != "empirical":
            if not p.theory_covered:
                warn.append(THEORY_WARNING)
            if self.bandwidth_ > p.z:
                warn.append("degenerate grid: h > z, only cell i=0 is used")
        return FgtEstimate(
            value=value, estimator_id=self.estimator_id_, n=self.sample_.size, z=p.z,
            alpha=p.alpha, bandwidth=self.bandwidth_,
            grid_cells=None if self.bandwidth_ is None else grid_cells(p.z, self.bandwidth_),
            warnings=warn,
        )

    def transform(self, X):
        """Alias of :meth:`predict` so the estimator can sit at the end of a pipeline."""
        return self.predict(X)
