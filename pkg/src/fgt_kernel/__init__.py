"""Kernel estimators of the Foster-Greer-Thorbecke poverty index."""

__version__ = "0.1.0"

from .api import FGTIndex  # noqa: E402
from .asymptotics import asymptotic_variance, efficiency  # noqa: E402
from .bandwidth import default_bandwidth, lil_bandwidth  # noqa: E402
from .distributions import (  # noqa: E402
    IncomeDistribution,
    IncomeSample,
    derive_seed,
    draw_sample,
    make_distribution,
    true_fgt,
    truncated_pareto,
    uniform_01,
)
from .estimators import (  # noqa: E402
    FgtEstimate,
    FgtParams,
    LocalFactors,
    adaptive_kernel_fgt,
    bias_reduced_fgt,
    classical_kernel_fgt,
    empirical_fgt,
    integral_form_fgt,
    local_bandwidth_factors,
    remainder_term,
    riemann_sum_fgt,
)
from .kernels import (  # noqa: E402
    Kernel,
    bias_corrected_density,
    classical_density,
    gaussian_kernel,
    get_kernel,
    verify_hypotheses,
)
from .simulation import SimulationConfig, SimulationReport, paper_table, run_simulation  # noqa: E402

__all__ = [
    "FGTIndex",
    "FgtEstimate",
    "FgtParams",
    "IncomeDistribution",
    "IncomeSample",
    "Kernel",
    "LocalFactors",
    "SimulationConfig",
    "SimulationReport",
    "adaptive_kernel_fgt",
    "asymptotic_variance",
    "bias_corrected_density",
    "bias_reduced_fgt",
    "classical_density",
    "classical_kernel_fgt",
    "default_bandwidth",
    "derive_seed",
    "draw_sample",
    "efficiency",
    "empirical_fgt",
    "gaussian_kernel",
    "get_kernel",
    "integral_form_fgt",
    "lil_bandwidth",
    "local_bandwidth_factors",
    "make_distribution",
    "paper_table",
    "remainder_term",
    "riemann_sum_fgt",
    "run_simulation",
    "true_fgt",
    "truncated_pareto",
    "uniform_01",
    "verify_hypotheses",
]
