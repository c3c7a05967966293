"""Spectral smoothing of empirical PMFs on large integer supports.

The estimator treats the empirical histogram as a signal on a path graph and
low-pass filters it through the eigenvectors of the histogram-perturbed graph
Laplacian; see :mod:`specpmf.estimator` for the method and
:mod:`specpmf.tridiag` for the self-contained eigensolver behind it.
"""

from .errors import (
    ConvergenceError,
    DegenerateProjectionError,
    NumericalError,
    ParameterError,
)
from .tridiag import (
    EigenBasis,
    TridiagMatrix,
    gershgorin_bounds,
    matvec,
    smallest_eigenpairs,
    spectral_scale,
    sturm_count,
)
from .estimator import (
    Diagnostics,
    EmpiricalPmf,
    PmfEstimate,
    build_operator,
    empirical_pmf,
    estimate_auto,
    estimate_fixed_k,
    project_and_normalize,
)
from .model_select import RiskCurve, max_basis_size, risk_curve, select_k
from .kde import KdeEstimate, kde_estimate, scott_bandwidth
from .bench import ExperimentGrid, MetricRow, error_metrics, run_grid, summarize
from . import rng, synthetic

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateProjectionError",
    "NumericalError",
    "ParameterError",
    "EigenBasis",
    "TridiagMatrix",
    "gershgorin_bounds",
    "matvec",
    "smallest_eigenpairs",
    "spectral_scale",
    "sturm_count",
    "Diagnostics",
    "EmpiricalPmf",
    "PmfEstimate",
    "build_operator",
    "empirical_pmf",
    "estimate_auto",
    "estimate_fixed_k",
    "project_and_normalize",
    "RiskCurve",
    "max_basis_size",
    "risk_curve",
    "select_k",
    "KdeEstimate",
    "kde_estimate",
    "scott_bandwidth",
    "ExperimentGrid",
    "MetricRow",
    "error_metrics",
    "run_grid",
    "summarize",
    "rng",
    "synthetic",
    "__version__",
]
