"""Data-driven choice of how many basis vectors to keep.

The truncation level trades smoothing against fidelity, so it is picked by
minimizing an estimated expected L2 error of keeping the first m of K
coefficients, with K capped by a spline-knot-style budget rule.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import ParameterError
from .tridiag import EigenBasis

if TYPE_CHECKING:  # avoids a circular import with the estimator module
    from .estimator import EmpiricalPmf

MAX_BASIS_CAP = 30


@dataclass(frozen=True)
class RiskCurve:
    """Per-truncation-level error estimates for a K-column basis.

    c holds the basis coefficients of the empirical PMF, s2 the raw second
    moments, cbar2 the de-biased squared coefficients (clipped at zero), and
    errors[m - 1] the estimated expected L2 error of keeping m coefficients.
    """

    c: np.ndarray
    s2: np.ndarray
    cbar2: np.ndarray
    errors: np.ndarray

    @property
    def K(self) -> int:
        return self.c.size


def max_basis_size(n: int, n_distinct: int) -> int:
    """Upper bound on the number of basis vectors worth estimating.

    ceil(min(4 n^(1/5), n / 4, n_distinct, 30)), never below 1; n is the
    sample count and n_distinct the number of occupied support cells.
    """
    if n < 1 or n_distinct < 1:
        raise ParameterError("n and n_distinct must be positive")
    bound = min(4.0 * n ** 0.2, n / 4.0, float(n_distinct), float(MAX_BASIS_CAP))
    return max(1, math.ceil(bound))


def risk_curve(basis: EigenBasis, pmf: "EmpiricalPmf") -> RiskCurve:
    """Error-estimate curve for truncating to m = 1..K basis vectors.

    With coefficients c = V^T p and raw second moments s2 = (V * V)^T p,
    the de-biased squared coefficients are [n c^2 - s2]_+ / (n - 1) (all
    zeros when n == 1), and

        errors(m) = (1/n) * sum_{j<=m} (s2_j - cbar2_j) + sum_{j>m} cbar2_j.

    Everything is computed once in O(KN).
    """
    V = basis.vectors
    if V.shape[0] != pmf.size:
        raise ParameterError("basis and empirical PMF have different supports")
    n = pmf.n
    c = V.T @ pmf.p
    s2 = (V * V).T @ pmf.p
    if n > 1:
        cbar2 = np.maximum(n * c * c - s2, 0.0) / (n - 1)
    else:
        cbar2 = np.zeros_like(c)
    kept = np.cumsum(s2 - cbar2) / n
    dropped = cbar2[::-1].cumsum()[::-1] - cbar2  # tail sums excluding m itself
    return RiskCurve(c=c, s2=s2, cbar2=cbar2, errors=kept + dropped)


def select_k(curve: RiskCurve) -> int:
    """Truncation level with the smallest estimated error.

    Ties break toward the smallest m, i.e. toward stronger smoothing.
    """
    return int(np.argmin(curve.errors)) + 1
