"""Spectral smoothing of an empirical PMF on {0, ..., N-1}.

The estimate is a low-pass filtered histogram: take the empirical frequency
vector p, form the path-graph Laplacian perturbed by -diag(p), project p onto
the span of the eigenvectors belonging to the k smallest eigenvalues, then
clip negatives and renormalize back onto the simplex.  The perturbation makes
the basis data dependent: eigenvectors concentrate where the histogram has
mass, so few of them capture multi-modal, heavy-tailed shapes.

`estimate_fixed_k` runs the four steps for a given k; `estimate_auto` also
picks k from the data (see `model_select`), which is the recommended entry
point for pipelines.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import model_select
from .errors import DegenerateProjectionError, ParameterError
from .model_select import RiskCurve
from .tridiag import EigenBasis, TridiagMatrix, smallest_eigenpairs

SampleInput = Union[Sequence[int], np.ndarray]


@dataclass(frozen=True)
class EmpiricalPmf:
    """Histogram of integer samples: counts, sample size n, frequencies p."""

    counts: np.ndarray  # int64, length N
    n: int
    p: np.ndarray  # counts / n, on the simplex

    @property
    def size(self) -> int:
        return self.counts.size

    @property
    def n_distinct(self) -> int:
        """Number of support cells that were actually observed."""
        return int(np.count_nonzero(self.counts))


@dataclass
class Diagnostics:
    """Optional extras attached to an estimate."""

    eigenvalues: Optional[np.ndarray] = None
    risk: Optional[RiskCurve] = None
    max_basis: Optional[int] = None
    degenerate_fallback: bool = False


@dataclass
class PmfEstimate:
    """Estimated PMF q on the simplex plus the truncation level that made it."""

    q: np.ndarray
    k_used: int
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def empirical_pmf(samples: SampleInput, support_size: Optional[int] = None) -> EmpiricalPmf:
    """Count samples into a histogram over {0, ..., N-1}.

    N defaults to max(samples) + 1; an explicit support_size must exceed the
    largest observed value.  Negative samples are rejected: shift them into
    a nonnegative range first (the CLI's --shift-min flag does exactly that).
    """
    values = np.asarray(samples)
    if values.ndim != 1:
        values = values.reshape(-1)
    if values.size == 0:
        raise ParameterError("samples must be nonempty")
    if values.dtype.kind == "f":
        if not np.all(values == np.rint(values)):
            raise ParameterError("samples must be integers")
        values = values.astype(np.int64)
    elif values.dtype.kind not in "iu":
        raise ParameterError("samples must be an integer sequence")
    else:
        values = values.astype(np.int64)
    if values.min() < 0:
        raise ParameterError(
            "negative sample values; shift them to a nonnegative range first "
            "(the CLI preprocessing flag --shift-min does this)"
        )
    top = int(values.max())
    if support_size is None:
        support_size = top + 1
    else:
        support_size = int(support_size)
        if support_size <= top:
            raise ParameterError(
                f"support_size {support_size} does not cover max sample {top}"
            )
    counts = np.bincount(values, minlength=support_size).astype(np.int64)
    n = int(counts.sum())
    return EmpiricalPmf(counts=counts, n=n, p=counts / n)


def build_operator(pmf: EmpiricalPmf) -> TridiagMatrix:
    """Path-graph Laplacian minus diag(p): diagonal [1, 2, ..., 2, 1] - p."""
    n = pmf.size
    if n < 2:
        raise ParameterError("operator needs a support of at least 2 cells")
    diag = np.full(n, 2.0)
    diag[0] = diag[-1] = 1.0
    diag -= pmf.p
    return TridiagMatrix(diag=diag, offdiag=np.full(n - 1, -1.0))


def project_and_normalize(basis: EigenBasis, pmf: EmpiricalPmf) -> PmfEstimate:
    """Project p onto the basis columns, clip negatives, renormalize.

    The projection is computed as V (V^T p), never forming V V^T.  Raises
    DegenerateProjectionError when the projection has no positive entry.
    """
    if basis.vectors.shape[0] != pmf.size:
        raise ParameterError("basis and empirical PMF have different supports")
    u = basis.vectors @ (basis.vectors.T @ pmf.p)
    return PmfEstimate(
        q=_clip_normalize(u),
        k_used=basis.k,
        diagnostics=Diagnostics(eigenvalues=basis.values.copy()),
    )


def estimate_fixed_k(
    samples: SampleInput, k: int, support_size: Optional[int] = None
) -> PmfEstimate:
    """Four-step estimate with a caller-chosen number of basis vectors.

    k is clamped to the support size (a full basis reproduces p exactly).
    """
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    pmf = empirical_pmf(samples, support_size)
    if pmf.size == 1:
        return PmfEstimate(q=np.ones(1), k_used=1)
    basis = smallest_eigenpairs(build_operator(pmf), min(int(k), pmf.size))
    return _finish(basis, pmf, Diagnostics(eigenvalues=basis.values))


def estimate_auto(samples: SampleInput, support_size: Optional[int] = None) -> PmfEstimate:
    """Fully automatic estimate: the basis size is chosen from the data.

    Computes the largest basis worth considering, scores every truncation
    level with the risk curve, and keeps the minimizer.  Diagnostics carry
    the curve, the cap, and the eigenvalues that were examined.
    """
    pmf = empirical_pmf(samples, support_size)
    if pmf.size == 1:
        return PmfEstimate(q=np.ones(1), k_used=1, diagnostics=Diagnostics(max_basis=1))
    cap = min(model_select.max_basis_size(pmf.n, pmf.n_distinct), pmf.size)
    basis = smallest_eigenpairs(build_operator(pmf), cap)
    curve = model_select.risk_curve(basis, pmf)
    k_best = model_select.select_k(curve)
    diag = Diagnostics(eigenvalues=basis.values, risk=curve, max_basis=cap)
    return _finish(basis.truncated(k_best), pmf, diag)


def _clip_normalize(u: np.ndarray) -> np.ndarray:
    clipped = np.maximum(u, 0.0)
    total = clipped.sum()
    if total <= 0.0:
        raise DegenerateProjectionError("projection has no positive entries")
    return clipped / total


def _finish(basis: EigenBasis, pmf: EmpiricalPmf, diag: Diagnostics) -> PmfEstimate:
    u = basis.vectors @ (basis.vectors.T @ pmf.p)
    try:
        q = _clip_normalize(u)
    except DegenerateProjectionError:
        # Cannot happen for a genuine eigenbasis of the perturbed Laplacian
        # (its ground state is positive), but stay observable rather than
        # failing a whole pipeline: return the raw histogram and flag it.
        q = pmf.p.copy()
        diag.degenerate_fallback = True
    return PmfEstimate(q=q, k_used=basis.k, diagnostics=diag)
