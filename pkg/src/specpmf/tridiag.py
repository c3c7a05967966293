"""Smallest eigenpairs of real symmetric tridiagonal matrices.

Self-contained O(kN) eigensolver: no LAPACK-style driver is called anywhere.
Eigenvalues are bracketed by bisection on Sturm-sequence inertia counts, and
eigenvectors come out of inverse iteration with a partially pivoted
tridiagonal LU, re-orthogonalizing within clusters of close eigenvalues.
The recurrences are numba-compiled; everything is deterministic, so identical
inputs give bit-identical outputs.

The matrix is normalized internally by its largest absolute Gershgorin bound,
which makes every tolerance below effectively relative to that scale.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import rng
from .errors import ConvergenceError, NumericalError, ParameterError

# Bisection stops once a bracket is narrower than this (normalized scale = 1).
_BISECT_TOL = 1e-14 + 1e-12
# Eigenvalues this close (again on the normalized scale) share one
# Gram-Schmidt cluster during inverse iteration.
_CLUSTER_SEP = 1e-6
# Inverse-iteration sweeps per start vector, and start vectors per eigenpair.
_SWEEP_BUDGET = 8
_START_ATTEMPTS = 4
# Residual demanded before a sweep is accepted (normalized scale).
_CONV_TOL = 1e-11
# Contract checked on the returned basis.
ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-10

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class TridiagMatrix:
    """Symmetric tridiagonal matrix stored as its two defining diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.ascontiguousarray(self.diag, dtype=np.float64)
        offdiag = np.ascontiguousarray(self.offdiag, dtype=np.float64)
        if diag.ndim != 1 or diag.size < 1:
            raise ParameterError("diag must be a 1-d array with at least one entry")
        if offdiag.ndim != 1 or offdiag.size != diag.size - 1:
            raise ParameterError(
                f"offdiag must have length {diag.size - 1}, got {offdiag.size}"
            )
        if not np.isfinite(diag).all() or not np.isfinite(offdiag).all():
            raise ParameterError("matrix entries must be finite")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def n(self) -> int:
        return self.diag.size


@dataclass
class EigenBasis:
    """Ascending eigenvalues with column-orthonormal eigenvectors."""

    values: np.ndarray  # shape (k,)
    vectors: np.ndarray  # shape (N, k), column j pairs with values[j]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.values.size:
            raise ParameterError("vectors must be N x k with one column per value")

    @property
    def k(self) -> int:
        return self.values.size

    def truncated(self, k: int) -> "EigenBasis":
        """Basis restricted to the first k columns."""
        return EigenBasis(self.values[:k].copy(), self.vectors[:, :k].copy())

    def orthonormality_defect(self) -> float:
        g = self.vectors.T @ self.vectors
        return float(np.max(np.abs(g - np.eye(self.k))))

    def max_residual(self, T: TridiagMatrix) -> float:
        norms = np.empty(self.k)
        _residual_norms(T.diag, T.offdiag, self.values, self.vectors, norms)
        return float(np.max(norms))


def matvec(T: TridiagMatrix, x: np.ndarray) -> np.ndarray:
    """T @ x for a vector or an (N, k) block of columns."""
    x = np.asarray(x, dtype=np.float64)
    off = T.offdiag if x.ndim == 1 else T.offdiag[:, None]
    y = (T.diag if x.ndim == 1 else T.diag[:, None]) * x
    if T.n > 1:
        y[:-1] += off * x[1:]
        y[1:] += off * x[:-1]
    return y


def gershgorin_bounds(T: TridiagMatrix) -> tuple[float, float]:
    """Interval [lo, hi] guaranteed to contain every eigenvalue of T."""
    radius = np.zeros(T.n)
    if T.n > 1:
        a = np.abs(T.offdiag)
        radius[:-1] += a
        radius[1:] += a
    return float(np.min(T.diag - radius)), float(np.max(T.diag + radius))


def spectral_scale(T: TridiagMatrix) -> float:
    """Largest absolute Gershgorin bound; the natural magnitude of T."""
    lo, hi = gershgorin_bounds(T)
    return max(abs(lo), abs(hi))


def sturm_count(T: TridiagMatrix, x: float) -> int:
    """Number of eigenvalues of T strictly below x.

    Runs the shifted LDL^T pivot recurrence and counts negative pivots;
    pivots under a tiny floor are replaced by a signed epsilon so the
    recurrence never divides by zero.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError("shift x must be finite")
    scale = spectral_scale(T)
    out = np.empty(1, dtype=np.int64)
    _sturm_counts(T.diag, np.square(T.offdiag), np.array([x]), _pivot_floor(scale), out)
    return int(out[0])


def smallest_eigenpairs(T: TridiagMatrix, k: int) -> EigenBasis:
    """The k smallest eigenvalues of T and their orthonormal eigenvectors.

    Deterministic and O(kN): bisection locates each eigenvalue to roughly
    1e-12 of the matrix scale, inverse iteration recovers the vectors, and a
    final Gram-Schmidt pass plus sign fix (first entry of largest magnitude
    made positive) canonicalizes the basis.  Raises ParameterError for k out
    of [1, N] and ConvergenceError, carrying the failing column index, if an
    eigenvector cannot be converged within its iteration budget.
    """
    n = T.n
    if not isinstance(k, (int, np.integer)):
        raise ParameterError(f"k must be an integer, got {type(k).__name__}")
    k = int(k)
    if not 1 <= k <= n:
        raise ParameterError(f"k must lie in [1, {n}], got {k}")
    if n == 1:
        return EigenBasis(T.diag.copy(), np.ones((1, 1)))

    scale = spectral_scale(T)
    if scale == 0.0:  # zero matrix: nullspace is the whole space
        return EigenBasis(np.zeros(k), np.eye(n, k))

    diag = T.diag / scale
    off2 = np.square(T.offdiag / scale)
    lam = _bisect_eigenvalues(diag, off2, k)
    vectors = _inverse_iteration(T.diag / scale, T.offdiag / scale, lam)
    _orthonormalize(vectors)

    basis = EigenBasis(lam * scale, vectors)
    _verify(basis, T)
    _fix_signs(vectors)
    return basis


# ---------------------------------------------------------------------------
# compiled recurrences
# ---------------------------------------------------------------------------


@njit(cache=True)
def _sturm_counts(diag, off2, shifts, pivmin, out):
    """Negative-pivot counts of (T - shift I) for a batch of shifts."""
    n = diag.shape[0]
    m = shifts.shape[0]
    d = np.empty(m, dtype=np.float64)
    for l in range(m):
        t = diag[0] - shifts[l]
        if abs(t) < pivmin:
            t = -pivmin if t <= 0.0 else pivmin
        d[l] = t
        out[l] = 1 if t < 0.0 else 0
    for i in range(1, n):
        a = diag[i]
        b2 = off2[i - 1]
        for l in range(m):
            t = (a - shifts[l]) - b2 / d[l]
            if abs(t) < pivmin:
                t = -pivmin if t <= 0.0 else pivmin
            d[l] = t
            if t < 0.0:
                out[l] += 1


@njit(cache=True)
def _lu_factor(diag, offdiag, shift, pivmin, dl, d, du, du2, ipiv):
    """Partially pivoted LU of (T - shift I); tiny pivots floored to +-pivmin."""
    n = diag.shape[0]
    for i in range(n):
        d[i] = diag[i] - shift
    for i in range(n - 1):
        dl[i] = offdiag[i]
        du[i] = offdiag[i]
    for i in range(n - 2):
        du2[i] = 0.0
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            ipiv[i] = 0
            piv = d[i]
            if abs(piv) < pivmin:
                piv = -pivmin if piv <= 0.0 else pivmin
                d[i] = piv
            fact = dl[i] / piv
            dl[i] = fact
            d[i + 1] -= fact * du[i]
        else:
            ipiv[i] = 1
            piv = dl[i]
            if abs(piv) < pivmin:
                piv = -pivmin if piv <= 0.0 else pivmin
            fact = d[i] / piv
            d[i] = piv
            dl[i] = fact
            tmp = du[i]
            du[i] = d[i + 1]
            d[i + 1] = tmp - fact * d[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
    if abs(d[n - 1]) < pivmin:
        d[n - 1] = -pivmin if d[n - 1] <= 0.0 else pivmin


@njit(cache=True)
def _residual_norms(diag, offdiag, values, V, out):
    """out[j] = || T V[:, j] - values[j] V[:, j] ||_2, streaming V once."""
    n, k = V.shape
    acc = np.zeros(k, dtype=np.float64)
    for i in range(n):
        lo = offdiag[i - 1] if i > 0 else 0.0
        hi = offdiag[i] if i < n - 1 else 0.0
        a = diag[i]
        for j in range(k):
            r = (a - values[j]) * V[i, j]
            if i > 0:
                r += lo * V[i - 1, j]
            if i < n - 1:
                r += hi * V[i + 1, j]
            acc[j] += r * r
    for j in range(k):
        out[j] = np.sqrt(acc[j])


@njit(cache=True)
def _shifted_residual_norm(diag, offdiag, shift, y):
    """|| (T - shift I) y ||_2 without temporaries."""
    n = y.shape[0]
    acc = 0.0
    for i in range(n):
        r = (diag[i] - shift) * y[i]
        if i > 0:
            r += offdiag[i - 1] * y[i - 1]
        if i < n - 1:
            r += offdiag[i] * y[i + 1]
        acc += r * r
    return np.sqrt(acc)


@njit(cache=True)
def _lu_solve(dl, d, du, du2, ipiv, b):
    """In-place solve against the _lu_factor output."""
    n = d.shape[0]
    for i in range(n - 1):
        if ipiv[i] == 0:
            b[i + 1] -= dl[i] * b[i]
        else:
            tmp = b[i]
            b[i] = b[i + 1]
            b[i + 1] = tmp - dl[i] * b[i]
    b[n - 1] /= d[n - 1]
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]


# ---------------------------------------------------------------------------
# solver internals (all on the scale-normalized matrix)
# ---------------------------------------------------------------------------


def _pivot_floor(scale: float) -> float:
    return max(_EPS * scale, 1e-290)


def _bisect_eigenvalues(diag, off2, k):
    """Bisection on Sturm counts; lane j brackets the j-th smallest eigenvalue."""
    n = diag.size
    pivmin = _pivot_floor(1.0)
    radius = np.zeros(n)
    if n > 1:
        a = np.sqrt(off2)
        radius[:-1] += a
        radius[1:] += a
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))

    lower = np.full(k, lo - _BISECT_TOL)  # count(lower[j]) <= j
    upper = np.full(k, hi + _BISECT_TOL)  # count(upper[j]) >= j + 1
    targets = np.arange(1, k + 1)
    for _ in range(128):
        active = np.nonzero(upper - lower > _BISECT_TOL)[0]
        if active.size == 0:
            break
        mids = 0.5 * (lower[active] + upper[active])
        counts = np.empty(active.size, dtype=np.int64)
        _sturm_counts(diag, off2, mids, pivmin, counts)
        up = counts >= targets[active]
        upper[active[up]] = mids[up]
        lower[active[~up]] = mids[~up]
    lam = 0.5 * (lower + upper)
    lam.sort()
    return lam


def _start_vector(n: int, attempt: int) -> np.ndarray:
    # Alternating signs first; later attempts use a fixed counter-based
    # stream, so every retry is still deterministic.
    if attempt == 0:
        x = np.ones(n)
        x[1::2] = -1.0
    else:
        x = 0.25 + rng.random_uniform(attempt, n)
    return x / math.sqrt(float(np.dot(x, x)))


def _inverse_iteration(diag, offdiag, lam):
    """One inverse-iteration eigenvector per shift in lam (ascending)."""
    n = diag.size
    k = lam.size
    pivmin = _pivot_floor(1.0)
    V = np.empty((n, k))
    dl = np.empty(n - 1)
    d = np.empty(n)
    du = np.empty(n - 1)
    du2 = np.empty(max(n - 2, 0))
    ipiv = np.empty(max(n - 1, 0), dtype=np.int64)

    cluster_start = 0
    for j in range(k):
        if j > 0 and lam[j] - lam[j - 1] > max(_CLUSTER_SEP, 2.0 * _BISECT_TOL):
            cluster_start = j
        _lu_factor(diag, offdiag, lam[j], pivmin, dl, d, du, du2, ipiv)
        for attempt in range(_START_ATTEMPTS):
            y = _start_vector(n, attempt)
            converged = False
            for sweep in range(1, _SWEEP_BUDGET + 1):
                _lu_solve(dl, d, du, du2, ipiv, y)
                for m in range(cluster_start, j):
                    y -= np.dot(V[:, m], y) * V[:, m]
                norm = math.sqrt(float(np.dot(y, y)))
                if not math.isfinite(norm) or norm == 0.0:
                    break  # start vector collapsed; try the next one
                y /= norm
                # One extra sweep past a small residual keeps leakage into
                # neighbors just outside the cluster threshold negligible.
                if sweep >= 2 and _shifted_residual_norm(diag, offdiag, lam[j], y) <= _CONV_TOL:
                    converged = True
                    break
            if converged:
                break
        else:
            raise ConvergenceError("inverse iteration did not converge", index=j)
        V[:, j] = y
    return V


def _orthonormalize(V):
    """Cholesky-based Gram-Schmidt: V <- V inv(L)^T where V^T V = L L^T.

    The columns are already orthonormal to ~1e-9 or better, so the Gram
    matrix is a tiny perturbation of the identity and the factorization is
    perfectly conditioned.  One GEMM plus a k x k triangular inversion is
    much cheaper than k strided column projections.
    """
    k = V.shape[1]
    if k == 1:
        V[:, 0] /= math.sqrt(float(np.dot(V[:, 0], V[:, 0])))
        return
    g = V.T @ V
    # dense k x k Cholesky, k <= a few dozen
    L = np.zeros_like(g)
    for i in range(k):
        for j in range(i):
            L[i, j] = (g[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
        L[i, i] = math.sqrt(g[i, i] - np.dot(L[i, :i], L[i, :i]))
    # M = inv(L^T), upper triangular; back-substitution per column
    M = np.zeros_like(g)
    for j in range(k):
        M[j, j] = 1.0 / L[j, j]
        for i in range(j - 1, -1, -1):
            M[i, j] = -np.dot(L[i + 1 : j + 1, i], M[i + 1 : j + 1, j]) / L[i, i]
    V[:] = V @ M


def _fix_signs(V):
    # Canonical sign: first entry of largest magnitude is positive.
    idx = np.argmax(np.abs(V), axis=0)
    flip = V[idx, np.arange(V.shape[1])] < 0.0
    V[:, flip] *= -1.0


def _verify(basis: EigenBasis, T: TridiagMatrix):
    defect = basis.orthonormality_defect()
    if defect > ORTHONORMALITY_TOL:
        raise NumericalError(
            f"eigenbasis failed orthonormality check: defect {defect:.3e}"
        )
    scale = spectral_scale(T)
    resid = basis.max_residual(T)
    if resid > RESIDUAL_TOL * scale:
        raise NumericalError(
            f"eigenbasis failed residual check: {resid:.3e} vs "
            f"{RESIDUAL_TOL * scale:.3e}"
        )
