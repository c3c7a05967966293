import numpy as np
import pytest

from specpmf import tridiag
from specpmf.errors import ConvergenceError, ParameterError
from specpmf.tridiag import (
    TridiagMatrix,
    gershgorin_bounds,
    matvec,
    smallest_eigenpairs,
    spectral_scale,
    sturm_count,
)

from oracles import jacobi_spectrum, random_tridiag, tridiag_to_dense


def path_laplacian(n):
    diag = np.full(n, 2.0)
    diag[0] = diag[-1] = 1.0
    return TridiagMatrix(diag, np.full(n - 1, -1.0))


class TestTypes:
    def test_rejects_wrong_offdiag_length(self):
        with pytest.raises(ParameterError):
            TridiagMatrix(diag=[1.0, 2.0], offdiag=[1.0, 1.0])

    def test_rejects_non_finite(self):
        with pytest.raises(ParameterError):
            TridiagMatrix(diag=[1.0, np.inf], offdiag=[0.0])
        with pytest.raises(ParameterError):
            TridiagMatrix(diag=[1.0, 2.0], offdiag=[np.nan])

    def test_one_by_one_allowed(self):
        T = TridiagMatrix(diag=[3.0], offdiag=[])
        assert T.n == 1


class TestGershgorin:
    def test_single_cell(self):
        assert gershgorin_bounds(TridiagMatrix([0.0], [])) == (0.0, 0.0)

    def test_two_cell(self):
        assert gershgorin_bounds(TridiagMatrix([1.0, 1.0], [-1.0])) == (0.0, 2.0)

    def test_three_cell(self):
        # radii are (1, 2, 1) around diagonal (1, 2, 1)
        assert gershgorin_bounds(TridiagMatrix([1.0, 2.0, 1.0], [-1.0, -1.0])) == (0.0, 4.0)

    def test_contains_true_spectrum(self):
        rs = np.random.RandomState(5)
        for _ in range(20):
            diag, off = random_tridiag(rs, rs.randint(2, 30))
            T = TridiagMatrix(diag, off)
            lo, hi = gershgorin_bounds(T)
            vals = np.linalg.eigvalsh(tridiag_to_dense(diag, off))
            assert lo <= vals.min() + 1e-12 and vals.max() <= hi + 1e-12


class TestSturmCount:
    def test_two_cell_at_one(self):
        assert sturm_count(TridiagMatrix([1.0, 1.0], [-1.0]), 1.0) == 1

    def test_psd_laplacian_below_zero(self):
        assert sturm_count(path_laplacian(3), -0.5) == 0

    def test_laplacian_between_eigenvalues(self):
        # spectrum of the 3-node path Laplacian is {0, 1, 3}
        assert sturm_count(path_laplacian(3), 0.5) == 1

    def test_monotone_and_exhaustive(self):
        rs = np.random.RandomState(11)
        diag, off = random_tridiag(rs, 17)
        T = TridiagMatrix(diag, off)
        lo, hi = gershgorin_bounds(T)
        xs = np.linspace(lo - 0.5, hi + 0.5, 41)
        counts = [sturm_count(T, x) for x in xs]
        assert counts == sorted(counts)
        assert counts[0] == 0 and counts[-1] == T.n

    def test_matches_dense_count(self):
        rs = np.random.RandomState(13)
        for _ in range(10):
            diag, off = random_tridiag(rs, rs.randint(2, 25))
            T = TridiagMatrix(diag, off)
            vals = np.linalg.eigvalsh(tridiag_to_dense(diag, off))
            for x in rs.uniform(-3, 3, size=8):
                assert sturm_count(T, x) == int(np.sum(vals < x))


class TestSmallestEigenpairs:
    def test_two_node_laplacian(self):
        basis = smallest_eigenpairs(path_laplacian(2), 2)
        np.testing.assert_allclose(basis.values, [0.0, 2.0], atol=1e-10)
        s = 1.0 / np.sqrt(2.0)
        np.testing.assert_allclose(basis.vectors[:, 0], [s, s], atol=1e-10)
        np.testing.assert_allclose(basis.vectors[:, 1], [s, -s], atol=1e-10)

    def test_constant_nullspace(self):
        basis = smallest_eigenpairs(path_laplacian(3), 1)
        np.testing.assert_allclose(basis.values, [0.0], atol=1e-10)
        np.testing.assert_allclose(basis.vectors[:, 0], np.full(3, 3 ** -0.5), atol=1e-10)

    def test_full_spectrum_vs_jacobi_n32(self):
        rs = np.random.RandomState(32)
        diag, off = random_tridiag(rs, 32)
        basis = smallest_eigenpairs(TridiagMatrix(diag, off), 32)
        ref_vals, _ = jacobi_spectrum(tridiag_to_dense(diag, off))
        scale = spectral_scale(TridiagMatrix(diag, off))
        np.testing.assert_allclose(basis.values, ref_vals, atol=1e-8 * scale)

    def test_k_out_of_range(self):
        T = path_laplacian(4)
        with pytest.raises(ParameterError):
            smallest_eigenpairs(T, 0)
        with pytest.raises(ParameterError):
            smallest_eigenpairs(T, 5)

    def test_single_cell(self):
        basis = smallest_eigenpairs(TridiagMatrix([4.5], []), 1)
        assert basis.values[0] == 4.5
        assert basis.vectors[0, 0] == 1.0

    def test_zero_matrix(self):
        basis = smallest_eigenpairs(TridiagMatrix(np.zeros(5), np.zeros(4)), 3)
        np.testing.assert_allclose(basis.values, np.zeros(3))
        assert basis.orthonormality_defect() <= 1e-12

    def test_diagonal_with_repeats(self):
        # zero off-diagonals: eigenvalues repeat, cluster machinery must cope
        T = TridiagMatrix([1.0, 1.0, 1.0, 2.0], [0.0, 0.0, 0.0])
        basis = smallest_eigenpairs(T, 4)
        np.testing.assert_allclose(basis.values, [1.0, 1.0, 1.0, 2.0], atol=1e-10)
        assert basis.orthonormality_defect() <= 1e-10

    def test_wilkinson_style_near_degenerate_pairs(self):
        # classic stress case: eigenvalues pair up to ~1e-15
        m = 10
        diag = np.abs(np.arange(-m, m + 1)).astype(np.float64)
        off = np.ones(2 * m)
        T = TridiagMatrix(diag, off)
        basis = smallest_eigenpairs(T, T.n)
        ref_vals, _ = jacobi_spectrum(tridiag_to_dense(diag, off))
        scale = spectral_scale(T)
        np.testing.assert_allclose(basis.values, ref_vals, atol=1e-8 * scale)
        assert basis.orthonormality_defect() <= 1e-10
        assert basis.max_residual(T) <= 1e-10 * scale

    def test_sign_convention(self):
        rs = np.random.RandomState(3)
        diag, off = random_tridiag(rs, 12)
        basis = smallest_eigenpairs(TridiagMatrix(diag, off), 12)
        for j in range(12):
            col = basis.vectors[:, j]
            assert col[int(np.argmax(np.abs(col)))] > 0

    def test_deterministic_bit_identical(self):
        rs = np.random.RandomState(8)
        diag, off = random_tridiag(rs, 40)
        a = smallest_eigenpairs(TridiagMatrix(diag, off), 7)
        b = smallest_eigenpairs(TridiagMatrix(diag, off), 7)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.vectors, b.vectors)

    def test_convergence_failure_is_observable(self, monkeypatch):
        monkeypatch.setattr(tridiag, "_shifted_residual_norm", lambda *a: np.inf)
        with pytest.raises(ConvergenceError) as info:
            smallest_eigenpairs(path_laplacian(6), 2)
        assert info.value.index == 0


@pytest.fixture(scope="module")
def cases():
    rs = np.random.RandomState(77)
    out = []
    for _ in range(25):
        n = rs.randint(2, 64)
        k = rs.randint(1, n + 1)
        diag, off = random_tridiag(rs, n, zero_off_prob=0.1)
        T = TridiagMatrix(diag, off)
        out.append((T, smallest_eigenpairs(T, k)))
    return out


class TestInvariantsOnRandomMatrices:

    def test_orthonormality(self, cases):
        for _, basis in cases:
            assert basis.orthonormality_defect() <= 1e-10

    def test_residual_bound(self, cases):
        for T, basis in cases:
            assert basis.max_residual(T) <= 1e-10 * max(spectral_scale(T), 1e-300)

    def test_sturm_consistency(self, cases):
        for T, basis in cases:
            delta = 1e-8 * spectral_scale(T)
            for j, lam in enumerate(basis.values):
                assert sturm_count(T, lam - delta) <= j
                assert sturm_count(T, lam + delta) >= j + 1

    def test_values_ascending_and_distinct_when_unreduced(self, cases):
        for T, basis in cases:
            assert np.all(np.diff(basis.values) >= 0)
            if np.all(T.offdiag != 0.0):
                assert np.all(np.diff(basis.values) > 0)

    def test_matches_jacobi_on_full_spectrum(self):
        rs = np.random.RandomState(123)
        for _ in range(15):
            n = rs.randint(2, 64)
            diag, off = random_tridiag(rs, n)
            T = TridiagMatrix(diag, off)
            basis = smallest_eigenpairs(T, n)
            ref_vals, _ = jacobi_spectrum(tridiag_to_dense(diag, off))
            np.testing.assert_allclose(
                basis.values, ref_vals, atol=1e-8 * spectral_scale(T)
            )


class TestVariationalProperty:
    def test_rayleigh_quotients_never_beat_eigenvalues(self):
        # random unit vectors orthogonal to the leading eigenvectors cannot
        # push the quadratic form below the next eigenvalue
        rs = np.random.RandomState(42)
        for n in (4, 9, 16):
            diag, off = random_tridiag(rs, n)
            T = TridiagMatrix(diag, off)
            basis = smallest_eigenpairs(T, n)
            for j in range(min(n, 5)):
                X = rs.standard_normal((1000, n))
                if j > 0:
                    prev = basis.vectors[:, :j]
                    X -= (X @ prev) @ prev.T
                X /= np.linalg.norm(X, axis=1, keepdims=True)
                rayleigh = np.einsum("ij,ij->i", X, matvec(T, X.T).T)
                assert np.all(rayleigh >= basis.values[j] - 1e-9)


def test_matvec_agrees_with_dense():
    rs = np.random.RandomState(2)
    diag, off = random_tridiag(rs, 15)
    T = TridiagMatrix(diag, off)
    A = tridiag_to_dense(diag, off)
    x = rs.standard_normal(15)
    np.testing.assert_allclose(matvec(T, x), A @ x, atol=1e-12)
    X = rs.standard_normal((15, 4))
    np.testing.assert_allclose(matvec(T, X), A @ X, atol=1e-12)
