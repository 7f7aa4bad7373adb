import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpsh import ConvergenceError, PreconditionError
from mpsh.hermitian import (
    BUMP_FIELD,
    ZERO_FIELD,
    HermitianMatrix,
    PerturbedQuadratic,
    hessian_at,
    jacobi_eigen,
    perturbation_experiment,
)


def random_hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


class TestHermitianMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(PreconditionError):
            HermitianMatrix([[1, 2], [3, 4]])

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_diagonal_made_real(self):
        H = HermitianMatrix([[1 + 1e-15j, 1j], [-1j, 2]])
        assert np.all(H.entries.diagonal().imag == 0)
        assert np.array_equal(H.entries, H.entries.conj().T)

    def test_block(self):
        H = HermitianMatrix(np.diag([1.0, 2.0, 3.0]))
        assert H.block(2).dim == 2


class TestJacobi:
    def test_examples(self):
        assert jacobi_eigen(HermitianMatrix(np.diag([3.0, 1.0, 2.0]))).values == (1.0, 2.0, 3.0)
        got = jacobi_eigen(HermitianMatrix([[0, 1j], [-1j, 0]])).values
        assert got == pytest.approx((-1.0, 1.0), abs=1e-14)
        got = jacobi_eigen(HermitianMatrix([[2, 1], [1, 2]])).values
        assert got == pytest.approx((1.0, 3.0), abs=1e-14)

    def test_bad_tol(self):
        with pytest.raises(PreconditionError):
            jacobi_eigen(HermitianMatrix(np.eye(2)), tol=0)

    def test_sweep_cap(self):
        rng = np.random.default_rng(1)
        with pytest.raises(ConvergenceError) as exc:
            jacobi_eigen(HermitianMatrix(random_hermitian(rng, 12)), max_sweeps=1)
        assert exc.value.achieved > 0

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
    def test_against_lapack(self, n):
        rng = np.random.default_rng(n)
        for _ in range(20):
            A = random_hermitian(rng, n)
            got = np.array(jacobi_eigen(HermitianMatrix(A)).values)
            ref = np.linalg.eigvalsh(A)
            assert np.allclose(got, ref, atol=1e-11 * max(1.0, np.abs(ref).max()))
            assert abs(got.sum() - np.trace(A).real) <= 1e-10 * max(1.0, np.abs(A).sum())

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=10))
    def test_diagonal_sorted(self, d):
        assert jacobi_eigen(HermitianMatrix(np.diag(d))).values == tuple(sorted(float(x) for x in d))

    def test_weyl_bound(self):
        rng = np.random.Generator(np.random.Philox(3))
        for _ in range(200):
            A = random_hermitian(rng, 5)
            delta = 10.0 ** rng.uniform(-8, -1)
            E = random_hermitian(rng, 5)
            E *= delta / np.abs(E).max()
            a = np.array(jacobi_eigen(HermitianMatrix(A)).values)
            b = np.array(jacobi_eigen(HermitianMatrix(A + E)).values)
            assert np.all(np.abs(a - b) <= 5 * delta + 1e-12)


class TestHessian:
    def test_zero_field(self):
        H = hessian_at(PerturbedQuadratic((1, 2), ZERO_FIELD), [0.3 + 0.1j, -0.2])
        assert np.array_equal(H.entries, np.diag([1.0, 2.0]).astype(complex))

    def test_bump_at_origin(self):
        H = hessian_at(PerturbedQuadratic((0, 0, 0), BUMP_FIELD), [0, 0, 0])
        assert np.allclose(H.entries, 2 * np.eye(3))

    def test_bump_on_sphere(self):
        z = np.array([0.6, 0.8j])
        H = hessian_at(PerturbedQuadratic((1, 1), BUMP_FIELD), z)
        assert np.allclose(H.entries, np.eye(2) - 2 * np.outer(z.conj(), z))

    def test_bump_against_finite_differences(self):
        # d^2/dz_p dzbar_q = (1/4)(d_xx + d_yy) on the diagonal
        z = np.array([0.3 + 0.1j, 0.2 - 0.2j, 0.1j])
        H = BUMP_FIELD.hessian(z)
        h = 1e-4
        for p in range(3):
            e = np.zeros(3, dtype=complex)
            e[p] = 1
            lap = 0.0
            for d in (e, 1j * e):
                lap += (BUMP_FIELD.value(z + h * d) - 2 * BUMP_FIELD.value(z) + BUMP_FIELD.value(z - h * d)) / h**2
            assert H[p, p].real == pytest.approx(lap / 4, abs=1e-6)

    def test_dimension_check(self):
        with pytest.raises(PreconditionError):
            hessian_at(PerturbedQuadratic((1, 2), ZERO_FIELD), [0.1])


class TestPerturbation:
    def test_zero_field_exact(self):
        t = perturbation_experiment(PerturbedQuadratic((1, 2, 20), ZERO_FIELD), [0.3, 0.2, 0.1], [20, 200, 2000])
        assert all(r.max_error == 0 for r in t.rows)

    def test_shipped_experiment(self):
        f = PerturbedQuadratic((1, 2, 10), BUMP_FIELD)
        t = perturbation_experiment(f, [0.3, 0.2, 0.1], [10, 100, 1000, 1e4])
        assert t.is_monotone()
        assert t.rows[-1].max_error <= t.rows[0].max_error
        assert t.rows[-1].max_error <= 1e-2
        # lambda_n error times a_n stays bounded
        scaled = [r.lambda_n_error * r.a_n for r in t.rows]
        assert max(scaled) <= 2 * min(scaled)
        assert t.empirical_rate() == pytest.approx(-1.0, abs=0.1)

    def test_preconditions(self):
        f = PerturbedQuadratic((1, 2, 10), BUMP_FIELD)
        with pytest.raises(PreconditionError):
            perturbation_experiment(f, [0, 0, 0], [100, 10])
        with pytest.raises(PreconditionError):
            perturbation_experiment(f, [0, 0, 0], [1.5, 10])
        with pytest.raises(PreconditionError):
            perturbation_experiment(f, [0, 0, 0], [])
