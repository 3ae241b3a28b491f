import numpy as np
import pytest

from ghostimaging.errors import ParameterError
from ghostimaging.gpsr import (SparseSolverConfig, gpsr_solve, soft_threshold)


class DenseOperator:
    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)

    def forward(self, x):
        return self.a @ x

    def adjoint(self, y):
        return self.a.T @ y


class IdentityOperator:
    def forward(self, x):
        return x.copy()

    def adjoint(self, y):
        return y.copy()


def random_instance(seed, m, n, tau_scale=0.2):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    tau = tau_scale * np.max(np.abs(a.T @ b))
    return DenseOperator(a), b, tau


class TestConfig:
    def test_positive_tau_required(self):
        with pytest.raises(ParameterError):
            SparseSolverConfig(tau=0.0)
        with pytest.raises(ParameterError):
            SparseSolverConfig(tau=-1.0)

    def test_backtracking_constants_in_unit_interval(self):
        with pytest.raises(ParameterError):
            SparseSolverConfig(tau=1.0, beta=1.0)
        with pytest.raises(ParameterError):
            SparseSolverConfig(tau=1.0, mu=0.0)

    def test_variant_checked(self):
        with pytest.raises(ParameterError):
            SparseSolverConfig(tau=1.0, variant="nesterov")


class TestIdentityOperator:
    def test_matches_soft_threshold(self):
        rng = np.random.default_rng(7)
        b = rng.standard_normal(50)
        tau = 0.4
        theta, report = gpsr_solve(IdentityOperator(), b,
                                   SparseSolverConfig(tau=tau, tol=1e-14))
        assert np.max(np.abs(theta - soft_threshold(b, tau))) < 1e-6
        assert report.converged

    def test_2d_variables_supported(self):
        rng = np.random.default_rng(8)
        b = rng.standard_normal((6, 5))

        class Flatten2D:
            def forward(self, x):
                return x.ravel().copy()

            def adjoint(self, y):
                return y.reshape(6, 5).copy()

        theta, _ = gpsr_solve(Flatten2D(), b.ravel(),
                              SparseSolverConfig(tau=0.3, tol=1e-14))
        assert theta.shape == (6, 5)
        assert np.max(np.abs(theta - soft_threshold(b, 0.3))) < 1e-6


class TestLeastSquaresLimit:
    def test_tiny_tau_matches_dense_lstsq(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((8, 4))
        b = rng.standard_normal(8)
        x_ls = np.linalg.lstsq(a, b, rcond=None)[0]
        tau = 1e-12 * np.max(np.abs(a.T @ b))
        theta, _ = gpsr_solve(DenseOperator(a), b,
                              SparseSolverConfig(tau=tau, max_iters=10000,
                                                 tol=1e-16))
        assert np.max(np.abs(theta - x_ls)) < 1e-4


class TestMonotonicityAndOptimality:
    @pytest.mark.parametrize("seed,m,n", [(0, 30, 12), (1, 12, 30),
                                          (2, 50, 50), (3, 20, 8)])
    def test_objective_trace_non_increasing(self, seed, m, n):
        op, b, tau = random_instance(seed, m, n)
        _, report = gpsr_solve(op, b, SparseSolverConfig(tau=tau, tol=1e-12))
        trace = report.objective_trace
        assert np.all(np.isfinite(trace))
        assert np.all(np.diff(trace) <= 1e-12 * trace[0])

    @pytest.mark.parametrize("seed,m,n", [(0, 30, 12), (4, 40, 25)])
    def test_kkt_certificate_at_convergence(self, seed, m, n):
        op, b, tau = random_instance(seed, m, n)
        theta, report = gpsr_solve(
            op, b, SparseSolverConfig(tau=tau, max_iters=10000, tol=1e-13))
        assert report.converged
        grad = op.adjoint(op.forward(theta) - b)
        zero = theta == 0
        if zero.any():
            assert np.max(np.abs(grad[zero])) <= tau * (1 + 1e-2)
        if (~zero).any():
            resid = grad[~zero] + tau * np.sign(theta[~zero])
            assert np.max(np.abs(resid)) <= 1e-2 * tau

    def test_tau_at_null_threshold_gives_zero(self):
        op, b, _ = random_instance(5, 25, 10)
        tau = np.max(np.abs(op.a.T @ b))
        theta, report = gpsr_solve(op, b, SparseSolverConfig(tau=tau))
        assert np.all(theta == 0.0)
        assert report.nnz == 0

    def test_zero_data_returns_zero(self):
        op = DenseOperator(np.eye(4))
        theta, report = gpsr_solve(op, np.zeros(4),
                                   SparseSolverConfig(tau=0.5))
        assert np.all(theta == 0.0)
        assert report.converged


class TestVariants:
    def test_debias_reduces_residual_on_support(self):
        op, b, tau = random_instance(9, 40, 20, tau_scale=0.3)
        plain, _ = gpsr_solve(op, b, SparseSolverConfig(tau=tau, tol=1e-12))
        debiased, _ = gpsr_solve(op, b, SparseSolverConfig(
            tau=tau, tol=1e-12, debias=True, debias_cg_iters=100))
        support_plain = plain != 0
        assert np.array_equal(support_plain, debiased != 0)
        r_plain = np.linalg.norm(op.forward(plain) - b)
        r_debiased = np.linalg.norm(op.forward(debiased) - b)
        assert r_debiased <= r_plain + 1e-12

    def test_bb_variant_reaches_same_solution(self):
        op, b, tau = random_instance(10, 30, 15)
        basic, _ = gpsr_solve(op, b, SparseSolverConfig(tau=tau, tol=1e-13,
                                                        max_iters=10000))
        bb, rep = gpsr_solve(op, b, SparseSolverConfig(
            tau=tau, tol=1e-13, max_iters=10000, variant="bb"))
        assert np.max(np.abs(bb - basic)) < 1e-4
        assert np.all(np.isfinite(rep.objective_trace))


class TestReport:
    def test_support_count(self):
        rng = np.random.default_rng(12)
        b = rng.standard_normal(30)
        tau = 0.6 * np.max(np.abs(b))
        theta, report = gpsr_solve(IdentityOperator(), b,
                                   SparseSolverConfig(tau=tau, tol=1e-14))
        assert report.nnz == np.count_nonzero(np.abs(b) > tau)
        assert report.final_objective == pytest.approx(
            0.5 * np.sum((theta - b) ** 2) + tau * np.sum(np.abs(theta)),
            rel=1e-12)
