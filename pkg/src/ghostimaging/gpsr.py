"""Gradient-projection solver for the L1-penalized least-squares problem.

Minimizes ``F(theta) = 0.5 * ||A theta - b||^2 + tau * ||theta||_1`` by the
classic split ``theta = u - v`` with ``u, v >= 0``, projecting the split
variables onto the nonnegative orthant.  The basic (monotone) variant picks
the candidate step from the exact minimizer of the quadratic model along the
projected gradient and backtracks until an Armijo-style sufficient-decrease
condition holds, which makes the objective trace non-increasing by
construction.  A Barzilai-Borwein step variant is available behind a flag;
it is faster on some problems but not monotone.

The operator ``A`` is matrix-free: anything exposing ``forward(theta)`` and
``adjoint(residual)`` with the adjoint identity
``<forward(x), y> == <x, adjoint(y)>``.  ``theta`` may have any array shape;
only elementwise arithmetic and the two operator calls touch it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SolverDivergenceError

_ALPHA_MIN = 1e-30
_ALPHA_MAX = 1e30
_MAX_BACKTRACKS = 60
_DIVERGENCE_FACTOR = 1e3
_SUPPORT_REL_TOL = 1e-8


@dataclass(frozen=True)
class SparseSolverConfig:
    """Knobs of the gradient-projection solve.

    ``tau`` weighs the L1 term; ``tol`` stops the iteration once the relative
    objective change drops below it; ``beta``/``mu`` are the backtracking
    shrink factor and sufficient-decrease constant.  ``debias`` refits the
    recovered support by least squares (conjugate gradients, capped at
    ``debias_cg_iters``) with off-support entries pinned at zero.
    """

    tau: float
    max_iters: int = 2000
    tol: float = 1e-8
    beta: float = 0.5
    mu: float = 0.1
    debias: bool = False
    debias_cg_iters: int = 50
    variant: str = "basic"

    def __post_init__(self):
        if not (self.tau > 0):
            raise ParameterError("tau must be positive")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be at least 1")
        if not (self.tol > 0):
            raise ParameterError("tol must be positive")
        if not (0 < self.beta < 1):
            raise ParameterError("beta must lie in (0, 1)")
        if not (0 < self.mu < 1):
            raise ParameterError("mu must lie in (0, 1)")
        if self.debias_cg_iters < 1:
            raise ParameterError("debias_cg_iters must be at least 1")
        if self.variant not in ("basic", "bb"):
            raise ParameterError("variant must be 'basic' or 'bb'")


@dataclass
class SolveReport:
    """What the solver did: iterations, objective trace, support size."""

    iterations: int
    final_objective: float
    objective_trace: np.ndarray
    converged: bool
    nnz: int

    def __post_init__(self):
        self.objective_trace = np.asarray(self.objective_trace, dtype=float)


def soft_threshold(x: np.ndarray, tau: float) -> np.ndarray:
    """sign(x) * max(|x| - tau, 0); closed-form solution for orthonormal A."""
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def _count_support(theta: np.ndarray) -> int:
    peak = np.max(np.abs(theta), initial=0.0)
    if peak == 0.0:
        return 0
    return int(np.count_nonzero(np.abs(theta) > _SUPPORT_REL_TOL * peak))


def _debias_on_support(op, b, theta, max_iters):
    """Least-squares refit over the recovered support, CG on the normal
    equations, zeros kept off-support."""
    support = theta != 0.0
    if not np.any(support):
        return theta

    def forward_s(x_s):
        full = np.zeros_like(theta)
        full[support] = x_s
        return op.forward(full)

    def adjoint_s(r):
        return op.adjoint(r)[support]

    x = theta[support].copy()
    residual = adjoint_s(b - forward_s(x))
    direction = residual.copy()
    rs_old = float(residual @ residual)
    if rs_old == 0.0:
        return theta
    rs_stop = 1e-20 * rs_old
    for _ in range(max_iters):
        ad = adjoint_s(forward_s(direction))
        denom = float(direction @ ad)
        if denom <= 0:
            break
        step = rs_old / denom
        x += step * direction
        residual -= step * ad
        rs_new = float(residual @ residual)
        if rs_new <= rs_stop:
            break
        direction = residual + (rs_new / rs_old) * direction
        rs_old = rs_new
    out = np.zeros_like(theta)
    out[support] = x
    return out


def gpsr_solve(op, b: np.ndarray, config: SparseSolverConfig
               ) -> tuple[np.ndarray, SolveReport]:
    """Solve min 0.5*||A theta - b||^2 + tau*||theta||_1.

    Returns ``(theta, report)``.  Raises :class:`SolverDivergenceError` if
    the objective exceeds 1e3 times its initial value; hitting ``max_iters``
    without meeting ``tol`` returns the best iterate with
    ``report.converged = False``.
    """
    b = np.asarray(b, dtype=float)
    tau = config.tau

    theta0 = np.zeros_like(op.adjoint(b))
    u = np.maximum(theta0, 0.0)
    v = np.maximum(-theta0, 0.0)
    residual = op.forward(u - v) - b
    grad_q = op.adjoint(residual)
    f_split = 0.5 * float(residual @ residual) + tau * float(np.sum(u + v))

    trace = [f_split]
    f_initial = max(f_split, np.finfo(float).tiny)
    converged = False
    alpha_bb = 1.0
    iterations = 0

    for iterations in range(1, config.max_iters + 1):
        gu = grad_q + tau
        gv = -grad_q + tau

        # Projected gradient: zero where the constraint is active and the
        # gradient pushes further into it.
        du = np.where((u > 0) | (gu < 0), gu, 0.0)
        dv = np.where((v > 0) | (gv < 0), gv, 0.0)
        g_norm2 = float(np.sum(du * du) + np.sum(dv * dv))
        if g_norm2 == 0.0:
            converged = True
            break

        if config.variant == "bb":
            alpha0 = alpha_bb
        else:
            a_dir = op.forward(du - dv)
            curvature = float(a_dir @ a_dir)
            alpha0 = g_norm2 / curvature if curvature > 0 else _ALPHA_MAX
        alpha = float(np.clip(alpha0, _ALPHA_MIN, _ALPHA_MAX))

        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            u_new = np.maximum(u - alpha * gu, 0.0)
            v_new = np.maximum(v - alpha * gv, 0.0)
            decrease = float(np.sum(gu * (u - u_new)) +
                             np.sum(gv * (v - v_new)))
            if decrease <= 0.0:
                break
            residual_new = op.forward(u_new - v_new) - b
            f_new = (0.5 * float(residual_new @ residual_new)
                     + tau * float(np.sum(u_new + v_new)))
            if f_new <= f_split - config.mu * decrease:
                accepted = True
                break
            alpha *= config.beta
        if not accepted:
            converged = True  # step collapsed: at a stationary point
            break

        if config.variant == "bb":
            s_u, s_v = u_new - u, v_new - v
            y = op.adjoint(op.forward(s_u - s_v))
            ss = float(np.sum(s_u * s_u) + np.sum(s_v * s_v))
            sy = float(np.sum(s_u * y) - np.sum(s_v * y))
            alpha_bb = float(np.clip(ss / sy if sy > 0 else _ALPHA_MAX,
                                     _ALPHA_MIN, _ALPHA_MAX))

        u, v, residual = u_new, v_new, residual_new
        grad_q = op.adjoint(residual)
        f_prev, f_split = f_split, f_new
        trace.append(f_split)

        if f_split > _DIVERGENCE_FACTOR * f_initial:
            raise SolverDivergenceError(
                f"objective grew to {f_split:.3e} from {f_initial:.3e}")
        if f_prev > 0 and abs(f_prev - f_split) <= config.tol * f_prev:
            converged = True
            break

    theta = u - v
    if config.debias:
        theta = _debias_on_support(op, b, theta, config.debias_cg_iters)

    final_residual = op.forward(theta) - b
    final_objective = (0.5 * float(final_residual @ final_residual)
                       + tau * float(np.sum(np.abs(theta))))
    report = SolveReport(iterations=iterations,
                         final_objective=final_objective,
                         objective_trace=np.asarray(trace),
                         converged=converged,
                         nnz=_count_support(theta))
    return theta, report
