"""The three reconstruction engines: correlation, least squares, compressed
sensing.

* Correlation: the weighted superposition of the illumination patterns with
  mean-subtracted bucket weights, (1/M) * sum_r (B_r - <B>) * I_r.
* Least squares: minimum-norm solution of ``forward(x) = B`` by conjugate
  gradients on the (lightly Tikhonov-stabilized) normal equations; exact
  when M >= N_pix, the patterns are in general position, and there is no
  noise.
* Compressed sensing: L1-penalized solve in the orthonormal DCT coefficient
  domain via the gradient-projection solver, then transform back.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .gpsr import SolveReport, SparseSolverConfig, gpsr_solve
from .measurement import MeasurementEnsemble
from .transforms import dct2_forward, dct2_inverse

_TIKHONOV_EPS = 1e-10
_GRAM_PIXEL_LIMIT = 2048  # precompute A^T A below this many pixels


class SensingOperator:
    """Matrix-free bucket measurement operator and its adjoint.

    ``forward(x)`` maps an image to its M bucket values (one inner product
    per pattern); ``adjoint(b)`` maps M weights back to the image-domain
    superposition sum_r b_r * I_r.
    """

    def __init__(self, patterns: np.ndarray):
        patterns = np.asarray(patterns, dtype=np.float64)
        if patterns.ndim != 3:
            raise ParameterError("patterns must be an (m, rows, cols) array")
        self.m = patterns.shape[0]
        self.image_shape = patterns.shape[1:]
        self._flat = patterns.reshape(self.m, -1)

    @property
    def n_pix(self) -> int:
        return self._flat.shape[1]

    def forward(self, img: np.ndarray) -> np.ndarray:
        img = np.asarray(img, dtype=float)
        if img.shape != self.image_shape:
            raise ParameterError(
                f"image shape {img.shape} != {self.image_shape}")
        return self._flat @ img.ravel()

    def adjoint(self, buckets: np.ndarray) -> np.ndarray:
        buckets = np.asarray(buckets, dtype=float)
        if buckets.shape != (self.m,):
            raise ParameterError(f"expected {self.m} bucket values")
        return (self._flat.T @ buckets).reshape(self.image_shape)


class CoefficientOperator:
    """The sensing operator composed with the inverse DCT.

    Maps a DCT coefficient plane theta to bucket space:
    ``forward(theta) = A(idct(theta))``.  With the orthonormal transform the
    adjoint is ``dct(A^T r)``.
    """

    def __init__(self, op: SensingOperator):
        self._op = op
        self.image_shape = op.image_shape

    def forward(self, theta: np.ndarray) -> np.ndarray:
        return self._op.forward(dct2_inverse(theta))

    def adjoint(self, residual: np.ndarray) -> np.ndarray:
        return dct2_forward(self._op.adjoint(residual))


@dataclass
class LeastSquaresReport:
    iterations: int
    residual_norm: float        # ||forward(x) - B|| / ||B||
    converged: bool


def gi_reconstruct(ensemble: MeasurementEnsemble) -> np.ndarray:
    """Correlation reconstruction: (1/M) sum_r (B_r - <B>) I_r, unscaled."""
    op = SensingOperator(ensemble.patterns)
    weights = ensemble.buckets - ensemble.buckets.mean()
    return op.adjoint(weights) / ensemble.m


def ls_reconstruct(ensemble: MeasurementEnsemble, cg_iters: int = 20000,
                   cg_tol: float = 1e-14
                   ) -> tuple[np.ndarray, LeastSquaresReport]:
    """Minimum-norm least-squares solution of forward(x) = B.

    Conjugate gradients on ``(A^T A + eps I) x = A^T B`` with eps = 1e-10,
    started from zero so the iterates stay in the row space of A (hence the
    minimum-norm solution on underdetermined data).  Stops once the
    normal-equation residual falls below ``cg_tol`` relative to ``A^T B``;
    running out of iterations returns the best iterate with
    ``converged=False``.
    """
    if cg_iters < 1:
        raise ParameterError("cg_iters must be at least 1")
    op = SensingOperator(ensemble.patterns)
    b = ensemble.buckets
    n = op.n_pix

    gram = None
    if n <= _GRAM_PIXEL_LIMIT:
        gram = op._flat.T @ op._flat
        gram[np.diag_indices_from(gram)] += _TIKHONOV_EPS

    def apply_normal(x_flat):
        if gram is not None:
            return gram @ x_flat
        img = x_flat.reshape(op.image_shape)
        return (op.adjoint(op.forward(img)).ravel()
                + _TIKHONOV_EPS * x_flat)

    rhs = op.adjoint(b).ravel()
    rhs_norm = float(np.linalg.norm(rhs))
    x = np.zeros(n)
    if rhs_norm == 0.0:
        report = LeastSquaresReport(0, 0.0, True)
        return x.reshape(op.image_shape), report

    residual = rhs.copy()
    direction = residual.copy()
    rs_old = float(residual @ residual)
    stop = (cg_tol * rhs_norm) ** 2
    best_x, best_rs = x.copy(), rs_old
    converged = False
    iterations = 0
    for iterations in range(1, cg_iters + 1):
        ad = apply_normal(direction)
        denom = float(direction @ ad)
        if denom <= 0:
            break
        step = rs_old / denom
        x += step * direction
        residual -= step * ad
        rs_new = float(residual @ residual)
        if rs_new < best_rs:
            best_rs, best_x = rs_new, x.copy()
        if rs_new <= stop:
            converged = True
            break
        direction = residual + (rs_new / rs_old) * direction
        rs_old = rs_new

    img = best_x.reshape(op.image_shape)
    b_norm = float(np.linalg.norm(b))
    rel = (float(np.linalg.norm(op.forward(img) - b)) / b_norm
           if b_norm > 0 else 0.0)
    return img, LeastSquaresReport(iterations, rel, converged)


def default_tau(op, b: np.ndarray) -> float:
    """One tenth of the structure correlation scale, 0.1 * ||A^T (b - <b>)||_inf.

    The classic 0.1 * ||A^T b||_inf rule assumes measurement vectors without
    a large common offset.  Speckle patterns have unit mean, so ||A^T b||_inf
    is dominated by the DC coefficient (three orders of magnitude above the
    structure here) and the raw rule would keep nothing but DC.  Subtracting
    the bucket mean removes exactly that DC term and nothing else, leaving
    the scale the 10% rule was meant for.
    """
    b = np.asarray(b, dtype=float)
    centered = b - b.mean()
    if not np.any(centered):
        return 0.0
    return 0.1 * float(np.max(np.abs(op.adjoint(centered))))


def cs_reconstruct(ensemble: MeasurementEnsemble,
                   config: SparseSolverConfig | None = None,
                   center: bool = False
                   ) -> tuple[np.ndarray, SolveReport]:
    """Compressed-sensing reconstruction: L1-minimal DCT coefficients.

    Solves ``min 0.5 ||A_psi theta - B||^2 + tau ||theta||_1`` with
    ``A_psi = forward o idct`` and returns the image ``idct(theta*)``.
    Buckets and patterns are used raw by default; ``center=True`` subtracts
    the ensemble means from both (occasionally useful because the speckle DC
    offset slows L1 solvers).  With ``config=None`` the weight tau defaults
    to :func:`default_tau` on the actual data.
    """
    patterns = ensemble.patterns
    b = ensemble.buckets
    if center:
        patterns = patterns - patterns.mean(axis=0)[None, :, :]
        b = b - b.mean()
    op = CoefficientOperator(SensingOperator(patterns))

    if config is None:
        tau = default_tau(op, b)
        if tau == 0.0:
            # buckets carry no structure (zero or constant): zero image
            f0 = 0.5 * float(b @ b)
            report = SolveReport(iterations=0, final_objective=f0,
                                 objective_trace=np.array([f0]),
                                 converged=True, nnz=0)
            return np.zeros(ensemble.shape), report
        config = SparseSolverConfig(tau=tau)

    theta, report = gpsr_solve(op, b, config)
    return dct2_inverse(theta), report
