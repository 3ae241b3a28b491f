"""Pseudothermal ghost imaging toolkit.

Simulates speckle illumination and single-pixel (bucket) measurements, then
reconstructs the object by pattern correlation, least squares, or
compressed sensing with an L1 solve in the DCT domain.
"""

__version__ = "0.1.0"

from .errors import (DataError, DegenerateInputError, FormatError,
                     ParameterError, SolverDivergenceError,
                     UnsupportedDepthError)
from .fields import (SpeckleParams, estimate_speckle_fwhm, fresnel_propagate,
                     random_phase_mask, resolution_cells, speckle_pattern,
                     speckle_stack, tune_aperture)
from .gpsr import SolveReport, SparseSolverConfig, gpsr_solve, soft_threshold
from .measurement import (MeasurementEnsemble, acquire, bucket_measure,
                          simulate_grayscale_buckets)
from .metrics import RegionMasks, auto_masks, mse, normalize_affine, snr
from .phantoms import (DEFAULT_DOUBLE_SLIT, DoubleSlitSpec, aleph_phantom,
                       double_slit, glyph_phantom, load_grayscale,
                       portrait_phantom)
from .reconstruct import (CoefficientOperator, LeastSquaresReport,
                          SensingOperator, cs_reconstruct, default_tau,
                          gi_reconstruct, ls_reconstruct)
from .transforms import dct2_forward, dct2_inverse

__all__ = [
    "__version__",
    "DataError", "DegenerateInputError", "FormatError", "ParameterError",
    "SolverDivergenceError", "UnsupportedDepthError",
    "SpeckleParams", "estimate_speckle_fwhm", "fresnel_propagate",
    "random_phase_mask", "resolution_cells", "speckle_pattern",
    "speckle_stack", "tune_aperture",
    "SolveReport", "SparseSolverConfig", "gpsr_solve", "soft_threshold",
    "MeasurementEnsemble", "acquire", "bucket_measure",
    "simulate_grayscale_buckets",
    "RegionMasks", "auto_masks", "mse", "normalize_affine", "snr",
    "DEFAULT_DOUBLE_SLIT", "DoubleSlitSpec", "aleph_phantom", "double_slit",
    "glyph_phantom", "load_grayscale", "portrait_phantom",
    "CoefficientOperator", "LeastSquaresReport", "SensingOperator",
    "cs_reconstruct", "default_tau", "gi_reconstruct", "ls_reconstruct",
    "dct2_forward", "dct2_inverse",
]
