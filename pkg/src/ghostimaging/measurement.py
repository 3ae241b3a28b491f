"""Bucket-detector measurement model.

A bucket value is the total intensity transmitted through the object:
the pixel sum of pattern * object (unit pixel area).  An ensemble is M
patterns plus their M bucket values; optional Gaussian noise is added to the
buckets with standard deviation ``noise_sigma * mean(|buckets|)`` so one
noise knob spans objects of different brightness.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError
from .fields import SpeckleParams, speckle_stack


@dataclass
class MeasurementEnsemble:
    """M intensity patterns with their bucket values and provenance."""

    patterns: np.ndarray            # (m, rows, cols) float64
    buckets: np.ndarray             # (m,) float64
    noise_sigma: float = 0.0
    seed: int = 0
    params: SpeckleParams | None = None
    object_name: str | None = field(default=None)

    def __post_init__(self):
        self.patterns = np.asarray(self.patterns, dtype=np.float64)
        self.buckets = np.asarray(self.buckets, dtype=np.float64)
        if self.patterns.ndim != 3:
            raise ParameterError("patterns must be an (m, rows, cols) array")
        if self.buckets.shape != (self.patterns.shape[0],):
            raise ParameterError("need exactly one bucket per pattern")
        if self.patterns.shape[0] < 1:
            raise ParameterError("ensemble needs at least one measurement")
        if not np.all(np.isfinite(self.buckets)):
            raise DataError("buckets contain non-finite values")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be nonnegative")

    @property
    def m(self) -> int:
        return self.patterns.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.patterns.shape[1:]

    @property
    def n_pix(self) -> int:
        return self.patterns.shape[1] * self.patterns.shape[2]


def bucket_measure(pattern: np.ndarray, obj: np.ndarray) -> float:
    """Total transmitted intensity: sum over pixels of pattern * object."""
    pattern = np.asarray(pattern, dtype=float)
    obj = np.asarray(obj, dtype=float)
    if pattern.shape != obj.shape:
        raise ParameterError(
            f"pattern shape {pattern.shape} != object shape {obj.shape}")
    return float(np.sum(pattern * obj))


def simulate_grayscale_buckets(patterns, obj: np.ndarray) -> np.ndarray:
    """Bucket values for an existing pattern list against a new object.

    Reuses the patterns instead of regenerating them, i.e. the simulated
    measurement over previously recorded illumination.
    """
    patterns = np.asarray(patterns, dtype=float)
    obj = np.asarray(obj, dtype=float)
    if patterns.ndim != 3 or patterns.shape[1:] != obj.shape:
        raise ParameterError(
            f"patterns of shape {patterns.shape} do not match object "
            f"{obj.shape}")
    return patterns.reshape(patterns.shape[0], -1) @ obj.ravel()


def acquire(obj: np.ndarray, params: SpeckleParams, m: int,
            noise_sigma: float = 0.0, noise_seed: int = 0,
            object_name: str | None = None) -> MeasurementEnsemble:
    """Generate patterns 0..m-1, measure buckets, optionally add noise.

    Deterministic given ``params.seed`` and ``noise_seed``: the same call
    reproduces the exact same ensemble.
    """
    obj = np.asarray(obj, dtype=float)
    if m < 1:
        raise ParameterError("m must be at least 1")
    if noise_sigma < 0:
        raise ParameterError("noise_sigma must be nonnegative")
    if obj.shape != params.shape:
        raise ParameterError(
            f"object shape {obj.shape} does not match grid {params.shape}")
    patterns = speckle_stack(params, m)
    buckets = simulate_grayscale_buckets(patterns, obj)
    if noise_sigma > 0:
        rng = np.random.default_rng([noise_seed])
        scale = noise_sigma * np.mean(np.abs(buckets))
        buckets = buckets + rng.normal(0.0, scale, size=m)
    return MeasurementEnsemble(patterns=patterns, buckets=buckets,
                               noise_sigma=noise_sigma, seed=params.seed,
                               params=params, object_name=object_name)
