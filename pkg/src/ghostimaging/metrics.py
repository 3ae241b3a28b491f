"""Reconstruction quality metrics: SNR and MSE.

SNR follows the bright/dark-region convention: (mean over the bright mask
minus mean over the dark mask) divided by the sample standard deviation of
the dark pixels.  MSE first maps the reconstruction onto [0, 1] with a
min-max affine normalization (reconstructions carry arbitrary scale and
offset), then averages the squared difference to the reference over all
pixels.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DataError, DegenerateInputError, ParameterError

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class RegionMasks:
    """Disjoint bright (signal) and dark (background) pixel masks."""

    bright: np.ndarray
    dark: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bright", np.asarray(self.bright, dtype=bool))
        object.__setattr__(self, "dark", np.asarray(self.dark, dtype=bool))
        if self.bright.shape != self.dark.shape:
            raise ParameterError("bright and dark masks must share a shape")
        if np.any(self.bright & self.dark):
            raise ParameterError("bright and dark masks must be disjoint")
        if self.bright.sum() < 2 or self.dark.sum() < 2:
            raise ParameterError("each mask needs at least 2 pixels")


def snr(img: np.ndarray, masks: RegionMasks) -> float:
    """(mean bright - mean dark) / std(dark), sample (n-1) std."""
    img = np.asarray(img, dtype=float)
    if img.shape != masks.bright.shape:
        raise ParameterError("image shape does not match masks")
    dark = img[masks.dark]
    noise = float(dark.std(ddof=1))
    if noise == 0.0:
        raise DegenerateInputError("dark region has zero standard deviation")
    return float(img[masks.bright].mean() - dark.mean()) / noise


def normalize_affine(img: np.ndarray) -> np.ndarray:
    """Min-max map onto [0, 1]; a constant image maps to all 0.5."""
    img = np.asarray(img, dtype=float)
    if not np.all(np.isfinite(img)):
        raise DataError("image contains non-finite values")
    lo, hi = img.min(), img.max()
    if hi == lo:
        return np.full_like(img, 0.5)
    return (img - lo) / (hi - lo)


def mse(recon: np.ndarray, reference: np.ndarray) -> float:
    """Mean squared difference to the reference after affine normalization."""
    recon = np.asarray(recon, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if recon.shape != reference.shape:
        raise ParameterError(
            f"shapes differ: {recon.shape} vs {reference.shape}")
    if reference.min() < 0 or reference.max() > 1:
        raise DataError("reference values must lie in [0, 1]")
    return float(np.mean((normalize_affine(recon) - reference) ** 2))


def auto_masks(reference: np.ndarray, erode_px: int = 1) -> RegionMasks:
    """Bright/dark masks derived from a binary reference.

    Bright is the reference's 1-pixels, dark its 0-pixels, each eroded
    ``erode_px`` times with the 4-neighbor cross.  Erosion treats the area
    beyond the grid as foreground so only the bright/dark interface recedes,
    which is the point: keep the masks clear of the boundary pixels that
    speckle-limited resolution blurs.
    """
    reference = np.asarray(reference)
    if erode_px < 0:
        raise ParameterError("erode_px must be nonnegative")
    if not np.all(np.isin(np.unique(reference), (0, 1))):
        raise DataError("auto masks need a binary reference")
    bright = reference == 1
    dark = reference == 0
    if erode_px > 0:
        bright = ndimage.binary_erosion(bright, structure=_CROSS,
                                        iterations=erode_px, border_value=1)
        dark = ndimage.binary_erosion(dark, structure=_CROSS,
                                      iterations=erode_px, border_value=1)
    if bright.sum() < 2 or dark.sum() < 2:
        raise ParameterError(
            f"erode_px={erode_px} leaves fewer than 2 pixels in a mask")
    return RegionMasks(bright=bright, dark=dark)
