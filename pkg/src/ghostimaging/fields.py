"""Pseudothermal speckle simulation and speckle statistics.

Two ways to generate intensity patterns:

* ``fresnel`` mode mimics an SLM setup: a random blockwise-constant phase
  mask is propagated to the object plane with the angular-spectrum Fresnel
  propagator and the arrival intensity is taken.
* ``spectral`` mode synthesizes speckle directly by filling a disk in the
  frequency plane with unit-magnitude random phases.  The disk diameter
  controls the speckle grain size, which makes it the right mode whenever a
  specific autocorrelation FWHM has to be pinned.

All units are pixel-normalized: wavelengths and distances are expressed so
that ``wavelength_px * distance_px`` has units of px^2, and frequency grids
are the standard DFT grids in cycles/pixel (negative frequencies aliased).
Every operation is a pure function of its arguments; realizations are keyed
by ``(seed, realization_index)`` so any single pattern can be regenerated
without producing its predecessors.
"""

from dataclasses import dataclass

import numpy as np

from ._fft import fft2, ifft2
from .errors import DataError, DegenerateInputError, ParameterError

MODES = ("spectral", "fresnel")

# Empirical ratio grid_size/aperture_diameter -> autocorrelation FWHM for the
# spectral disk, measured with estimate_speckle_fwhm (see tune_aperture).
_DISK_FWHM_CONST = 1.03


@dataclass(frozen=True)
class SpeckleParams:
    """Parameters of one family of speckle realizations.

    ``aperture_diameter`` (spectral mode) is measured in frequency-grid
    pixels; ``None`` means the full inscribed disk of diameter
    ``min(rows, cols)``.  ``macropixel`` (fresnel mode) is the side of the
    constant-phase cells of the simulated phase mask, in pixels.
    """

    rows: int
    cols: int
    seed: int = 0
    mode: str = "spectral"
    aperture_diameter: float | None = None
    macropixel: int = 4
    wavelength_px: float = 0.5
    distance_px: float = 400.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ParameterError("grid must have at least one pixel per axis")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0 <= self.seed < 2**64):
            raise ParameterError("seed must fit in an unsigned 64-bit integer")
        if self.aperture_diameter is not None:
            d = self.aperture_diameter
            if not (0 < d <= min(self.rows, self.cols)):
                raise ParameterError(
                    "aperture_diameter must lie in (0, min(rows, cols)]"
                )
        if not (1 <= self.macropixel <= min(self.rows, self.cols)):
            raise ParameterError("macropixel must lie in [1, min(rows, cols)]")
        if self.wavelength_px <= 0:
            raise ParameterError("wavelength_px must be positive")
        if self.distance_px < 0:
            raise ParameterError("distance_px must be nonnegative")

    @property
    def aperture(self) -> float:
        return (
            float(min(self.rows, self.cols))
            if self.aperture_diameter is None
            else float(self.aperture_diameter)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


def _rng(seed: int, realization_index: int) -> np.random.Generator:
    # Stream keyed by (seed, index): reproducible without predecessors.
    return np.random.default_rng([seed, realization_index])


def random_phase_mask(params: SpeckleParams, realization_index: int) -> np.ndarray:
    """Unit-magnitude field exp(i*phi) with blockwise-constant random phase.

    The phase is constant on macropixel x macropixel cells, each cell drawn
    independently uniform on [0, 2*pi) from the stream keyed by
    ``(params.seed, realization_index)``.  Same inputs give a bit-identical
    field.
    """
    if realization_index < 0:
        raise ParameterError("realization_index must be nonnegative")
    mp = params.macropixel
    b_rows = -(-params.rows // mp)
    b_cols = -(-params.cols // mp)
    rng = _rng(params.seed, realization_index)
    block_phase = rng.uniform(0.0, 2.0 * np.pi, size=(b_rows, b_cols))
    phase = np.repeat(np.repeat(block_phase, mp, axis=0), mp, axis=1)
    phase = phase[: params.rows, : params.cols]
    return np.exp(1j * phase)


def _transfer_function(rows: int, cols: int, wavelength_px: float,
                       distance_px: float) -> np.ndarray:
    fy = np.fft.fftfreq(rows)
    fx = np.fft.fftfreq(cols)
    f2 = fy[:, None] ** 2 + fx[None, :] ** 2
    return np.exp(-1j * np.pi * wavelength_px * distance_px * f2)


def fresnel_propagate(field: np.ndarray, wavelength_px: float,
                      distance_px: float) -> np.ndarray:
    """Angular-spectrum Fresnel propagation over a pixel-normalized distance.

    Multiplies the field's 2D spectrum by
    ``H(fx, fy) = exp(-i*pi*wavelength*distance*(fx^2 + fy^2))`` on the
    standard DFT frequency grid (cycles/pixel) and transforms back.  |H| = 1,
    so total energy is preserved; a negative distance undoes a positive one.
    """
    field = np.asarray(field)
    if field.ndim != 2:
        raise ParameterError("field must be a 2D array")
    if not np.all(np.isfinite(field)):
        raise DataError("field contains non-finite values")
    if wavelength_px <= 0:
        raise ParameterError("wavelength_px must be positive")
    if not np.isfinite(distance_px):
        raise ParameterError("distance_px must be finite")
    h = _transfer_function(field.shape[0], field.shape[1],
                           wavelength_px, distance_px)
    return ifft2(fft2(field.astype(np.complex128)) * h)


def _disk_mask(rows: int, cols: int, diameter: float) -> np.ndarray:
    ky = np.fft.fftfreq(rows) * rows
    kx = np.fft.fftfreq(cols) * cols
    return ky[:, None] ** 2 + kx[None, :] ** 2 <= (diameter / 2.0) ** 2


def _spectral_field(params: SpeckleParams, realization_index: int,
                    mask: np.ndarray | None = None) -> np.ndarray:
    if mask is None:
        mask = _disk_mask(params.rows, params.cols, params.aperture)
    rng = _rng(params.seed, realization_index)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=int(mask.sum()))
    spectrum = np.zeros(params.shape, dtype=np.complex128)
    spectrum[mask] = np.exp(1j * phases)
    return ifft2(spectrum)


def speckle_pattern(params: SpeckleParams, realization_index: int) -> np.ndarray:
    """One nonnegative intensity pattern, normalized to unit pixel mean."""
    if realization_index < 0:
        raise ParameterError("realization_index must be nonnegative")
    if params.mode == "fresnel":
        field = fresnel_propagate(
            random_phase_mask(params, realization_index),
            params.wavelength_px, params.distance_px,
        )
    else:
        field = _spectral_field(params, realization_index)
    intensity = np.abs(field) ** 2
    mean = intensity.mean()
    if mean <= 0:
        raise DataError("generated pattern has nonpositive mean")
    return intensity / mean


def speckle_stack(params: SpeckleParams, m: int, start: int = 0,
                  chunk: int = 256) -> np.ndarray:
    """Patterns for realization indices start..start+m-1 as an (m, rows, cols)
    array.

    Identical, pattern for pattern, to calling :func:`speckle_pattern` in a
    loop; the FFTs are just batched.
    """
    if m < 1:
        raise ParameterError("need at least one realization")
    if start < 0:
        raise ParameterError("start index must be nonnegative")
    out = np.empty((m, params.rows, params.cols))
    if params.mode == "spectral":
        mask = _disk_mask(params.rows, params.cols, params.aperture)
        n_in = int(mask.sum())
        for lo in range(0, m, chunk):
            hi = min(lo + chunk, m)
            spectra = np.zeros((hi - lo, params.rows, params.cols),
                               dtype=np.complex128)
            for i in range(lo, hi):
                rng = _rng(params.seed, start + i)
                spectra[i - lo][mask] = np.exp(
                    1j * rng.uniform(0.0, 2.0 * np.pi, size=n_in))
            fields = ifft2(spectra)
            out[lo:hi] = np.abs(fields) ** 2
    else:
        h = _transfer_function(params.rows, params.cols,
                               params.wavelength_px, params.distance_px)
        for lo in range(0, m, chunk):
            hi = min(lo + chunk, m)
            masks = np.empty((hi - lo, params.rows, params.cols),
                             dtype=np.complex128)
            for i in range(lo, hi):
                masks[i - lo] = random_phase_mask(params, start + i)
            fields = ifft2(fft2(masks) * h[None, :, :])
            out[lo:hi] = np.abs(fields) ** 2
    out /= out.mean(axis=(1, 2))[:, None, None]
    return out


def estimate_speckle_fwhm(patterns) -> float:
    """FWHM in pixels of the ensemble-averaged speckle autocorrelation.

    Averages the mean-subtracted circular autocorrelation of the patterns
    (computed through the power spectrum), radially bins the central peak in
    0.5 px annuli, and locates the half-maximum crossing by linear
    interpolation between the binned samples.
    """
    arr = np.asarray(patterns, dtype=float)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3 or arr.shape[0] < 1:
        raise ParameterError("patterns must be one or more same-shape images")
    if not np.all(np.isfinite(arr)):
        raise DataError("patterns contain non-finite values")

    centered = arr - arr.mean(axis=(1, 2))[:, None, None]
    power = np.abs(fft2(centered)) ** 2
    autocorr = ifft2(power.mean(axis=0)).real
    peak = autocorr[0, 0]
    if peak <= 0:
        raise DegenerateInputError("patterns have zero variance")
    autocorr = np.fft.fftshift(autocorr) / peak

    rows, cols = autocorr.shape
    cy, cx = rows // 2, cols // 2
    yy, xx = np.ogrid[:rows, :cols]
    radius = np.hypot(yy - cy, xx - cx)

    # 0.5 px annuli; each sample sits at the mean radius of its bin (the
    # nominal bin center would bias the profile on coarse grids).
    bin_width = 0.5
    idx = np.rint(radius / bin_width).astype(int).ravel()
    sums = np.bincount(idx, weights=autocorr.ravel())
    radius_sums = np.bincount(idx, weights=radius.ravel())
    counts = np.bincount(idx)
    nonempty = counts > 0
    centers = radius_sums[nonempty] / counts[nonempty]
    profile = sums[nonempty] / counts[nonempty]

    for i in range(1, len(profile)):
        if profile[i] < 0.5:
            r0, r1 = centers[i - 1], centers[i]
            p0, p1 = profile[i - 1], profile[i]
            r_half = r0 + (p0 - 0.5) * (r1 - r0) / (p0 - p1)
            return 2.0 * r_half
    raise DegenerateInputError("autocorrelation never falls below half maximum")


def resolution_cells(n_pix: int, fwhm: float) -> int:
    """Number of speckle-sized resolution cells covering an n_pix image."""
    if n_pix <= 0:
        raise ParameterError("n_pix must be positive")
    if not (fwhm > 0):
        raise ParameterError("fwhm must be positive")
    return int(round(n_pix / fwhm**2))


def tune_aperture(rows: int, cols: int, target_fwhm: float, seed: int = 0,
                  n_patterns: int = 50, iters: int = 12) -> float:
    """Spectral aperture diameter whose measured speckle FWHM hits a target.

    Bisects on the diameter using :func:`estimate_speckle_fwhm` over a small
    deterministic ensemble.  FWHM decreases monotonically with diameter, so a
    dozen steps pin it well below the tolerances used here.
    """
    if target_fwhm <= 0:
        raise ParameterError("target_fwhm must be positive")
    n_eff = np.sqrt(rows * cols)
    lo = max(2.0, 0.25 * _DISK_FWHM_CONST * n_eff / target_fwhm)
    hi = float(min(rows, cols))

    def measured(diam: float) -> float:
        p = SpeckleParams(rows, cols, seed=seed, mode="spectral",
                          aperture_diameter=diam)
        return estimate_speckle_fwhm(speckle_stack(p, n_patterns))

    if measured(hi) > target_fwhm:
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if measured(mid) > target_fwhm:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
