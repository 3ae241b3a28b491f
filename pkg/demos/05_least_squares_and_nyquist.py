"""Least squares at and below the Nyquist count, and the sqrt(M) SNR law.

Random speckle projections are almost surely linearly independent, so once
M reaches the pixel count the object is pinned down exactly by linear
algebra alone with noiseless data.  Below that count least squares only
matches the measurements, not the object, while the correlation
reconstruction improves with the square root of the measurement count.
"""

import numpy as np

from ghostimaging import (DEFAULT_DOUBLE_SLIT, DoubleSlitSpec,
                          MeasurementEnsemble, SpeckleParams, acquire,
                          auto_masks, double_slit, gi_reconstruct,
                          ls_reconstruct, snr, speckle_stack)

# %% exact recovery at M = N_pix with delta-correlated speckle
obj = double_slit(DoubleSlitSpec(rows=32, cols=32, slit_width=3,
                                 separation=8, slit_height=20))
params = SpeckleParams(32, 32, seed=0, mode="spectral")  # full aperture
print("least squares on a 32x32 object (N_pix = 1024):")
for m in (256, 512, 1024):
    ensemble = acquire(obj, params, m)
    img, report = ls_reconstruct(ensemble)
    forward = ensemble.patterns.reshape(m, -1) @ img.ravel()
    data_residual = np.linalg.norm(forward - ensemble.buckets)
    data_residual /= np.linalg.norm(ensemble.buckets)
    print(f"  M={m:5d}: object error {np.max(np.abs(img - obj)):.2e}  "
          f"data residual {data_residual:.1e}  "
          f"({report.iterations} iterations)")
print("  -> measurements are always matched; the object emerges at M >= N")

# %% correlation SNR grows like sqrt(M)
obj = double_slit(DEFAULT_DOUBLE_SLIT)
masks = auto_masks(obj, erode_px=1)
print("\ncorrelation-reconstruction SNR vs measurement count (5 seeds):")
for m in (256, 1024, 4096):
    values = []
    for seed in range(5):
        p = SpeckleParams(64, 64, seed=seed, mode="spectral",
                          aperture_diameter=40.0)
        patterns = speckle_stack(p, m)
        buckets = patterns.reshape(m, -1) @ obj.ravel()
        ens = MeasurementEnsemble(patterns, buckets)
        values.append(snr(gi_reconstruct(ens), masks))
    print(f"  M={m:5d}: SNR {np.mean(values):5.2f}")
print("  -> quadrupling M roughly doubles the SNR")
