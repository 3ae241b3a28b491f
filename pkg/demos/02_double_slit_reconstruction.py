"""Double-slit imaging: correlation vs compressed-sensing reconstruction.

Simulates the bucket-detector experiment on a binary double slit with
speckle tuned to 1.53 px FWHM (about 1750 resolution cells on the 64x64
grid), then reconstructs from M = 256 and M = 512 measurements, far below
the Nyquist count.  The L1 solve in the DCT basis lifts the SNR several
times above the plain correlation image.  Reconstructions are written as
PGM files next to this script.
"""

from pathlib import Path

from ghostimaging import (DEFAULT_DOUBLE_SLIT, SpeckleParams, acquire,
                          auto_masks, cs_reconstruct, double_slit,
                          gi_reconstruct, mse, normalize_affine, snr)
from ghostimaging.formats import write_pgm

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

obj = double_slit(DEFAULT_DOUBLE_SLIT)
masks = auto_masks(obj, erode_px=1)
write_pgm(OUT / "slit_object.pgm", obj)

print(f"object: 64x64 double slit, width 6 px, separation 14 px")
print(f"{'M':>5} {'snr_gi':>8} {'snr_cs':>8} {'gain':>6} "
      f"{'mse_gi':>8} {'mse_cs':>8} {'iters':>6}")

for m in (256, 512):
    params = SpeckleParams(64, 64, seed=0, mode="spectral",
                           aperture_diameter=40.0)
    ensemble = acquire(obj, params, m)

    img_gi = gi_reconstruct(ensemble)
    img_cs, report = cs_reconstruct(ensemble)

    s_gi, s_cs = snr(img_gi, masks), snr(img_cs, masks)
    print(f"{m:>5} {s_gi:>8.2f} {s_cs:>8.2f} {s_cs / s_gi:>6.2f} "
          f"{mse(img_gi, obj):>8.4f} {mse(img_cs, obj):>8.4f} "
          f"{report.iterations:>6}")

    write_pgm(OUT / f"slit_gi_m{m}.pgm", normalize_affine(img_gi))
    write_pgm(OUT / f"slit_cs_m{m}.pgm", normalize_affine(img_cs))

print(f"\nPGM files in {OUT}")
