"""FFT/DCT entry points honoring the GHOSTIMAGING_THREADS override."""

import os

from scipy import fft as _sp_fft


def fft_workers() -> int:
    """Worker count for scipy.fft calls; env var GHOSTIMAGING_THREADS wins."""
    raw = os.environ.get("GHOSTIMAGING_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def fft2(a, axes=(-2, -1)):
    return _sp_fft.fft2(a, axes=axes, workers=fft_workers())


def ifft2(a, axes=(-2, -1)):
    return _sp_fft.ifft2(a, axes=axes, workers=fft_workers())


def dctn_ortho(a):
    return _sp_fft.dctn(a, type=2, norm="ortho", workers=fft_workers())


def idctn_ortho(a):
    return _sp_fft.idctn(a, type=2, norm="ortho", workers=fft_workers())
