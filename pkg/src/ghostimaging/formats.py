"""File formats: PGM images, binary ensemble/image containers, JSON manifests.

Containers are little-endian and bit-exact:

* ``GIEN`` ensemble: magic ``GIEN``, version u16, rows/cols/m u32, seed u64,
  noise_sigma f64, m bucket values f64, then m*rows*cols pattern samples f32
  row-major per pattern.  Patterns are stored f32 to halve file size; buckets
  stay f64 so solver inputs keep full precision.
* ``GIMG`` raw image: magic ``GIMG``, version u16, rows/cols u32, rows*cols
  samples f64 row-major.  Used as the lossless sidecar next to quantized PGM
  output.

PGM support covers P2 (ASCII) and P5 (binary) at 8 or 16 bits.
"""

import json
import struct

import numpy as np

from .errors import FormatError, ParameterError, UnsupportedDepthError

GIEN_MAGIC = b"GIEN"
GIMG_MAGIC = b"GIMG"
CONTAINER_VERSION = 1


# ---------------------------------------------------------------------------
# PGM
# ---------------------------------------------------------------------------

def _pgm_tokens(data: bytes):
    """Yield header tokens, skipping whitespace and # comments."""
    pos = 0
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            pos = n if end < 0 else end + 1
        else:
            start = pos
            while pos < n and not data[pos:pos + 1].isspace():
                pos += 1
            yield data[start:pos], pos


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a P2/P5 PGM; returns (integer samples as (rows, cols), maxval)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = _pgm_tokens(data)
    try:
        magic, _ = next(tokens)
    except StopIteration:
        raise FormatError(f"{path}: empty file") from None
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM file (magic {magic!r})")
    try:
        width, _ = next(tokens)
        height, _ = next(tokens)
        maxval, after = next(tokens)
        width, height, maxval = int(width), int(height), int(maxval)
    except (StopIteration, ValueError):
        raise FormatError(f"{path}: malformed PGM header") from None
    if width < 1 or height < 1:
        raise FormatError(f"{path}: invalid dimensions {width}x{height}")
    if maxval < 1:
        raise FormatError(f"{path}: invalid maxval {maxval}")
    if maxval > 65535:
        raise UnsupportedDepthError(f"{path}: maxval {maxval} exceeds 16-bit")

    count = width * height
    if magic == b"P2":
        try:
            values = np.array(data[after:].split()[:count], dtype=np.uint32)
        except ValueError:
            raise FormatError(f"{path}: non-numeric P2 sample") from None
        if values.size != count:
            raise FormatError(f"{path}: expected {count} samples, "
                              f"got {values.size}")
    else:
        # Exactly one whitespace byte separates maxval from binary samples.
        raster = data[after + 1:]
        if maxval < 256:
            if len(raster) < count:
                raise FormatError(f"{path}: truncated P5 raster")
            values = np.frombuffer(raster[:count], dtype=np.uint8
                                   ).astype(np.uint32)
        else:
            if len(raster) < 2 * count:
                raise FormatError(f"{path}: truncated P5 raster")
            values = np.frombuffer(raster[:2 * count], dtype=">u2"
                                   ).astype(np.uint32)
    if values.max(initial=0) > maxval:
        raise FormatError(f"{path}: sample exceeds declared maxval")
    return values.reshape(height, width), maxval


def write_pgm(path, img: np.ndarray, maxval: int = 65535) -> None:
    """Write a [0, 1] image as binary P5, quantized to the given maxval."""
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ParameterError("image must be 2D")
    if not np.all(np.isfinite(img)):
        raise ParameterError("image contains non-finite values")
    if img.min() < -1e-9 or img.max() > 1 + 1e-9:
        raise ParameterError("image values must lie in [0, 1]")
    if not (1 <= maxval <= 65535):
        raise ParameterError("maxval must lie in [1, 65535]")
    quant = np.rint(np.clip(img, 0.0, 1.0) * maxval).astype(np.uint32)
    rows, cols = img.shape
    header = f"P5\n{cols} {rows}\n{maxval}\n".encode("ascii")
    if maxval < 256:
        raster = quant.astype(np.uint8).tobytes()
    else:
        raster = quant.astype(">u2").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(raster)


def load_image(path) -> np.ndarray:
    """Read a PGM and map samples linearly onto [0, 1]."""
    values, maxval = read_pgm(path)
    return values.astype(float) / maxval


# ---------------------------------------------------------------------------
# GIEN / GIMG containers
# ---------------------------------------------------------------------------

def write_ensemble(path, ensemble) -> None:
    """Serialize a MeasurementEnsemble to the GIEN container."""
    patterns = np.ascontiguousarray(ensemble.patterns, dtype=np.float32)
    buckets = np.ascontiguousarray(ensemble.buckets, dtype=np.float64)
    m, rows, cols = patterns.shape
    with open(path, "wb") as fh:
        fh.write(GIEN_MAGIC)
        fh.write(struct.pack("<HIIIQd", CONTAINER_VERSION, rows, cols, m,
                             ensemble.seed, float(ensemble.noise_sigma)))
        fh.write(buckets.astype("<f8").tobytes())
        fh.write(patterns.astype("<f4").tobytes())


def read_ensemble(path):
    """Load a GIEN container back into a MeasurementEnsemble.

    Patterns come back as float64 promoted from the stored f32 samples, so
    reconstructions from a file can differ from in-memory ones at the f32
    rounding level.
    """
    from .measurement import MeasurementEnsemble

    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != GIEN_MAGIC:
        raise FormatError(f"{path}: bad magic, not a GIEN file")
    header_size = 4 + struct.calcsize("<HIIIQd")
    if len(data) < header_size:
        raise FormatError(f"{path}: truncated GIEN header")
    version, rows, cols, m, seed, noise_sigma = struct.unpack(
        "<HIIIQd", data[4:header_size])
    if version != CONTAINER_VERSION:
        raise FormatError(f"{path}: unsupported GIEN version {version}")
    need = header_size + 8 * m + 4 * m * rows * cols
    if len(data) != need:
        raise FormatError(f"{path}: GIEN size mismatch "
                          f"(expected {need} bytes, got {len(data)})")
    buckets = np.frombuffer(data, dtype="<f8", count=m, offset=header_size)
    patterns = np.frombuffer(data, dtype="<f4", count=m * rows * cols,
                             offset=header_size + 8 * m)
    return MeasurementEnsemble(
        patterns=patterns.reshape(m, rows, cols).astype(np.float64),
        buckets=buckets.astype(np.float64),
        noise_sigma=noise_sigma,
        seed=seed,
    )


def write_raw_image(path, img: np.ndarray) -> None:
    """Serialize a real image losslessly to the GIMG container."""
    img = np.ascontiguousarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ParameterError("image must be 2D")
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(GIMG_MAGIC)
        fh.write(struct.pack("<HII", CONTAINER_VERSION, rows, cols))
        fh.write(img.astype("<f8").tobytes())


def read_raw_image(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != GIMG_MAGIC:
        raise FormatError(f"{path}: bad magic, not a GIMG file")
    header_size = 4 + struct.calcsize("<HII")
    if len(data) < header_size:
        raise FormatError(f"{path}: truncated GIMG header")
    version, rows, cols = struct.unpack("<HII", data[4:header_size])
    if version != CONTAINER_VERSION:
        raise FormatError(f"{path}: unsupported GIMG version {version}")
    if len(data) != header_size + 8 * rows * cols:
        raise FormatError(f"{path}: GIMG size mismatch")
    img = np.frombuffer(data, dtype="<f8", offset=header_size)
    return img.reshape(rows, cols).astype(np.float64)


def load_any_image(path) -> np.ndarray:
    """Read either a GIMG container or a PGM, whichever the magic says."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == GIMG_MAGIC:
        return read_raw_image(path)
    return load_image(path)


# ---------------------------------------------------------------------------
# Manifests
# ---------------------------------------------------------------------------

def write_manifest(path, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid manifest JSON: {exc}") from None
