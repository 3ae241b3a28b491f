"""Test objects: double slits, binary glyphs, grayscale references.

All phantoms are transmission-function images with values in [0, 1].  Two
assets ship with the package: a 70x76 binary glyph (``aleph.pgm``) and a
76x70 synthetic grayscale portrait (``portrait.pgm``) whose values span the
full [0, 1] range.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DataError, ParameterError
from .formats import load_image

ORIENTATIONS = ("vertical", "horizontal")


@dataclass(frozen=True)
class DoubleSlitSpec:
    """Two parallel slits, centered on the grid.

    ``separation`` is center-to-center in pixels and must exceed
    ``slit_width``.  When ``cols - slit_width - separation`` is odd the pair
    cannot be centered exactly at the requested separation; the construction
    keeps exact mirror symmetry and lets the achieved separation differ by
    one pixel.
    """

    rows: int
    cols: int
    slit_width: int
    separation: int
    slit_height: int
    orientation: str = "vertical"

    def __post_init__(self):
        for name in ("rows", "cols", "slit_width", "separation", "slit_height"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ParameterError(f"{name} must be a positive integer")
        if self.separation <= self.slit_width:
            raise ParameterError("separation must exceed slit_width")
        if self.orientation not in ORIENTATIONS:
            raise ParameterError(
                f"orientation must be one of {ORIENTATIONS}")


#: Geometry used by the presets: a 220 um wide / 500 um spaced double-slit
#: plate mapped onto a 64x64 grid, preserving the ratio as 6:14 px.
DEFAULT_DOUBLE_SLIT = DoubleSlitSpec(rows=64, cols=64, slit_width=6,
                                     separation=14, slit_height=40)


def double_slit(spec: DoubleSlitSpec) -> np.ndarray:
    """Binary double-slit transmission image for the given geometry."""
    rows, cols = spec.rows, spec.cols
    if spec.orientation == "horizontal":
        flipped = DoubleSlitSpec(cols, rows, spec.slit_width, spec.separation,
                                 spec.slit_height, "vertical")
        return double_slit(flipped).T

    w, s, h = spec.slit_width, spec.separation, spec.slit_height
    left = int(round((cols - w - s) / 2.0))
    right = cols - left - w  # mirror image of the left slit
    r0 = (rows - h) // 2
    if left < 0 or right + w > cols or r0 < 0:
        raise ParameterError("slits do not fit inside the grid")

    img = np.zeros((rows, cols))
    img[r0:r0 + h, left:left + w] = 1.0
    img[r0:r0 + h, right:right + w] = 1.0
    return img


def glyph_phantom(rows: int, cols: int, glyph: np.ndarray) -> np.ndarray:
    """Use a binary mask as a transmission image."""
    glyph = np.asarray(glyph)
    if glyph.shape != (rows, cols):
        raise ParameterError(
            f"glyph shape {glyph.shape} does not match ({rows}, {cols})")
    values = np.unique(glyph)
    if not np.all(np.isin(values, (0, 1))):
        raise DataError("glyph mask must contain only 0 and 1")
    return glyph.astype(np.float64)


def load_grayscale(path) -> np.ndarray:
    """Load an 8/16-bit grayscale PGM mapped linearly onto [0, 1]."""
    return load_image(path)


def _asset(name: str):
    return resources.files("ghostimaging") / "data" / name


def aleph_phantom() -> np.ndarray:
    """The shipped 70x76 binary glyph as a transmission image."""
    with resources.as_file(_asset("aleph.pgm")) as path:
        mask = load_image(path)
    return glyph_phantom(mask.shape[0], mask.shape[1], np.rint(mask))


def portrait_phantom() -> np.ndarray:
    """The shipped 76x70 grayscale reference image, values spanning [0, 1]."""
    with resources.as_file(_asset("portrait.pgm")) as path:
        return load_image(path)
