import numpy as np
import pytest

from ghostimaging.errors import DataError
from ghostimaging.phantoms import portrait_phantom
from ghostimaging.transforms import dct2_forward, dct2_inverse


def naive_dct2(img):
    """Brute-force orthonormal DCT-II, O(n^4)."""
    rows, cols = img.shape
    out = np.zeros((rows, cols))
    for u in range(rows):
        for v in range(cols):
            total = 0.0
            for x in range(rows):
                for y in range(cols):
                    total += (img[x, y]
                              * np.cos(np.pi * (2 * x + 1) * u / (2 * rows))
                              * np.cos(np.pi * (2 * y + 1) * v / (2 * cols)))
            cu = np.sqrt(1.0 / rows) if u == 0 else np.sqrt(2.0 / rows)
            cv = np.sqrt(1.0 / cols) if v == 0 else np.sqrt(2.0 / cols)
            out[u, v] = cu * cv * total
    return out


class TestForward:
    def test_constant_image_is_pure_dc(self):
        c = 0.37
        img = np.full((8, 6), c)
        coeffs = dct2_forward(img)
        assert coeffs[0, 0] == pytest.approx(c * np.sqrt(48), abs=1e-12)
        off_dc = coeffs.copy()
        off_dc[0, 0] = 0.0
        assert np.max(np.abs(off_dc)) < 1e-12

    def test_parseval(self):
        rng = np.random.default_rng(0)
        img = rng.standard_normal((16, 12))
        coeffs = dct2_forward(img)
        e_img, e_coef = np.sum(img ** 2), np.sum(coeffs ** 2)
        assert abs(e_img - e_coef) / e_img < 1e-10

    @pytest.mark.parametrize("shape", [(4, 4), (7, 5)])
    def test_matches_naive_oracle(self, shape):
        rng = np.random.default_rng(1)
        img = rng.standard_normal(shape)
        assert np.max(np.abs(dct2_forward(img) - naive_dct2(img))) < 1e-12

    def test_nonfinite_rejected(self):
        img = np.ones((4, 4))
        img[0, 0] = np.inf
        with pytest.raises(DataError):
            dct2_forward(img)


class TestInverse:
    def test_round_trip_identity(self):
        rng = np.random.default_rng(2)
        img = rng.standard_normal((32, 24))
        back = dct2_inverse(dct2_forward(img))
        assert np.max(np.abs(back - img)) < 1e-12

    def test_dc_delta_gives_constant_one(self):
        coeffs = np.zeros((5, 5))
        coeffs[0, 0] = np.sqrt(25)
        img = dct2_inverse(coeffs)
        assert np.allclose(img, 1.0, atol=1e-12)

    def test_adjoint_identity(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((12, 9))
        y = rng.standard_normal((12, 9))
        lhs = np.sum(dct2_forward(x) * y)
        rhs = np.sum(x * dct2_inverse(y))
        assert abs(lhs - rhs) / max(abs(lhs), 1.0) < 1e-10


def test_shipped_grayscale_is_compressible():
    # keep the top 10% coefficients by magnitude -> < 10% relative L2 error
    img = portrait_phantom()
    coeffs = dct2_forward(img)
    k = int(0.10 * coeffs.size)
    cutoff = np.sort(np.abs(coeffs).ravel())[-k]
    kept = np.where(np.abs(coeffs) >= cutoff, coeffs, 0.0)
    rec = dct2_inverse(kept)
    assert np.linalg.norm(rec - img) / np.linalg.norm(img) < 0.10
