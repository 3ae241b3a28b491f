import numpy as np
import pytest
from scipy import ndimage, stats

from ghostimaging.errors import (DataError, DegenerateInputError,
                                 ParameterError)
from ghostimaging.fields import (SpeckleParams, estimate_speckle_fwhm,
                                 fresnel_propagate, random_phase_mask,
                                 resolution_cells, speckle_pattern,
                                 speckle_stack)


def spectral_params(rows=64, cols=64, seed=0, aperture=40.0):
    return SpeckleParams(rows, cols, seed=seed, mode="spectral",
                         aperture_diameter=aperture)


class TestSpeckleParams:
    def test_macropixel_out_of_range(self):
        with pytest.raises(ParameterError):
            SpeckleParams(8, 8, mode="fresnel", macropixel=9)
        with pytest.raises(ParameterError):
            SpeckleParams(8, 8, mode="fresnel", macropixel=0)

    def test_aperture_out_of_range(self):
        with pytest.raises(ParameterError):
            SpeckleParams(8, 8, mode="spectral", aperture_diameter=9.0)
        with pytest.raises(ParameterError):
            SpeckleParams(8, 8, mode="spectral", aperture_diameter=0.0)

    def test_bad_mode(self):
        with pytest.raises(ParameterError):
            SpeckleParams(8, 8, mode="thermal")

    def test_default_aperture_is_full_grid(self):
        assert SpeckleParams(16, 24, mode="spectral").aperture == 16.0


class TestRandomPhaseMask:
    def test_single_block_is_global_phase(self):
        params = SpeckleParams(16, 16, seed=3, mode="fresnel", macropixel=16)
        field = random_phase_mask(params, 0)
        assert np.allclose(np.abs(field), 1.0)
        assert np.allclose(field, field[0, 0])

    def test_unit_magnitude(self):
        params = SpeckleParams(32, 48, seed=1, mode="fresnel", macropixel=5)
        field = random_phase_mask(params, 2)
        assert field.shape == (32, 48)
        assert np.allclose(np.abs(field), 1.0)

    def test_deterministic(self):
        params = SpeckleParams(32, 32, seed=11, mode="fresnel", macropixel=4)
        a = random_phase_mask(params, 9)
        b = random_phase_mask(params, 9)
        assert np.array_equal(a, b)

    def test_distinct_indices_differ(self):
        params = SpeckleParams(32, 32, seed=11, mode="fresnel", macropixel=4)
        assert not np.array_equal(random_phase_mask(params, 0),
                                  random_phase_mask(params, 1))

    def test_block_phases_uniform_ks(self):
        # 64x64 / macropixel 4 -> 256 block phases; 1% KS critical value
        params = SpeckleParams(64, 64, seed=7, mode="fresnel", macropixel=4)
        field = random_phase_mask(params, 0)
        phases = np.angle(field)[::4, ::4].ravel() % (2 * np.pi)
        statistic = stats.kstest(phases / (2 * np.pi), "uniform").statistic
        assert statistic < 1.628 / np.sqrt(phases.size)

    def test_negative_index_rejected(self):
        with pytest.raises(ParameterError):
            random_phase_mask(SpeckleParams(8, 8), -1)


class TestFresnelPropagate:
    def test_zero_distance_identity(self):
        rng = np.random.default_rng(0)
        field = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        out = fresnel_propagate(field, 0.5, 0.0)
        assert np.max(np.abs(out - field)) < 1e-12

    def test_plane_wave_keeps_constant_magnitude(self):
        field = np.full((24, 24), 2.0 + 0.0j)
        out = fresnel_propagate(field, 0.5, 300.0)
        assert np.allclose(np.abs(out), 2.0, atol=1e-12)

    def test_energy_preserved(self):
        rng = np.random.default_rng(1)
        field = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
        out = fresnel_propagate(field, 0.7, 123.0)
        e_in = np.sum(np.abs(field) ** 2)
        e_out = np.sum(np.abs(out) ** 2)
        assert abs(e_out - e_in) / e_in < 1e-9

    def test_forward_then_back_is_identity(self):
        rng = np.random.default_rng(2)
        field = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        back = fresnel_propagate(fresnel_propagate(field, 0.5, 200.0),
                                 0.5, -200.0)
        assert np.max(np.abs(back - field)) / np.max(np.abs(field)) < 1e-9

    def test_nonfinite_rejected(self):
        field = np.ones((8, 8), dtype=complex)
        field[3, 3] = np.nan
        with pytest.raises(DataError):
            fresnel_propagate(field, 0.5, 10.0)


class TestSpecklePattern:
    def test_nonnegative_unit_mean(self):
        for mode_params in (spectral_params(seed=5),
                            SpeckleParams(64, 64, seed=5, mode="fresnel")):
            pattern = speckle_pattern(mode_params, 0)
            assert pattern.min() >= 0.0
            assert abs(pattern.mean() - 1.0) < 1e-12

    def test_deterministic(self):
        params = spectral_params(seed=21)
        assert np.array_equal(speckle_pattern(params, 4),
                              speckle_pattern(params, 4))

    def test_stack_matches_individual_patterns(self):
        for params in (spectral_params(seed=13),
                       SpeckleParams(32, 32, seed=13, mode="fresnel")):
            stack = speckle_stack(params, 6)
            for i in range(6):
                assert np.allclose(stack[i], speckle_pattern(params, i),
                                   atol=1e-12)

    def test_contrast_near_unity(self):
        # fully developed speckle: std/mean ~ 1, averaged over realizations
        for params in (spectral_params(seed=3),
                       SpeckleParams(64, 64, seed=3, mode="fresnel")):
            stack = speckle_stack(params, 100)
            contrast = (stack.std(axis=(1, 2)) / stack.mean(axis=(1, 2))).mean()
            assert 0.95 < contrast < 1.05

    def test_realizations_uncorrelated(self):
        stack = speckle_stack(spectral_params(seed=17), 101)
        flat = stack.reshape(101, -1)
        flat = flat - flat.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(flat, axis=1)
        corr = [abs(flat[i] @ flat[i + 1] / (norms[i] * norms[i + 1]))
                for i in range(100)]
        assert np.mean(corr) < 0.1


class TestEstimateFwhm:
    def test_white_noise_near_one_pixel(self):
        rng = np.random.default_rng(0)
        fwhm = estimate_speckle_fwhm(rng.random((100, 64, 64)))
        assert 0.8 <= fwhm <= 1.3

    def test_full_aperture_speckle_near_one_pixel(self):
        params = SpeckleParams(64, 64, seed=0, mode="spectral")
        fwhm = estimate_speckle_fwhm(speckle_stack(params, 100))
        assert 0.8 <= fwhm <= 1.3

    @pytest.mark.parametrize("sigma", [1.5, 2.0, 3.0])
    def test_gaussian_autocorrelation_oracle(self, sigma):
        # smoothing white noise with a gaussian of sigma/sqrt(2) gives an
        # autocorrelation gaussian of width sigma; FWHM = 2.3548 sigma
        rng = np.random.default_rng(42)
        kernel = sigma / np.sqrt(2.0)
        patterns = np.array([
            ndimage.gaussian_filter(rng.standard_normal((64, 64)), kernel,
                                    mode="wrap")
            for _ in range(200)])
        fwhm = estimate_speckle_fwhm(patterns)
        expected = 2.354820045 * sigma
        assert abs(fwhm - expected) / expected < 0.05

    def test_tuned_speckle_hits_target_grain_size(self):
        params = spectral_params(seed=0, aperture=40.0)
        fwhm = estimate_speckle_fwhm(speckle_stack(params, 100))
        assert abs(fwhm - 1.53) <= 0.1
        cells = resolution_cells(4096, fwhm)
        assert abs(cells - 1750) <= 0.015 * 1750

    def test_constant_patterns_rejected(self):
        with pytest.raises(DegenerateInputError):
            estimate_speckle_fwhm(np.ones((5, 16, 16)))


class TestResolutionCells:
    def test_reference_values(self):
        assert abs(resolution_cells(4096, 1.53) - 1750) <= 1
        assert abs(resolution_cells(5320, 2.01) - 1317) <= 1
        assert resolution_cells(100, 1.0) == 100

    def test_invalid_inputs(self):
        with pytest.raises(ParameterError):
            resolution_cells(0, 1.0)
        with pytest.raises(ParameterError):
            resolution_cells(100, 0.0)
