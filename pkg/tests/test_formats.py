import numpy as np
import pytest

from ghostimaging.errors import FormatError
from ghostimaging.fields import SpeckleParams
from ghostimaging.formats import (read_ensemble, read_manifest,
                                  read_raw_image, write_ensemble,
                                  write_manifest, write_raw_image, load_image,
                                  load_any_image, write_pgm)
from ghostimaging.measurement import acquire
from ghostimaging.phantoms import DEFAULT_DOUBLE_SLIT, double_slit


def small_ensemble(seed=0, noise=0.0):
    obj = double_slit(DEFAULT_DOUBLE_SLIT)
    params = SpeckleParams(64, 64, seed=seed, mode="spectral",
                           aperture_diameter=40.0)
    return acquire(obj, params, 5, noise_sigma=noise, noise_seed=2)


class TestEnsembleContainer:
    def test_round_trip_byte_exact(self, tmp_path):
        ens = small_ensemble(noise=0.01)
        p1, p2 = tmp_path / "a.gien", tmp_path / "b.gien"
        write_ensemble(p1, ens)
        back = read_ensemble(p1)
        write_ensemble(p2, back)
        assert p1.read_bytes() == p2.read_bytes()

    def test_fields_survive(self, tmp_path):
        ens = small_ensemble(seed=7, noise=0.05)
        path = tmp_path / "e.gien"
        write_ensemble(path, ens)
        back = read_ensemble(path)
        assert back.m == ens.m
        assert back.shape == ens.shape
        assert back.seed == 7
        assert back.noise_sigma == 0.05
        assert np.array_equal(back.buckets, ens.buckets)
        # patterns quantized to f32 on disk
        assert np.array_equal(back.patterns,
                              ens.patterns.astype(np.float32).astype(float))

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "x.gien"
        path.write_bytes(b"NOPE" + b"\0" * 40)
        with pytest.raises(FormatError):
            read_ensemble(path)

    def test_truncation_detected(self, tmp_path):
        ens = small_ensemble()
        path = tmp_path / "t.gien"
        write_ensemble(path, ens)
        data = path.read_bytes()
        path.write_bytes(data[:-7])
        with pytest.raises(FormatError):
            read_ensemble(path)


class TestRawImageContainer:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(1)
        img = rng.standard_normal((13, 17))
        path = tmp_path / "i.gimg"
        write_raw_image(path, img)
        assert np.array_equal(read_raw_image(path), img)

    def test_round_trip_byte_exact(self, tmp_path):
        rng = np.random.default_rng(2)
        img = rng.standard_normal((6, 4))
        p1, p2 = tmp_path / "a.gimg", tmp_path / "b.gimg"
        write_raw_image(p1, img)
        write_raw_image(p2, read_raw_image(p1))
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_any_dispatches_on_magic(self, tmp_path):
        rng = np.random.default_rng(3)
        img = rng.random((5, 5))
        gimg = tmp_path / "a.gimg"
        pgm = tmp_path / "a.pgm"
        write_raw_image(gimg, img)
        write_pgm(pgm, img)
        assert np.array_equal(load_any_image(gimg), img)
        assert np.max(np.abs(load_any_image(pgm) - img)) <= 1 / (2 * 65535)


class TestPgm:
    def test_p2_p5_cross_load_equal(self, tmp_path):
        rng = np.random.default_rng(4)
        values = rng.integers(0, 256, size=(6, 9))
        p2 = tmp_path / "a.pgm"
        p2.write_text("P2\n9 6\n255\n"
                      + " ".join(str(v) for v in values.ravel()))
        p5 = tmp_path / "b.pgm"
        p5.write_bytes(b"P5\n9 6\n255\n"
                       + values.astype(np.uint8).tobytes())
        assert np.array_equal(load_image(p2), load_image(p5))

    def test_sixteen_bit_big_endian(self, tmp_path):
        path = tmp_path / "w.pgm"
        path.write_bytes(b"P5\n2 1\n65535\n" + bytes([0x01, 0x00, 0xFF, 0xFF]))
        img = load_image(path)
        assert img[0, 0] == 256 / 65535
        assert img[0, 1] == 1.0

    def test_sample_above_maxval_rejected(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_text("P2\n2 1\n10\n3 11\n")
        with pytest.raises(FormatError):
            load_image(path)


class TestManifest:
    def test_lossless_round_trip(self, tmp_path):
        manifest = {
            "command": ["pipeline", "--preset", "fig2-256"],
            "params": {"tau": 673.5819374652311, "m": 256, "seed": 3,
                       "debias": False, "note": None},
            "results": {"snr_ratio": 8.251234567890123e+00,
                        "mse": 1.2e-300},
        }
        path = tmp_path / "m.json"
        write_manifest(path, manifest)
        assert read_manifest(path) == manifest

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("{not json")
        with pytest.raises(FormatError):
            read_manifest(path)
