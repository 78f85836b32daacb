import math

import numpy as np
import pytest

from hazelift.metrics import (
    avg_gradient,
    bwar,
    cef,
    colourfulness,
    full_reference,
    hdi,
    mssim,
    rag,
    visible_edge_ratio_qe,
)


def mssim_oracle(a, b, k1=0.01, k2=0.03):
    """Windowed-statistics brute force over every valid 11x11 position."""
    x = np.arange(11) - 5
    g1 = np.exp(-(x ** 2) / (2 * 1.5 ** 2))
    win = np.outer(g1, g1)
    win /= win.sum()
    c1, c2 = k1 * k1, k2 * k2
    h, w = a.shape
    vals = []
    for i in range(h - 10):
        for j in range(w - 10):
            wa = a[i:i + 11, j:j + 11]
            wb = b[i:i + 11, j:j + 11]
            mu_a = (win * wa).sum()
            mu_b = (win * wb).sum()
            var_a = (win * wa * wa).sum() - mu_a ** 2
            var_b = (win * wb * wb).sum() - mu_b ** 2
            cov = (win * wa * wb).sum() - mu_a * mu_b
            vals.append(((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                        ((mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)))
    return float(np.mean(vals))


class TestAvgGradient:
    def test_constant_is_zero(self):
        assert avg_gradient(np.full((8, 8), 0.3)) == 0.0

    def test_linear_ramp(self):
        w = 64
        g = np.tile(np.arange(w) / w, (16, 1))
        assert avg_gradient(g) == pytest.approx(1 / w, rel=1e-12)

    def test_rag_identity(self, rng):
        g = rng.random((16, 16))
        assert rag(g, g) == 1.0

    def test_rag_flat_original_is_sentinel(self, rng):
        assert math.isinf(rag(np.full((8, 8), 0.5), rng.random((8, 8))))


class TestHdi:
    def test_identity_is_zero(self, rng):
        img = rng.random((12, 12, 3))
        assert hdi(img, img) == 0.0

    def test_uniform_rotation_by_ten_degrees(self):
        from hazelift.image import hsv_to_rgb
        h = np.full((8, 8), 30.0 / 360.0)
        s = np.full((8, 8), 0.8)
        v = np.full((8, 8), 0.9)
        a = hsv_to_rgb(np.stack([h, s, v], axis=-1))
        b = hsv_to_rgb(np.stack([h + 10.0 / 360.0, s, v], axis=-1))
        assert hdi(a, b) == pytest.approx(10.0, abs=1e-6)

    def test_wraparound(self):
        from hazelift.image import hsv_to_rgb
        s = np.full((4, 4), 1.0)
        v = np.full((4, 4), 1.0)
        a = hsv_to_rgb(np.stack([np.full((4, 4), 359.0 / 360.0), s, v], axis=-1))
        b = hsv_to_rgb(np.stack([np.full((4, 4), 1.0 / 360.0), s, v], axis=-1))
        assert hdi(a, b) == pytest.approx(2.0, abs=1e-6)

    def test_achromatic_pair_scores_zero(self):
        a = np.full((6, 6, 3), 0.4)
        b = np.full((6, 6, 3), 0.7)
        assert hdi(a, b) == 0.0


class TestColourfulness:
    def test_grayscale_is_zero(self, rng):
        g = rng.random((10, 10))
        img = np.dstack([g, g, g])
        assert colourfulness(img) == 0.0

    def test_uniform_pure_red(self):
        img = np.zeros((8, 8, 3))
        img[..., 0] = 1.0
        expected = 0.3 * math.sqrt(255.0 ** 2 + 127.5 ** 2)
        assert colourfulness(img) == pytest.approx(expected, rel=1e-12)

    def test_cef_identity(self, rng):
        img = rng.random((10, 10, 3))
        assert cef(img, img) == 1.0

    def test_cef_achromatic_original_is_sentinel(self, rng):
        gray = np.dstack([np.full((8, 8), 0.5)] * 3)
        assert math.isinf(cef(gray, rng.random((8, 8, 3))))

    def test_invariant_under_pixel_permutation(self, rng):
        img = rng.random((12, 12, 3))
        flat = img.reshape(-1, 3)
        shuffled = flat[rng.permutation(len(flat))].reshape(img.shape)
        assert colourfulness(shuffled) == pytest.approx(colourfulness(img), rel=1e-12)


class TestQe:
    def test_identity_is_one(self, rng):
        g = rng.random((16, 16))
        assert visible_edge_ratio_qe(g, g) == 1.0

    def test_contrast_boost_does_not_lose_edges(self, rng):
        g = 0.25 + 0.5 * rng.random((24, 24))
        boosted = np.clip(0.5 + 2.0 * (g - 0.5), 0.0, 1.0)
        assert visible_edge_ratio_qe(g, boosted) >= 1.0

    def test_flat_original_is_sentinel(self, rng):
        assert math.isinf(visible_edge_ratio_qe(np.full((8, 8), 0.5), rng.random((8, 8))))


class TestBwar:
    def test_mid_gray_is_zero(self):
        assert bwar(np.full((8, 8), 0.5)) == 0.0

    def test_all_white_is_one(self):
        assert bwar(np.ones((8, 8))) == 1.0

    def test_half_black_half_gray(self):
        g = np.full((10, 10), 0.5)
        g[:5] = 0.0
        assert bwar(g) == 0.5


class TestMssim:
    def test_identity_is_one(self, rng):
        g = rng.random((16, 16))
        assert mssim(g, g) == pytest.approx(1.0, abs=1e-9)

    def test_inversion_scores_below_identity(self, rng):
        g = 0.25 + 0.5 * rng.random((16, 16))
        assert mssim(g, 1.0 - g) < mssim(g, g)

    def test_matches_brute_force_oracle(self, rng):
        a = rng.random((16, 16))
        b = np.clip(a + rng.normal(0, 0.1, a.shape), 0.0, 1.0)
        got = mssim(a, b)
        want = mssim_oracle(a, b)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_symmetric(self, rng):
        a, b = rng.random((16, 16)), rng.random((16, 16))
        assert mssim(a, b) == pytest.approx(mssim(b, a), rel=1e-12)

    def test_too_small_rejected(self, rng):
        with pytest.raises(ValueError):
            mssim(rng.random((8, 8)), rng.random((8, 8)))


class TestFullReference:
    def test_identical_images(self, rng):
        g = rng.random((8, 8))
        psnr, mae, mse = full_reference(g, g)
        assert math.isinf(psnr) and mae == 0.0 and mse == 0.0

    def test_constant_offset(self):
        a = np.full((16, 16), 100 / 255)
        b = np.full((16, 16), 110 / 255)
        psnr, mae, mse = full_reference(a, b)
        assert mae == pytest.approx(10.0, rel=1e-9)
        assert mse == pytest.approx(100.0, rel=1e-9)
        assert psnr == pytest.approx(10 * math.log10(65025 / 100), rel=1e-9)

    def test_matches_direct_definition(self, rng):
        a, b = rng.random((16, 16, 3)), rng.random((16, 16, 3))
        psnr, mae, mse = full_reference(a, b)
        diff = (a - b) * 255.0
        assert mse == pytest.approx(float((diff ** 2).mean()), rel=1e-9)
        assert mae == pytest.approx(float(np.abs(diff).mean()), rel=1e-9)
        assert psnr == pytest.approx(10 * math.log10(255 ** 2 / mse), rel=1e-9)

    def test_symmetric(self, rng):
        a, b = rng.random((8, 8)), rng.random((8, 8))
        assert full_reference(a, b)[1:] == full_reference(b, a)[1:]

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(ValueError):
            full_reference(rng.random((8, 8)), rng.random((8, 9)))
