import numpy as np
import pytest

from hazelift.thresholds import (
    BINS,
    BinaryMap,
    DegenerateMapError,
    area_counts,
    binarize,
    entropy_from_histogram,
    entropy_threshold,
    histogram_256,
    isodata_threshold,
    otsu_from_histogram,
    otsu_threshold,
)


def otsu_oracle(counts):
    """Exhaustive loop over all 256 candidate splits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    levels = np.arange(BINS, dtype=np.float64)
    best, best_k = -1.0, None
    for k in range(BINS):
        c0 = counts[:k + 1].sum()
        c1 = total - c0
        if c0 == 0 or c1 == 0:
            continue
        mu0 = (counts[:k + 1] * levels[:k + 1]).sum() / c0
        mu1 = (counts[k + 1:] * levels[k + 1:]).sum() / c1
        gap = mu0 - mu1
        sigma_b = (c0 / total) * (c1 / total) * (gap * gap)
        if sigma_b > best:
            best, best_k = sigma_b, k
    return (best_k + 0.5) / BINS


def entropy_oracle(counts):
    """Exhaustive Kapur criterion via per-class normalized entropies."""
    counts = np.asarray(counts, dtype=np.float64)
    p = counts / counts.sum()
    best, best_k = -np.inf, None
    for k in range(BINS):
        p0 = p[:k + 1].sum()
        p1 = p[k + 1:].sum()
        if p0 <= 0 or p1 <= 0:
            continue
        q0 = p[:k + 1][p[:k + 1] > 0] / p0
        q1 = p[k + 1:][p[k + 1:] > 0] / p1
        score = -(q0 * np.log(q0)).sum() - (q1 * np.log(q1)).sum()
        if score > best:
            best, best_k = score, k
    return (best_k + 0.5) / BINS


class TestOtsu:
    def test_two_value_groups_separate(self):
        g = np.array([1, 1, 1, 9, 9, 9]) / 255.0
        t = otsu_threshold(g.reshape(2, 3))
        assert (g[:3] <= t).all() and (g[3:] > t).all()
        assert t == otsu_oracle(histogram_256(g))

    def test_symmetric_spikes_separate(self):
        # every split between the spikes maximizes the criterion; the
        # smallest-t tie rule picks the lowest, which still separates them
        g = np.array([0.0] * 50 + [1.0] * 50)
        t = otsu_threshold(g)
        assert 0.0 <= t < 1.0
        assert (g[:50] <= t).all() and (g[50:] > t).all()
        assert t == otsu_oracle(histogram_256(g))

    def test_constant_map_is_degenerate(self):
        with pytest.raises(DegenerateMapError):
            otsu_threshold(np.full((4, 4), 0.37))

    def test_matches_exhaustive_oracle_on_random_histograms(self, rng):
        for _ in range(200):
            counts = rng.integers(0, 50, size=BINS)
            if (counts > 0).sum() <= 1:
                continue
            assert otsu_from_histogram(counts) == otsu_oracle(counts)

    def test_invariant_under_pixel_permutation(self, rng):
        g = rng.random(500)
        t1 = otsu_threshold(g)
        t2 = otsu_threshold(rng.permutation(g).reshape(20, 25))
        assert t1 == t2

    def test_exactly_bimodal_two_value_image(self, rng):
        lo, hi = 0.2, 0.75
        g = rng.choice([lo, hi], size=(30, 30))
        t = otsu_threshold(g)
        assert lo <= t < hi


class TestPermutationInvariance:
    def test_all_methods_ignore_pixel_order(self, rng):
        g = rng.random(400)
        shuffled = rng.permutation(g).reshape(20, 20)
        assert otsu_threshold(g) == otsu_threshold(shuffled)
        assert entropy_threshold(g) == entropy_threshold(shuffled)
        assert isodata_threshold(g) == isodata_threshold(shuffled)


class TestEntropy:
    def test_matches_exhaustive_oracle_on_random_histograms(self, rng):
        for _ in range(100):
            counts = rng.integers(0, 50, size=BINS)
            if (counts > 0).sum() <= 1:
                continue
            assert entropy_from_histogram(counts) == entropy_oracle(counts)

    def test_constant_map_is_degenerate(self):
        with pytest.raises(DegenerateMapError):
            entropy_threshold(np.full((4, 4), 0.9))

    def test_separated_uniform_blocks(self, rng):
        g = np.concatenate([rng.uniform(0.0, 0.2, 300), rng.uniform(0.8, 1.0, 300)])
        t = entropy_threshold(g)
        assert 0.2 < t < 0.8


class TestIsodata:
    def test_symmetric_bimodal_converges_to_midpoint(self):
        g = np.array([0.2] * 100 + [0.8] * 100)
        assert isodata_threshold(g) == pytest.approx(0.5, abs=1 / 512)

    def test_constant_map_is_degenerate(self):
        with pytest.raises(DegenerateMapError):
            isodata_threshold(np.full(10, 0.4))

    def test_returns_near_fixed_point_and_monotone_iteration(self, rng):
        def intermeans(vals, t):
            below = vals[vals <= t]
            above = vals[vals > t]
            return 0.5 * (below.mean() + above.mean())

        for _ in range(20):
            vals = rng.random(rng.integers(50, 400))
            t = isodata_threshold(vals)
            # the stop rule bounds the last step by 1/512; one further map
            # application moves at most (1 + L) * step with contraction L < 1
            assert abs(intermeans(vals, t) - t) < 2 / 512
            # the intermeans map is monotone after the first step
            seq = [float(vals.mean())]
            for _ in range(30):
                seq.append(intermeans(vals, seq[-1]))
            steps = np.diff(seq[1:])
            assert (steps >= -1e-12).all() or (steps <= 1e-12).all()


class TestBinarize:
    def test_all_above_threshold(self):
        b = binarize(np.full((3, 3), 0.9), 0.5)
        assert (b.black_count, b.white_count) == (0, 9)

    def test_all_below_threshold(self):
        b = binarize(np.full((3, 3), 0.2), 0.5)
        assert (b.black_count, b.white_count) == (9, 0)

    def test_mixed_counts(self):
        g = np.concatenate([np.full(10, 0.9), np.full(90, 0.1)])
        b = binarize(g, 0.5)
        assert (b.black_count, b.white_count) == (90, 10)
        assert area_counts(b) == (90, 10)

    def test_counts_always_sum_to_total(self, rng):
        for _ in range(10):
            g = rng.random((7, 11))
            b = binarize(g, rng.random())
            assert b.black_count + b.white_count == g.size
            assert b.white_count == int(b.bits.sum())

    def test_threshold_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            binarize(np.zeros((2, 2)), 1.5)

    def test_checkerboard_splits_evenly(self):
        g = np.indices((4, 4)).sum(axis=0) % 2
        b = binarize(g.astype(float), 0.5)
        assert area_counts(b) == (8, 8)

    def test_from_bits_recount(self, rng):
        bits = rng.random((6, 6)) > 0.5
        b = BinaryMap.from_bits(bits)
        assert b.white_count == int(bits.sum())
        assert b.black_count == int((~bits).sum())
