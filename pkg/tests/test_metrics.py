import numpy as np
import pytest

from autocorr_restore import (
    DegenerateSignal,
    DomainError,
    ShapeError,
    align_to_reference,
    cross_correlate,
    i_divergence,
    make_phantom,
    reverse_axes,
    snr_db,
)
from autocorr_restore.metrics import SNR_CAP_DB


class TestSnrDb:
    def test_identical_signals_capped(self):
        g = np.random.default_rng(0).uniform(0, 1, (8, 8))
        assert snr_db(g, g) == SNR_CAP_DB

    def test_unit_ratio_is_zero_db(self):
        s_mu = np.ones((4, 4))
        assert snr_db(s_mu, np.zeros((4, 4))) == pytest.approx(0.0, abs=1e-12)

    def test_ten_percent_perturbation(self):
        # s_mu = 1.1 s gives 20*log10(1.1/0.1)
        rng = np.random.default_rng(1)
        s = rng.uniform(0.1, 1, (8, 8))
        assert snr_db(1.1 * s, s) == pytest.approx(20 * np.log10(11.0), rel=1e-9)

    def test_joint_scale_invariance(self):
        rng = np.random.default_rng(2)
        s_mu = rng.uniform(0, 1, (6, 6))
        s = rng.uniform(0, 1, (6, 6))
        for c in (1e-6, 7.0, 1e8):
            assert snr_db(c * s_mu, c * s) == pytest.approx(snr_db(s_mu, s), rel=1e-12)

    def test_zero_signal_raises(self):
        with pytest.raises(DegenerateSignal):
            snr_db(np.zeros((3, 3)), np.ones((3, 3)))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            snr_db(np.ones((2, 2)), np.ones((2, 3)))


class TestIDivergence:
    def test_equal_distributions(self):
        g = np.random.default_rng(3).uniform(0.1, 1, (5, 5))
        assert i_divergence(g, g) == pytest.approx(0.0, abs=1e-14)

    def test_mass_collapse_value(self):
        # direct evaluation: 1*ln(1/0.5) + (1 - 1) = ln 2
        p = np.array([[1.0, 0.0]])
        q = np.array([[0.5, 0.5]])
        assert i_divergence(p, q) == pytest.approx(np.log(2.0), rel=1e-12)

    def test_skewed_distribution_value(self):
        # 0.5*ln 2 + 0.5*ln(2/3) + 0
        p = np.array([[0.5, 0.5]])
        q = np.array([[0.25, 0.75]])
        expected = 0.5 * np.log(2.0) + 0.5 * np.log(2.0 / 3.0)
        assert i_divergence(p, q) == pytest.approx(expected, rel=1e-12)

    def test_nonnegative_under_perturbations(self):
        rng = np.random.default_rng(4)
        base = rng.uniform(0.05, 1, (8, 8))
        base /= base.sum()
        for scale in (1e-4, 1e-2, 0.3):
            for _ in range(10):
                q = np.abs(base + scale * rng.normal(size=base.shape))
                assert i_divergence(base, q) >= 0.0
                if not np.allclose(base, q):
                    assert i_divergence(base, q) > 0.0

    def test_unnormalized_measures_allowed(self):
        p = np.array([[2.0, 1.0]])
        q = np.array([[1.0, 2.0]])
        expected = 2 * np.log(2.0) + 1 * np.log(0.5) + 3 - 3
        assert i_divergence(p, q) == pytest.approx(expected, rel=1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(5)
        p = rng.uniform(0, 1, (6, 6))
        q = rng.uniform(0.1, 1, (6, 6))
        perm = rng.permutation(36)
        p2 = p.ravel()[perm].reshape(6, 6)
        q2 = q.ravel()[perm].reshape(6, 6)
        assert i_divergence(p, q) == pytest.approx(i_divergence(p2, q2), rel=1e-12)

    def test_zero_q_with_mass_raises(self):
        with pytest.raises(DomainError):
            i_divergence(np.ones((2, 2)), np.zeros((2, 2)))


class TestAlignToReference:
    def test_recovers_pure_shift(self):
        ref = make_phantom("satellite-like", (16, 16), 0)
        rec = np.roll(ref, (3, 5), axis=(0, 1))
        aligned, shift, mirrored = align_to_reference(rec, ref)
        assert shift == (-3, -5)
        assert not mirrored
        np.testing.assert_allclose(aligned, ref, atol=1e-12)

    def test_detects_mirror(self):
        ref = make_phantom("satellite-like", (16, 16), 0)
        rec = reverse_axes(ref)
        aligned, _shift, mirrored = align_to_reference(rec, ref)
        assert mirrored
        np.testing.assert_allclose(aligned, ref, atol=1e-12)

    def test_property_random_shift_and_mirror(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            ref = rng.uniform(0, 1, (16, 16))
            dy, dx = int(rng.integers(0, 16)), int(rng.integers(0, 16))
            mirror = bool(rng.integers(0, 2))
            rec = reverse_axes(ref) if mirror else ref
            rec = np.roll(rec, (dy, dx), axis=(0, 1))
            aligned, _shift, mirrored = align_to_reference(rec, ref)
            assert mirrored == mirror
            np.testing.assert_allclose(aligned, ref, atol=1e-12)

    def test_alignment_never_hurts_correlation(self):
        rng = np.random.default_rng(7)
        ref = rng.uniform(0, 1, (12, 12))
        rec = np.roll(rng.permuted(ref, axis=0), (5, 2), axis=(0, 1))
        aligned, _, _ = align_to_reference(rec, ref)
        peak_before = cross_correlate(rec, ref)[0, 0]
        peak_after = cross_correlate(aligned, ref)[0, 0]
        assert peak_after >= peak_before - 1e-12
