import numpy as np
import pytest

from autocorr_restore import (
    ShapeError,
    ZeroMass,
    crop_center,
    embed_pad,
    normalize_total,
    reverse_axes,
    solver_shape,
)


class TestNormalizeTotal:
    def test_uniform_grid(self):
        g = np.full((2, 2), 5.0)
        np.testing.assert_allclose(normalize_total(g), np.full((2, 2), 0.25))

    def test_idempotent_on_unit_mass(self):
        rng = np.random.default_rng(0)
        g = rng.uniform(0, 1, (5, 7))
        g /= g.sum()
        np.testing.assert_allclose(normalize_total(g), g, rtol=1e-12)

    def test_proportionality(self):
        g = np.array([[1.0, 3.0], [0.0, 0.0]])
        np.testing.assert_allclose(
            normalize_total(g), np.array([[0.25, 0.75], [0.0, 0.0]])
        )

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        g = rng.uniform(0, 1, (6, 6))
        for c in (1e-7, 0.5, 3.0, 1e9):
            np.testing.assert_allclose(
                normalize_total(c * g), normalize_total(g), rtol=1e-12
            )

    def test_unit_sum_within_tolerance(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            g = rng.uniform(0, 10, (4, 9))
            assert abs(normalize_total(g).sum() - 1.0) < 1e-12

    def test_zero_mass_raises(self):
        with pytest.raises(ZeroMass):
            normalize_total(np.zeros((3, 3)))


class TestEmbedPad:
    def test_ones_into_doubled(self):
        out = embed_pad(np.ones((2, 2)), (4, 4))
        assert out.shape == (4, 4)
        assert out[:2, :2].sum() == 4.0
        assert out.sum() == 4.0

    def test_own_shape_identity(self):
        g = np.arange(6.0).reshape(2, 3)
        np.testing.assert_array_equal(embed_pad(g, (2, 3)), g)

    def test_delta_stays_at_origin(self):
        g = np.zeros((3, 3))
        g[0, 0] = 1.0
        out = embed_pad(g, (6, 6))
        assert out[0, 0] == 1.0
        assert out.sum() == 1.0

    def test_sum_preserved_exactly(self):
        # math.fsum is exact, so padding with true zeros cannot change it
        import math

        rng = np.random.default_rng(3)
        for _ in range(20):
            g = rng.uniform(0, 1, (5, 4))
            assert math.fsum(embed_pad(g, (11, 9)).ravel()) == math.fsum(g.ravel())

    def test_smaller_target_raises(self):
        with pytest.raises(ShapeError):
            embed_pad(np.ones((4, 4)), (3, 5))


class TestCropCenter:
    def test_center_window(self):
        g = np.arange(16.0).reshape(4, 4)
        np.testing.assert_array_equal(
            crop_center(g, (2, 2)), np.array([[5.0, 6.0], [9.0, 10.0]])
        )

    def test_own_shape_identity(self):
        g = np.arange(12.0).reshape(3, 4)
        np.testing.assert_array_equal(crop_center(g, (3, 4)), g)

    def test_round_trip_with_recentering(self):
        # pad to double support, roll so the content is centered, crop back
        rng = np.random.default_rng(4)
        for _ in range(10):
            g = rng.uniform(0, 1, (8, 8))
            padded = embed_pad(g, (16, 16))
            recentered = np.roll(padded, (4, 4), axis=(0, 1))
            np.testing.assert_array_equal(crop_center(recentered, (8, 8)), g)

    def test_never_increases_mass(self):
        rng = np.random.default_rng(5)
        g = rng.uniform(0, 1, (9, 9))
        assert crop_center(g, (4, 5)).sum() <= g.sum()

    def test_larger_target_raises(self):
        with pytest.raises(ShapeError):
            crop_center(np.ones((2, 2)), (3, 3))


class TestReverseAxes:
    def test_origin_delta_fixed_point(self):
        g = np.zeros((4, 4))
        g[0, 0] = 1.0
        np.testing.assert_array_equal(reverse_axes(g), g)

    def test_unit_shift_maps_to_wrapped_negative(self):
        g = np.zeros((4, 4))
        g[1, 0] = 1.0
        out = reverse_axes(g)
        assert out[3, 0] == 1.0
        assert out.sum() == 1.0

    def test_involution(self):
        rng = np.random.default_rng(6)
        g = rng.normal(size=(5, 8))
        np.testing.assert_array_equal(reverse_axes(reverse_axes(g)), g)

    def test_preserves_sum_and_extrema(self):
        rng = np.random.default_rng(7)
        g = rng.normal(size=(6, 7))
        out = reverse_axes(g)
        assert out.sum() == pytest.approx(g.sum(), rel=1e-15)
        assert out.min() == g.min()
        assert out.max() == g.max()


def test_solver_shape_doubles():
    assert solver_shape((3, 5)) == (6, 10)
    with pytest.raises(ShapeError):
        solver_shape((0, 5))
