import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vidcorrupt import spatial
from vidcorrupt.severity import RAIN_DENSITY_LENGTH


def mid_gray(h=64, w=64):
    return np.full((h, w, 3), 0.5)


def random_frame(seed, h=64, w=64, lo=0.0, hi=1.0):
    return np.random.default_rng(seed).uniform(lo, hi, (h, w, 3))


class TestShotNoise:
    def test_all_black_stays_black(self):
        out = spatial.shot_noise(np.zeros((16, 16, 3)), photons=3, seed=0)
        assert np.all(out == 0.0)

    def test_many_photons_limit_is_identity(self):
        # law of large numbers: Poisson(x*N)/N -> x as N grows
        frame = mid_gray()
        out = spatial.shot_noise(frame, photons=10**7, seed=1)
        assert np.mean(np.abs(out - frame)) < 1e-3

    def test_deterministic_and_seed_sensitive(self):
        frame = random_frame(0)
        a = spatial.shot_noise(frame, 12, seed=42)
        b = spatial.shot_noise(frame, 12, seed=42)
        assert np.array_equal(a, b)
        digests = {spatial.shot_noise(frame, 12, seed=s).tobytes() for s in range(10)}
        assert len(digests) == 10

    def test_severity_five_photons_add_heavy_noise(self):
        frame = mid_gray()
        out = spatial.shot_noise(frame, photons=3, seed=0)
        # Poisson(1.5)/3 has std ~0.41 before clipping
        assert np.std(out - frame) > 0.2

    def test_rejects_zero_photons(self):
        with pytest.raises(ValueError):
            spatial.shot_noise(mid_gray(), 0, seed=0)


class TestGaussianNoise:
    def test_std_zero_is_identity(self):
        frame = random_frame(1)
        out = spatial.gaussian_noise(frame, 0.0, seed=5)
        assert np.array_equal(out, frame)
        out[0, 0, 0] = 0.0  # returned copy, not the input

    def test_sample_std_matches_parameter(self):
        frame = mid_gray(600, 600)  # > 1e6 samples
        out = spatial.gaussian_noise(frame, 0.1, seed=7)
        assert abs(np.std(out - frame) - 0.1) < 0.005

    def test_deterministic(self):
        frame = random_frame(2)
        assert np.array_equal(
            spatial.gaussian_noise(frame, 0.2, seed=3),
            spatial.gaussian_noise(frame, 0.2, seed=3),
        )


class TestRain:
    def test_zero_streaks_is_identity(self):
        # 16x16 frame: 65 * 256 / 224^2 rounds to 0 streaks
        frame = random_frame(3, 16, 16)
        out = spatial.rain(frame, density=65, length=10, seed=0)
        assert np.array_equal(out, frame)

    def test_streak_pixel_count_grows_with_severity(self):
        frame = np.zeros((224, 224, 3))
        counts = []
        for density, length in RAIN_DENSITY_LENGTH:
            out = spatial.rain(frame, density, length, seed=11, slant_deg=8.0)
            counts.append(int(np.count_nonzero(out[..., 0])))
        assert counts == sorted(counts)
        assert counts[0] < counts[-1]

    def test_streaks_only_brighten(self):
        frame = random_frame(4, 224, 224, hi=0.5)
        out = spatial.rain(frame, 65, 30, seed=2)
        assert np.all(out >= frame - 1e-12)

    def test_deterministic_given_seed_and_slant(self):
        frame = random_frame(5, 224, 224)
        a = spatial.rain(frame, 100, 60, seed=9, slant_deg=-12.0)
        b = spatial.rain(frame, 100, 60, seed=9, slant_deg=-12.0)
        assert np.array_equal(a, b)

    def test_slant_derived_from_clip_seed_is_bounded(self):
        angles = {spatial.rain_slant_deg(s) for s in range(50)}
        assert all(-20.0 <= a <= 20.0 for a in angles)
        assert len(angles) == 50


class TestFog:
    def test_near_zero_thickness_is_identity(self):
        frame = random_frame(6)
        out = spatial.fog(frame, thickness=1e-9, smoothness=2.0, seed=0)
        assert np.max(np.abs(out - frame)) < 1e-6

    def test_mean_luminance_increases(self):
        for seed in range(5):
            frame = random_frame(seed, hi=0.6)  # head-room for the haze
            out = spatial.fog(frame, 1.5, 2.0, seed=seed)
            assert out.mean() > frame.mean()

    def test_range_preserved_even_on_white(self):
        out = spatial.fog(np.ones((32, 32, 3)), 3.0, 1.4, seed=1)
        assert out.max() <= 1.0 and out.min() >= 0.0

    def test_plasma_field_shape_and_range(self):
        rng = np.random.default_rng(0)
        field = spatial.plasma_field(224, 2.0, rng)
        side = field.shape[0]
        assert field.shape == (side, side)
        assert side >= 224 and (side - 1) & (side - 2) == 0  # 2^k + 1
        assert field.min() == 0.0 and field.max() == 1.0

    def test_plasma_smoothness_reduces_roughness(self):
        def roughness(smoothness):
            rng = np.random.default_rng(3)
            f = spatial.plasma_field(128, smoothness, rng)
            return np.mean(np.abs(np.diff(f, axis=0)))

        assert roughness(2.0) < roughness(1.0)

    def test_deterministic(self):
        frame = random_frame(7)
        assert np.array_equal(
            spatial.fog(frame, 2.5, 1.7, seed=4), spatial.fog(frame, 2.5, 1.7, seed=4)
        )


class TestContrast:
    def test_portion_one_is_identity(self):
        frame = random_frame(8)
        assert np.allclose(spatial.contrast(frame, 1.0), frame)

    def test_uniform_frame_unchanged(self):
        frame = np.full((16, 16, 3), 0.37)
        assert np.allclose(spatial.contrast(frame, 0.2), frame)

    def test_std_scales_exactly_by_portion(self):
        for seed in range(3):
            frame = random_frame(seed)
            out = spatial.contrast(frame, 0.1)
            for c in range(3):
                assert abs(out[..., c].std() - 0.1 * frame[..., c].std()) < 1e-6

    def test_rejects_bad_portion(self):
        with pytest.raises(ValueError):
            spatial.contrast(mid_gray(), 0.0)
        with pytest.raises(ValueError):
            spatial.contrast(mid_gray(), 1.5)


class TestBrightness:
    def test_zero_addition_round_trips(self):
        frame = random_frame(9)
        assert np.max(np.abs(spatial.brightness(frame, 0.0) - frame)) < 1e-6

    def test_white_frame_saturates_unchanged(self):
        white = np.ones((8, 8, 3))
        assert np.max(np.abs(spatial.brightness(white, 0.5) - white)) < 1e-6

    def test_value_channel_raised(self):
        from vidcorrupt.color import rgb_to_hsv

        frame = random_frame(10, hi=0.4)
        out = spatial.brightness(frame, 0.3)
        assert np.allclose(
            rgb_to_hsv(out)[..., 2], rgb_to_hsv(frame)[..., 2] + 0.3, atol=1e-9
        )


class TestSaturate:
    def test_identity_parameters(self):
        frame = random_frame(11)
        assert np.max(np.abs(spatial.saturate(frame, 1.0, 0.0) - frame)) < 1e-6

    def test_gray_frame_immune_to_scaling(self):
        gray = np.full((8, 8, 3), 0.6)
        for scale in (0.1, 2.0, 20.0):
            assert np.max(np.abs(spatial.saturate(gray, scale, 0.0) - gray)) < 1e-6

    def test_desaturation_moves_toward_gray(self):
        frame = random_frame(12)
        out = spatial.saturate(frame, 0.1, 0.0)
        spread = np.ptp(out, axis=-1)
        assert np.all(spread <= np.ptp(frame, axis=-1) + 1e-12)


@given(
    op=st.sampled_from(["shot", "gaussian", "rain", "fog", "contrast", "brightness", "saturate"]),
    seed=st.integers(0, 2**32 - 1),
    h=st.integers(8, 48),
    w=st.integers(8, 48),
)
@settings(max_examples=40, deadline=None)
def test_every_op_maps_valid_frames_to_valid_frames(op, seed, h, w):
    frame = np.random.default_rng(seed).random((h, w, 3))
    if op == "shot":
        out = spatial.shot_noise(frame, 5, seed)
    elif op == "gaussian":
        out = spatial.gaussian_noise(frame, 0.2, seed)
    elif op == "rain":
        out = spatial.rain(frame, 125, 80, seed)
    elif op == "fog":
        out = spatial.fog(frame, 3.0, 1.4, seed)
    elif op == "contrast":
        out = spatial.contrast(frame, 0.1)
    elif op == "brightness":
        out = spatial.brightness(frame, 0.5)
    else:
        out = spatial.saturate(frame, 20.0, 0.2)
    assert out.shape == frame.shape
    assert out.min() >= 0.0 and out.max() <= 1.0
