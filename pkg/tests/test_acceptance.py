"""Acceptance suite: one test per gate criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines;
the monotonicity and determinism criteria invoke the external codec and take
a few minutes combined.
"""

import dataclasses
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from tests.conftest import make_probe_clip
from tests.test_channel import make_stream
from vidcorrupt import benchmark as bench_mod
from vidcorrupt import spatial, temporal
from vidcorrupt.channel import bit_error, bit_error_flip_positions, packet_loss
from vidcorrupt.clip import VideoClip, clip_psnr, psnr
from vidcorrupt.codec import (
    CrfMode,
    compression_corrupt,
    decode,
    encode,
    measure_bitrate,
    read_video_file,
    write_video_file,
)
from vidcorrupt.dispatch import apply
from vidcorrupt.kinds import BENCHMARK_KINDS, CODEC_KINDS, CorruptionSpec, DatasetProfile
from vidcorrupt.kinds import CorruptionKind as K
from vidcorrupt.metrics import AccuracyTable, mpc, rpc, split_report
from vidcorrupt.seeding import derive_frame_seed, derive_stream_seed
from vidcorrupt.severity import GAUSSIAN_NOISE_STD, lookup_params
from vidcorrupt.temporal import aligned_psnr

KINETICS = DatasetProfile.KINETICS
NON_CODEC_KINDS = tuple(k for k in BENCHMARK_KINDS if k not in CODEC_KINDS)

PROBE_COUNT = 10
PROBE_FRAMES = 64
PROBE_SIDE = 224
STOCHASTIC_SEEDS = range(5)
#: spatial-kind PSNR is estimated on every 8th frame (valid because spatial
#: outputs depend on single frames); temporal/codec kinds use whole clips
FRAME_STRIDE = 8


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


@pytest.fixture(scope="module")
def probe_clips():
    return [
        make_probe_clip(1000 + i, n_frames=PROBE_FRAMES, height=PROBE_SIDE, width=PROBE_SIDE)
        for i in range(PROBE_COUNT)
    ]


@pytest.fixture(scope="module")
def probe_sources(probe_clips, codec_config, tmp_path_factory):
    """Probe clips persisted as realistic source files: (clean decode, bitrate)."""
    root = tmp_path_factory.mktemp("probe_sources")
    sources = []
    for i, clip in enumerate(probe_clips):
        path = root / f"probe_{i}.mp4"
        write_video_file(path, clip, codec_config, crf=18)
        clean = read_video_file(path, codec_config)
        sources.append((clean, measure_bitrate(path, codec_config)))
    return sources


# ---------------------------------------------------------------------------


def test_metric_oracle_against_published_numbers():
    s3d = dict(
        zip(
            BENCHMARK_KINDS,
            (50.8, 51.5, 47.6, 46.4, 62.0, 56.8, 54.9, 68.3, 62.8, 59.1, 59.9, 62.9),
        )
    )
    timesformer = dict(
        zip(
            BENCHMARK_KINDS,
            (74.7, 70.5, 55.3, 62.7, 76.1, 69.6, 70.8, 81.1, 76.5, 73.0, 71.5, 75.4),
        )
    )
    with criterion("metric oracle: published leaderboard rows reproduced"):
        table = AccuracyTable.from_pc_values(69.4, s3d)
        assert abs(mpc(table) - 56.9) <= 0.05 + 1e-9
        assert abs(rpc(table) - 82.0) <= 0.1 + 1e-9

        i3d = AccuracyTable.from_pc_values(58.5, {k: 47.8 for k in BENCHMARK_KINDS})
        assert abs(mpc(i3d) - 47.8) <= 0.05 + 1e-9
        assert abs(rpc(i3d) - 81.7) <= 0.1 + 1e-9

        split = split_report(AccuracyTable.from_pc_values(82.2, timesformer))
        assert abs(split.spatial_mpc - 68.2) <= 0.05 + 1e-9
        assert abs(split.temporal_mpc - 74.7) <= 0.05 + 1e-9


def test_severity_table_fidelity():
    from tests.test_severity import EXPECTED, EXPECTED_PER_PROFILE

    with criterion("severity-table fidelity: every calibrated value exact"):
        checked = 0
        for profile in DatasetProfile:
            for kind in BENCHMARK_KINDS:
                for severity in range(1, 6):
                    if (kind, profile) in EXPECTED_PER_PROFILE:
                        expected = EXPECTED_PER_PROFILE[(kind, profile)][severity - 1]
                    else:
                        expected = EXPECTED[kind][severity - 1]
                    assert lookup_params(kind, profile, severity) == expected, (
                        kind,
                        profile,
                        severity,
                    )
                    checked += 1
        assert checked == 120  # 12 kinds x 5 severities x 2 profiles


# ---------------------------------------------------------------------------


def _spatial_mean_psnr(clips, corrupt_frame) -> float:
    """Mean over clips of PSNR accumulated over the sampled frames."""
    values = []
    for c, clip in enumerate(clips):
        sq_err = 0.0
        count = 0
        for i in range(0, clip.n_frames, FRAME_STRIDE):
            frame = clip.frames[i]
            out = corrupt_frame(frame, c, i)
            sq_err += float(np.sum((out - frame) ** 2))
            count += frame.size
        values.append(10 * np.log10(1.0 / (sq_err / count)))
    return float(np.mean(values))


def _assert_non_increasing(name, series):
    assert all(
        b <= a + 1e-9 for a, b in zip(series, series[1:])
    ), f"{name} PSNR not non-increasing: {series}"


def test_severity_monotonicity_pixel_kinds(probe_clips):
    with criterion("severity monotonicity: shot noise"):
        series = []
        for sev in range(1, 6):
            photons = lookup_params(K.SHOT_NOISE, KINETICS, sev)
            per_seed = [
                _spatial_mean_psnr(
                    probe_clips,
                    lambda f, c, i: spatial.shot_noise(f, photons, seed * 10007 + c * 101 + i),
                )
                for seed in STOCHASTIC_SEEDS
            ]
            series.append(float(np.mean(per_seed)))
        _assert_non_increasing("shot noise", series)

    with criterion("severity monotonicity: Gaussian noise"):
        series = []
        for sev in range(1, 6):
            std = GAUSSIAN_NOISE_STD[sev - 1]
            per_seed = [
                _spatial_mean_psnr(
                    probe_clips,
                    lambda f, c, i: spatial.gaussian_noise(f, std, seed * 7919 + c * 103 + i),
                )
                for seed in STOCHASTIC_SEEDS
            ]
            series.append(float(np.mean(per_seed)))
        _assert_non_increasing("Gaussian noise", series)

    with criterion("severity monotonicity: fog"):
        series = []
        for sev in range(1, 6):
            thickness, smoothness = lookup_params(K.FOG, KINETICS, sev)
            per_seed = [
                _spatial_mean_psnr(
                    probe_clips,
                    lambda f, c, i: spatial.fog(f, thickness, smoothness, seed * 353 + c * 29 + i),
                )
                for seed in STOCHASTIC_SEEDS
            ]
            series.append(float(np.mean(per_seed)))
        _assert_non_increasing("fog", series)

    with criterion("severity monotonicity: motion blur"):
        series = []
        for sev in range(1, 6):
            window = lookup_params(K.MOTION_BLUR, KINETICS, sev)
            values = [
                clip_psnr(clip, temporal.motion_blur(clip, window)) for clip in probe_clips
            ]
            series.append(float(np.mean(values)))
        _assert_non_increasing("motion blur", series)


def test_severity_monotonicity_codec_kinds(probe_sources, codec_config):
    with criterion("severity monotonicity: CRF"):
        series = []
        for sev in range(1, 6):
            values = [
                clip_psnr(clean, compression_corrupt(clean, K.CRF, sev, KINETICS, 0, codec_config))
                for clean, _ in probe_sources
            ]
            series.append(float(np.mean(values)))
        _assert_non_increasing("CRF", series)

    with criterion("severity monotonicity: ABR"):
        series = []
        for sev in range(1, 6):
            values = [
                clip_psnr(
                    clean,
                    compression_corrupt(
                        clean, K.ABR, sev, KINETICS, 0, codec_config, source_bitrate=bitrate
                    ),
                )
                for clean, bitrate in probe_sources
            ]
            series.append(float(np.mean(values)))
        _assert_non_increasing("ABR", series)

    with criterion("severity monotonicity: bit error"):
        carriers = [
            (clean, encode(clean, CrfMode(23), codec_config)) for clean, _ in probe_sources
        ]
        series = []
        for sev in range(1, 6):
            ratio = lookup_params(K.BIT_ERROR, KINETICS, sev)
            values = []
            for seed in STOCHASTIC_SEEDS:
                for clean, carrier in carriers:
                    damaged = bit_error(carrier, ratio, seed)
                    values.append(clip_psnr(clean, decode(damaged, codec_config)))
            series.append(float(np.mean(values)))
        _assert_non_increasing("bit error", series)


# ---------------------------------------------------------------------------


def test_channel_statistics():
    with criterion("channel statistics: bit flips in the exact binomial 99.9% interval"):
        stream = make_stream(125_000)
        n_bits = sum(u.payload_size * 8 for u in stream.units if not u.protected)
        assert n_bits >= 10**6
        p = 1e-4
        lo = stats.binom.ppf(0.0005, n_bits, p)
        hi = stats.binom.ppf(0.9995, n_bits, p)
        for seed in range(3):
            out = bit_error(stream, p, seed=seed)
            flips = int(
                np.unpackbits(
                    np.frombuffer(stream.data, np.uint8) ^ np.frombuffer(out.data, np.uint8)
                ).sum()
            )
            assert lo <= flips <= hi, f"{flips} outside [{lo}, {hi}]"

    with criterion("channel statistics: NAL drop fraction 3% +- 0.5% over 10^4 units"):
        stream = make_stream(50_000, n_slices=10_000)
        droppable = sum(1 for u in stream.units if not u.protected)
        assert droppable >= 10_000
        out = packet_loss(stream, 3.0, seed=0)
        kept = sum(1 for u in out.units if not u.protected)
        fraction = (droppable - kept) / droppable
        assert abs(fraction - 0.03) <= 0.005, f"dropped {fraction:.4f}"


# ---------------------------------------------------------------------------


def test_determinism_double_build(codec_config, tmp_path):
    with criterion("determinism: double-build digests identical for 5x8x5 non-codec grid"):
        clean_root = tmp_path / "clean"
        clean_root.mkdir()
        entries = []
        for i in range(5):
            clip = make_probe_clip(500 + i, n_frames=16, height=64, width=64)
            path = clean_root / f"vid_{i}.mp4"
            write_video_file(path, clip, codec_config, crf=0)
            entries.append(
                bench_mod.ManifestEntry(f"vid_{i}", str(path), "x", Fraction(24), 16)
            )
        manifest = bench_mod.CleanManifest(tuple(entries), KINETICS)

        digests = []
        for run in ("one", "two"):
            result = bench_mod.build(
                manifest,
                master_seed=11,
                out_dir=tmp_path / run,
                config=codec_config,
                kinds=NON_CODEC_KINDS,
            )
            assert not result.failures
            assert len(result.manifest.items) == 5 * 8 * 5
            digests.append(
                {(i.video_id, i.kind, i.severity): i.sha256 for i in result.manifest.items}
            )
        assert digests[0] == digests[1]


# ---------------------------------------------------------------------------


def test_identity_suite():
    clip = make_probe_clip(77, n_frames=12, height=64, width=64)
    with criterion("identity suite: all identity parameterizations return the input"):
        for kind in BENCHMARK_KINDS + (K.GAUSSIAN_NOISE,):
            assert apply(clip, CorruptionSpec(kind, 0, seed=5)) is clip
        assert temporal.motion_blur(clip, 1) is clip
        out = spatial.contrast(clip.frames[0], 1.0)
        assert np.max(np.abs(out - clip.frames[0])) < 1e-12
        out = spatial.gaussian_noise(clip.frames[0], 0.0, seed=9)
        assert np.array_equal(out, clip.frames[0])
        converted = temporal.frame_rate_convert(clip, clip.fps)
        assert converted.n_frames == clip.n_frames
        assert np.array_equal(converted.frames, clip.frames)


# ---------------------------------------------------------------------------


def test_frame_rate_exactness():
    targets = (20, 16, 12, 9, 6)
    with criterion("frame-rate exactness: fps metadata and resampled counts"):
        assert tuple(lookup_params(K.FRAME_RATE, KINETICS, s) for s in range(1, 6)) == targets

        # hand-computed nearest-grid counts for 64 frames at 24 fps
        clip64 = VideoClip(np.zeros((64, 4, 4, 3)), 24)
        expected64 = (53, 43, 32, 24, 16)
        for target, count in zip(targets, expected64):
            out = temporal.frame_rate_convert(clip64, target)
            assert out.fps == Fraction(target)
            assert out.n_frames == count, (target, out.n_frames)

        # and for 240 frames at 24 fps
        clip240 = VideoClip(np.zeros((240, 2, 2, 3)), 24)
        expected240 = (200, 160, 120, 90, 60)
        for target, count in zip(targets, expected240):
            out = temporal.frame_rate_convert(clip240, target)
            assert out.fps == Fraction(target)
            assert out.n_frames == count, (target, out.n_frames)


# ---------------------------------------------------------------------------


def test_error_propagation(codec_config):
    with criterion("error propagation: one mid-stream bit error damages later frames"):
        clip = make_probe_clip(21, n_frames=48)
        config = dataclasses.replace(codec_config, extra_x265_params="bframes=0")
        stream = encode(clip, CrfMode(23), config)
        vcl_indices = [i for i, u in enumerate(stream.units) if u.is_vcl]
        n_bits = sum(u.payload_size * 8 for u in stream.units if not u.protected)
        ratio = 0.7 / n_bits

        chosen = None
        for seed in range(3000):
            positions = bit_error_flip_positions(stream, ratio, seed)
            if len(positions) != 1:
                continue
            bit = positions[0]
            for vcl_rank, unit_idx in enumerate(vcl_indices):
                unit = stream.units[unit_idx]
                if unit.payload_offset * 8 <= bit < (unit.offset + unit.size) * 8:
                    if 1 <= vcl_rank <= len(vcl_indices) - 4:
                        chosen = (seed, vcl_rank)
                    break
            if chosen:
                break
        assert chosen is not None, "no usable single-flip seed found"
        seed, owner = chosen

        clean = decode(stream, config)
        damaged = decode(bit_error(stream, ratio, seed), config)
        differing = [
            i
            for i in range(clip.n_frames)
            if not np.array_equal(clean.frames[i], damaged.frames[i])
        ]
        assert differing and max(differing) > owner, (owner, differing)
