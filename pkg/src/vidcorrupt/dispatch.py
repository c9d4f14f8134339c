"""The corruption dispatcher: one entry point over all 13 kinds.

`apply` is pure given (clip, spec): per-frame randomness flows through
seeds derived from the spec's stream seed and the frame index, so spatial
kinds may be parallelized across frames with results identical to
sequential execution.
"""

from __future__ import annotations

import numpy as np

from . import spatial, temporal
from .clip import VideoClip
from .codec import CodecConfig, CodecUnavailable, compression_corrupt
from .kinds import CODEC_KINDS, SPATIAL_KINDS, CorruptionSpec
from .kinds import CorruptionKind as K
from .seeding import derive_frame_seed, derive_substream
from .severity import gaussian_noise_std, lookup_params


def apply_spatial_frame(
    kind: K, frame: np.ndarray, params, frame_seed: int, slant_deg: float | None = None
) -> np.ndarray:
    """Corrupt a single frame; exposed so callers can parallelize per frame."""
    if kind is K.SHOT_NOISE:
        return spatial.shot_noise(frame, params, frame_seed)
    if kind is K.RAIN:
        density, length = params
        return spatial.rain(frame, density, length, frame_seed, slant_deg=slant_deg)
    if kind is K.FOG:
        thickness, smoothness = params
        return spatial.fog(frame, thickness, smoothness, frame_seed)
    if kind is K.CONTRAST:
        return spatial.contrast(frame, params)
    if kind is K.BRIGHTNESS:
        return spatial.brightness(frame, params)
    if kind is K.SATURATE:
        scale, addition = params
        return spatial.saturate(frame, scale, addition)
    if kind is K.GAUSSIAN_NOISE:
        return spatial.gaussian_noise(frame, params, frame_seed)
    raise ValueError(f"{kind} is not a per-frame corruption")


def apply(
    clip: VideoClip,
    spec: CorruptionSpec,
    config: CodecConfig | None = None,
    source_bitrate: int | None = None,
) -> VideoClip:
    """Apply one corruption at one severity; severity 0 is the identity.

    Codec-domain kinds (ABR/CRF/bit error/packet loss) need a CodecConfig
    with a resolvable executable and raise CodecUnavailable otherwise.
    """
    if spec.severity == 0:
        return clip
    kind = spec.kind

    if kind in CODEC_KINDS:
        if config is None:
            config = CodecConfig()
        config.require()  # CodecUnavailable before any work
        return compression_corrupt(
            clip, kind, spec.severity, spec.profile, spec.seed, config, source_bitrate
        )

    if kind is K.MOTION_BLUR:
        window = lookup_params(kind, spec.profile, spec.severity)
        return temporal.motion_blur(clip, window)
    if kind is K.FRAME_RATE:
        fps = lookup_params(kind, spec.profile, spec.severity)
        return temporal.frame_rate_convert(clip, fps)

    if kind is K.GAUSSIAN_NOISE:
        params = gaussian_noise_std(spec.severity)
    else:
        params = lookup_params(kind, spec.profile, spec.severity)

    slant = None
    if kind is K.RAIN:
        slant = spatial.rain_slant_deg(derive_substream(spec.seed, "rain-slant"))

    assert kind in SPATIAL_KINDS or kind is K.GAUSSIAN_NOISE
    out = np.empty_like(clip.frames)
    for i in range(clip.n_frames):
        frame_seed = derive_frame_seed(spec.seed, i)
        out[i] = apply_spatial_frame(kind, clip.frames[i], params, frame_seed, slant)
    return clip.with_frames(out)
