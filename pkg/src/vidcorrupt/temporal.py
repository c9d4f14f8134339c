"""Whole-clip corruption generators: motion blur and frame-rate conversion.

Both are deterministic (no seed).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .clip import VideoClip


class InvalidTarget(ValueError):
    """Requested target frame rate exceeds the source frame rate."""


def motion_blur(clip: VideoClip, window: int) -> VideoClip:
    """Trailing uniform average: output frame i = mean(input[i : i+window]).

    The clip end is clamp-to-edge padded, so output frame i depends on
    exactly min(window, n - i) input frames; frame count and fps are
    unchanged.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if window == 1:
        return clip
    f = clip.frames
    n = clip.n_frames
    pad = np.broadcast_to(f[-1], (window - 1,) + f.shape[1:])
    padded = np.concatenate([f, pad], axis=0)
    # sliding sum via prefix sums over the time axis
    prefix = np.zeros((n + window,) + f.shape[1:])
    np.cumsum(padded, axis=0, out=prefix[1:])
    out = (prefix[window:] - prefix[:n]) / window
    return clip.with_frames(np.clip(out, 0.0, 1.0))


def resample_indices(n_frames: int, source_fps: Fraction, target_fps: Fraction) -> list[int]:
    """Nearest-timestamp mapping of the target-fps grid onto source frames.

    The output count rounds duration * target_fps to the nearest integer and
    each grid instant k/target maps to source frame round(k * source/target),
    computed in exact rational arithmetic (round half up). Indices are
    strictly increasing whenever target <= source.
    """
    stride = Fraction(source_fps) / Fraction(target_fps)
    half = Fraction(1, 2)
    count = max(int(Fraction(n_frames) / stride + half), 1)
    return [min(int(k * stride + half), n_frames - 1) for k in range(count)]


def aligned_psnr(clean: VideoClip, corrupted: VideoClip) -> float:
    """PSNR vs. clean on temporally aligned frames.

    Equal-length clips compare frame i against frame i; frame-rate-converted
    clips compare each output frame against the source frame the resampling
    grid mapped it to.
    """
    from .clip import psnr

    if corrupted.n_frames == clean.n_frames:
        return psnr(clean.frames, corrupted.frames)
    idx = resample_indices(clean.n_frames, clean.fps, corrupted.fps)
    n = min(len(idx), corrupted.n_frames)
    return psnr(clean.frames[idx[:n]], corrupted.frames[:n])


def frame_rate_convert(clip: VideoClip, target_fps) -> VideoClip:
    """Drop frames onto a lower-fps grid; frames are never synthesized.

    Every output frame is bit-identical to some input frame, indices are
    strictly increasing, and the duration is preserved within one target
    frame period.
    """
    target = Fraction(target_fps)
    if target <= 0:
        raise InvalidTarget(f"target fps must be positive, got {target_fps}")
    if target > clip.fps:
        raise InvalidTarget(
            f"target fps {target} exceeds source fps {clip.fps}; upsampling is not supported"
        )
    idx = resample_indices(clip.n_frames, clip.fps, target)
    return VideoClip(clip.frames[idx], fps=target)
