"""Frame-sampling protocols for producing model inputs at evaluation time."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .clip import VideoClip
from .seeding import rng_from


class Strategy(enum.Enum):
    UNIFORM = "uniform"
    DENSE = "dense"


class Level(enum.Enum):
    CLIP = "clip"
    VIDEO = "video"


@dataclass(frozen=True)
class SamplingPlan:
    """How to pick frame indices: strategy x level, e.g. 32-frame uniform clips.

    At video level, clips_per_video is N for uniform sampling (first N frames
    seed the N clips) and M for dense sampling (M evenly spaced windows).
    """

    strategy: Strategy
    level: Level
    num_frames: int
    clips_per_video: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_frames < 1:
            raise ValueError("num_frames must be >= 1")
        if self.clips_per_video < 1:
            raise ValueError("clips_per_video must be >= 1")


def _uniform_indices(n: int, num_frames: int, start: int) -> list[int]:
    stride = max(n // num_frames, 1)
    return [min(start + k * stride, n - 1) for k in range(num_frames)]


def sample(clip: VideoClip | int, plan: SamplingPlan) -> list[list[int]]:
    """Frame-index lists (one per sampled clip) for a clip of n frames.

    Uniform/clip: the clip is divided into num_frames segments; one random
    start is drawn from the first segment and frames follow at the fixed
    stride floor(n / num_frames). Dense/clip: num_frames consecutive frames
    from a random start. Uniform/video: clips start at frames 0..N-1.
    Dense/video: M evenly spaced consecutive windows. Short clips clamp to
    the last frame index.
    """
    n = clip if isinstance(clip, int) else clip.n_frames
    if n < 1:
        raise ValueError("clip must contain at least one frame")
    rng = rng_from(plan.seed)
    f = plan.num_frames

    if plan.level is Level.CLIP:
        if plan.strategy is Strategy.UNIFORM:
            stride = n // f
            start = int(rng.integers(0, stride)) if stride >= 1 else 0
            return [_uniform_indices(n, f, start)]
        start = int(rng.integers(0, n))
        return [[min(start + k, n - 1) for k in range(f)]]

    m = plan.clips_per_video
    if plan.strategy is Strategy.UNIFORM:
        return [_uniform_indices(n, f, min(j, n - 1)) for j in range(m)]
    span = max(n - f, 0)
    starts = [round(j * span / (m - 1)) if m > 1 else 0 for j in range(m)]
    return [[min(s + k, n - 1) for k in range(f)] for s in starts]
