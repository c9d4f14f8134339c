"""In-memory video representation and pixel-value conventions.

All in-memory pixel math runs on float64 arrays normalized to [0, 1];
8-bit values exist only at file I/O boundaries and are produced with
round-half-to-even.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

#: A single (H, W, 3) float64 RGB frame with values in [0, 1].
Frame = np.ndarray


def _as_fraction(fps) -> Fraction:
    f = Fraction(fps)
    if f <= 0:
        raise ValueError(f"fps must be positive, got {fps}")
    return f


@dataclass(frozen=True)
class VideoClip:
    """A decoded frame sequence: (T, H, W, 3) float64 pixels in [0, 1].

    Instances are immutable (the pixel buffer is marked read-only) and safe
    to share across threads.
    """

    frames: np.ndarray
    fps: Fraction

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.frames, dtype=np.float64)
        if arr.ndim != 4 or arr.shape[3] != 3:
            raise ValueError(f"frames must have shape (T, H, W, 3), got {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("a clip must contain at least one frame")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("pixel values must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "frames", arr)
        object.__setattr__(self, "fps", _as_fraction(self.fps))

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    @property
    def duration(self) -> Fraction:
        return self.n_frames / self.fps

    def with_frames(self, frames: np.ndarray, fps=None) -> "VideoClip":
        return VideoClip(frames, self.fps if fps is None else fps)

    @classmethod
    def from_uint8(cls, frames: np.ndarray, fps) -> "VideoClip":
        return cls(np.asarray(frames, dtype=np.float64) / 255.0, fps)

    def to_uint8(self) -> np.ndarray:
        return float_to_uint8(self.frames)


def float_to_uint8(pixels: np.ndarray) -> np.ndarray:
    """[0,1] floats to 8-bit, rounding half to even (np.rint)."""
    return np.rint(np.clip(pixels, 0.0, 1.0) * 255.0).astype(np.uint8)


def uint8_to_float(pixels: np.ndarray) -> np.ndarray:
    return np.asarray(pixels, dtype=np.float64) / 255.0


def psnr(reference: np.ndarray, distorted: np.ndarray) -> float:
    """PSNR in dB between two [0,1] pixel arrays; inf for identical inputs."""
    ref = np.asarray(reference, dtype=np.float64)
    dist = np.asarray(distorted, dtype=np.float64)
    if ref.shape != dist.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {dist.shape}")
    mse = np.mean((ref - dist) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / mse))


def clip_psnr(reference: VideoClip, distorted: VideoClip) -> float:
    return psnr(reference.frames, distorted.frames)
