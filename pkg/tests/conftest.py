import subprocess
from pathlib import Path

import numpy as np
import pytest

from vidcorrupt.clip import VideoClip
from vidcorrupt.codec import CodecConfig

REPO_ROOT = Path(__file__).resolve().parents[1]
CODEC_TOOL = REPO_ROOT / "build" / "hevc_codec"


def make_probe_frames(seed: int, n_frames: int = 24, height: int = 96, width: int = 112) -> np.ndarray:
    """Synthetic natural-ish clip: drifting smooth color fields plus a moving
    bright disc, so inter-frame prediction has real motion to chew on.
    Returns uint8 (T, H, W, 3)."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    phase = rng.uniform(0, 2 * np.pi, 3)
    freq = rng.uniform(14, 30, 3)
    cx, cy = rng.uniform(0.2, 0.8) * width, rng.uniform(0.2, 0.8) * height
    vx, vy = rng.uniform(1, 3), rng.uniform(0.5, 2)
    frames = []
    for t in range(n_frames):
        r = np.hypot(xx - cx - vx * t, yy - cy - vy * t)
        chans = [
            0.45 + 0.3 * np.sin(r / freq[0] + phase[0] + t / 6),
            0.45 + 0.3 * np.cos((xx + yy) / freq[1] + phase[1] - t / 9),
            0.4 + 0.3 * np.sin(xx / freq[2] + phase[2] + t / 7),
        ]
        frame = np.stack(chans, axis=-1)
        disc = r < 9
        frame[disc] = (0.9, 0.85, 0.7)
        frames.append(frame)
    return (np.clip(np.stack(frames), 0, 1) * 255 + 0.5).astype(np.uint8)


def make_probe_clip(seed: int, n_frames: int = 24, height: int = 96, width: int = 112, fps=24) -> VideoClip:
    return VideoClip.from_uint8(make_probe_frames(seed, n_frames, height, width), fps)


def _build_tool() -> bool:
    try:
        subprocess.run(
            [str(REPO_ROOT / "scripts" / "build_hevc_codec.sh")],
            check=True,
            capture_output=True,
        )
        return True
    except (OSError, subprocess.CalledProcessError):
        return False


@pytest.fixture(scope="session")
def codec_config() -> CodecConfig:
    if not CODEC_TOOL.exists() and not _build_tool():
        pytest.skip("hevc_codec tool unavailable and could not be built")
    return CodecConfig(executable=str(CODEC_TOOL))
