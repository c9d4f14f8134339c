"""Deterministic seed derivation.

Every stochastic operation draws from a numpy PCG64 generator seeded
through this module, so a benchmark build is a pure function of
(master seed, video id, kind, severity). The derivation is the low 64 bits
of SHA-256 over an ASCII key; the exact key formats below are part of the
toolkit's reproducibility contract and must not change between releases:

    stream seed:  "vidcorrupt:v1:{master_seed}:{video_id}:{kind}:{severity}"
    frame seed:   "vidcorrupt:v1:frame:{stream_seed}:{frame_index}"
    labeled sub:  "vidcorrupt:v1:sub:{stream_seed}:{label}"
"""

from __future__ import annotations

import hashlib

import numpy as np

from .kinds import CorruptionKind

_MASK64 = (1 << 64) - 1


def _digest64(key: str) -> int:
    h = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(h[:8], "big") & _MASK64


def derive_stream_seed(master_seed: int, video_id: str, kind: CorruptionKind, severity: int) -> int:
    """Per-item seed for one (video, kind, severity) grid cell."""
    return _digest64(f"vidcorrupt:v1:{master_seed}:{video_id}:{kind.value}:{severity}")


def derive_frame_seed(stream_seed: int, frame_index: int) -> int:
    """Per-frame sub-stream seed; depends on frame identity, not clip layout."""
    return _digest64(f"vidcorrupt:v1:frame:{stream_seed}:{frame_index}")


def derive_substream(stream_seed: int, label: str) -> int:
    """Named sub-stream for clip-level draws (e.g. the rain slant angle)."""
    return _digest64(f"vidcorrupt:v1:sub:{stream_seed}:{label}")


def rng_from(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))
