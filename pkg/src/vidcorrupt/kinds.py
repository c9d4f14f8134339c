"""Corruption taxonomy and per-item corruption requests."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class CorruptionKind(enum.Enum):
    SHOT_NOISE = "shot_noise"
    RAIN = "rain"
    FOG = "fog"
    CONTRAST = "contrast"
    BRIGHTNESS = "brightness"
    SATURATE = "saturate"
    MOTION_BLUR = "motion_blur"
    FRAME_RATE = "frame_rate"
    ABR = "abr"
    CRF = "crf"
    BIT_ERROR = "bit_error"
    PACKET_LOSS = "packet_loss"
    GAUSSIAN_NOISE = "gaussian_noise"

    def __str__(self) -> str:
        return self.value


class DatasetProfile(enum.Enum):
    KINETICS = "kinetics"
    SSV2 = "ssv2"

    def __str__(self) -> str:
        return self.value


K = CorruptionKind

#: Corruptions computable from one frame in isolation.
SPATIAL_KINDS = (K.SHOT_NOISE, K.RAIN, K.FOG, K.CONTRAST, K.BRIGHTNESS, K.SATURATE)

#: Corruptions whose output depends on several frames or the encoded stream.
TEMPORAL_KINDS = (K.MOTION_BLUR, K.FRAME_RATE, K.ABR, K.CRF, K.BIT_ERROR, K.PACKET_LOSS)

#: The 12-kind grid used to build benchmark datasets.
BENCHMARK_KINDS = SPATIAL_KINDS + TEMPORAL_KINDS

#: Kinds that require the external encoder/decoder.
CODEC_KINDS = (K.ABR, K.CRF, K.BIT_ERROR, K.PACKET_LOSS)


def is_temporal(kind: CorruptionKind) -> bool:
    return kind in TEMPORAL_KINDS


def is_augmentation_only(kind: CorruptionKind) -> bool:
    """True for kinds that never appear in benchmark grids (Gaussian noise)."""
    return kind is K.GAUSSIAN_NOISE


def kind_from_name(name: str) -> CorruptionKind:
    try:
        return CorruptionKind(name)
    except ValueError:
        valid = ", ".join(k.value for k in CorruptionKind)
        raise ValueError(f"unknown corruption kind {name!r}; valid kinds: {valid}") from None


@dataclass(frozen=True)
class CorruptionSpec:
    """One corruption request: what to apply, how hard, and with which stream seed.

    Severity 0 is the clean-identity passthrough; severities 1..5 index the
    calibrated parameter table.
    """

    kind: CorruptionKind
    severity: int
    profile: DatasetProfile = DatasetProfile.KINETICS
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.severity <= 5:
            raise ValueError(f"severity must be in 0..5, got {self.severity}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
