"""Calibrated per-corruption, per-severity parameter tables.

Only motion blur and frame-rate conversion differ between the Kinetics and
SSV2 profiles (Kinetics clips run at 24 fps, SSV2 at 12 fps); every other
kind shares one row of parameters. Bit-error ratios are kept as exact
rationals to avoid decimal drift.
"""

from __future__ import annotations

from fractions import Fraction

from .kinds import CorruptionKind as K
from .kinds import DatasetProfile


class UnknownSeverity(ValueError):
    """Severity outside the calibrated 1..5 range."""


SHOT_NOISE_PHOTONS = (60, 25, 12, 5, 3)
RAIN_DENSITY_LENGTH = ((65, 10), (65, 30), (65, 60), (100, 60), (125, 80))
FOG_THICKNESS_SMOOTHNESS = ((1.5, 2.0), (2.0, 2.0), (2.5, 1.7), (2.5, 1.5), (3.0, 1.4))
CONTRAST_PORTION = (0.5, 0.4, 0.3, 0.2, 0.1)
BRIGHTNESS_ADDITION = (0.1, 0.2, 0.3, 0.4, 0.5)
SATURATE_SCALE_ADDITION = ((0.3, 0.0), (0.1, 0.0), (2.0, 0.0), (5.0, 0.1), (20.0, 0.2))
MOTION_BLUR_WINDOW = {
    DatasetProfile.KINETICS: (3, 5, 7, 9, 11),
    DatasetProfile.SSV2: (1, 2, 3, 4, 6),
}
ABR_BITRATE_DIVISOR = (2, 4, 8, 16, 32)
CRF_VALUE = (27, 33, 39, 45, 51)
BIT_ERROR_RATIO = (
    Fraction(1, 100_000),
    Fraction(1, 50_000),
    Fraction(1, 30_000),
    Fraction(1, 20_000),
    Fraction(1, 10_000),
)
PACKET_LOSS_PERCENT = (1, 2, 3, 4, 6)
FRAME_RATE_FPS = {
    DatasetProfile.KINETICS: (20, 16, 12, 9, 6),
    DatasetProfile.SSV2: (10, 8, 6, 4, 2),
}

#: Toolkit extension: Gaussian noise is an augmentation, not one of the 12
#: benchmark kinds, and the reference levels are stds 0.1 and 0.2. This
#: linear ladder embeds them at severities 2 and 4 so the dispatcher can
#: treat gaussian_noise uniformly.
GAUSSIAN_NOISE_STD = (0.05, 0.1, 0.15, 0.2, 0.25)

_PROFILE_FREE = {
    K.SHOT_NOISE: SHOT_NOISE_PHOTONS,
    K.RAIN: RAIN_DENSITY_LENGTH,
    K.FOG: FOG_THICKNESS_SMOOTHNESS,
    K.CONTRAST: CONTRAST_PORTION,
    K.BRIGHTNESS: BRIGHTNESS_ADDITION,
    K.SATURATE: SATURATE_SCALE_ADDITION,
    K.ABR: ABR_BITRATE_DIVISOR,
    K.CRF: CRF_VALUE,
    K.BIT_ERROR: BIT_ERROR_RATIO,
    K.PACKET_LOSS: PACKET_LOSS_PERCENT,
}

_PROFILE_BOUND = {
    K.MOTION_BLUR: MOTION_BLUR_WINDOW,
    K.FRAME_RATE: FRAME_RATE_FPS,
}


def lookup_params(kind: K, profile: DatasetProfile, severity: int):
    """Return the calibrated parameter (scalar or tuple) for one grid cell.

    Gaussian noise is rejected here: it takes an explicit std and has no
    benchmark row (see GAUSSIAN_NOISE_STD for the augmentation ladder).
    """
    if kind is K.GAUSSIAN_NOISE:
        raise ValueError("gaussian_noise takes an explicit std, not a table row")
    if not isinstance(severity, int) or not 1 <= severity <= 5:
        raise UnknownSeverity(f"severity must be an integer in 1..5, got {severity!r}")
    if kind in _PROFILE_BOUND:
        return _PROFILE_BOUND[kind][profile][severity - 1]
    return _PROFILE_FREE[kind][severity - 1]


def gaussian_noise_std(severity: int) -> float:
    if not isinstance(severity, int) or not 1 <= severity <= 5:
        raise UnknownSeverity(f"severity must be an integer in 1..5, got {severity!r}")
    return GAUSSIAN_NOISE_STD[severity - 1]


def severity_table_as_data() -> dict:
    """The full table as JSON-friendly data (rationals become [num, den])."""

    def _cell(value):
        if isinstance(value, Fraction):
            return [value.numerator, value.denominator]
        if isinstance(value, tuple):
            return list(value)
        return value

    out: dict = {}
    for profile in DatasetProfile:
        rows = {}
        for kind, table in _PROFILE_FREE.items():
            rows[kind.value] = [_cell(v) for v in table]
        for kind, per_profile in _PROFILE_BOUND.items():
            rows[kind.value] = [_cell(v) for v in per_profile[profile]]
        out[profile.value] = rows
    out["gaussian_noise_std"] = list(GAUSSIAN_NOISE_STD)
    return out
