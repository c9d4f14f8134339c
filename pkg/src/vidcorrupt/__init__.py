"""vidcorrupt: corruption synthesis and robustness evaluation for video classification.

Generates 12 spatial/temporal corruption types at 5 calibrated severity
levels, builds corrupted benchmark datasets from clean-video manifests, and
computes robustness metrics from model prediction logs.
"""

__version__ = "0.1.0"

from .clip import Frame, VideoClip, clip_psnr, psnr
from .dispatch import apply, apply_spatial_frame
from .kinds import (
    BENCHMARK_KINDS,
    CODEC_KINDS,
    SPATIAL_KINDS,
    TEMPORAL_KINDS,
    CorruptionKind,
    CorruptionSpec,
    DatasetProfile,
    is_augmentation_only,
    is_temporal,
    kind_from_name,
)
from .metrics import (
    AccuracyTable,
    MissingCell,
    PredictionRecord,
    RobustnessReport,
    accuracy_table,
    mpc,
    pc,
    render,
    rpc,
    split_report,
)
from .sampler import Level, SamplingPlan, Strategy, sample
from .seeding import derive_frame_seed, derive_stream_seed, rng_from
from .severity import (
    UnknownSeverity,
    gaussian_noise_std,
    lookup_params,
    severity_table_as_data,
)

__all__ = [
    "__version__",
    "Frame",
    "VideoClip",
    "psnr",
    "clip_psnr",
    "apply",
    "apply_spatial_frame",
    "CorruptionKind",
    "CorruptionSpec",
    "DatasetProfile",
    "BENCHMARK_KINDS",
    "SPATIAL_KINDS",
    "TEMPORAL_KINDS",
    "CODEC_KINDS",
    "is_temporal",
    "is_augmentation_only",
    "kind_from_name",
    "AccuracyTable",
    "MissingCell",
    "PredictionRecord",
    "RobustnessReport",
    "accuracy_table",
    "pc",
    "mpc",
    "rpc",
    "split_report",
    "render",
    "SamplingPlan",
    "Strategy",
    "Level",
    "sample",
    "derive_stream_seed",
    "derive_frame_seed",
    "rng_from",
    "UnknownSeverity",
    "lookup_params",
    "gaussian_noise_std",
    "severity_table_as_data",
]
