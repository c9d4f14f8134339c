"""External H.265 encoder/decoder orchestration and encoded-domain corruptions.

The toolkit never implements a codec: encoding and decoding shell out to a
configured executable (the bundled ``build/hevc_codec`` tool or anything
command-line compatible with its flags, resolved through VIDCORRUPT_CODEC).
Invocation templates use the placeholders {exe}, {input}, {output},
{bitrate}, {crf} and {fps}.
"""

from __future__ import annotations

import json
import os
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .channel import bit_error, packet_loss
from .clip import VideoClip
from .kinds import CorruptionKind as K
from .kinds import DatasetProfile
from .nal import EncodedStream
from .severity import lookup_params
from .videoio import clip_from_ppm_bytes, clip_to_ppm_bytes, read_ppm_stream

#: Channel corruptions run on a fixed-quality carrier encode.
CARRIER_CRF = 23

#: x265 settings pinned for byte-reproducible output.
DETERMINISTIC_X265_PARAMS = "pools=none:frame-threads=1:info=0:log-level=none"


class CodecUnavailable(RuntimeError):
    """No external codec executable is configured or resolvable."""


class EncodeFailed(RuntimeError):
    pass


class DecodeFailed(RuntimeError):
    pass


def _default_executable() -> str | None:
    env = os.environ.get("VIDCORRUPT_CODEC")
    if env:
        return env
    bundled = Path(__file__).resolve().parents[2] / "build" / "hevc_codec"
    if bundled.is_file():
        return str(bundled)
    return None


@dataclass(frozen=True)
class CodecConfig:
    """Resolved codec executable, invocation templates and decode behavior."""

    executable: str | None = field(default_factory=_default_executable)
    encode_crf_template: str = (
        "{exe} encode --input {input} --output {output} --fps {fps} --crf {crf} "
        "--preset superfast --x265-params " + DETERMINISTIC_X265_PARAMS
    )
    encode_abr_template: str = (
        "{exe} encode --input {input} --output {output} --fps {fps} --bitrate {bitrate} "
        "--preset superfast --x265-params " + DETERMINISTIC_X265_PARAMS
    )
    decode_template: str = "{exe} decode --input {input} --output {output}"
    probe_template: str = "{exe} probe --input {input}"
    error_concealment: bool = True
    workdir: str | None = None
    extra_x265_params: str | None = None  # appended to encode invocations

    @classmethod
    def from_file(cls, path) -> "CodecConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown codec config keys: {sorted(unknown)}")
        return cls(**raw)

    def require(self) -> "CodecConfig":
        """Validate that the configured templates resolve to an executable."""
        if not self.executable:
            raise CodecUnavailable(
                "no codec executable configured; set VIDCORRUPT_CODEC or build "
                "the bundled tool with scripts/build_hevc_codec.sh"
            )
        argv0 = shlex.split(self.executable)[0]
        if shutil.which(argv0) is None and not os.access(argv0, os.X_OK):
            raise CodecUnavailable(f"codec executable not found or not executable: {argv0}")
        return self

    def is_available(self) -> bool:
        try:
            self.require()
            return True
        except CodecUnavailable:
            return False


@dataclass(frozen=True)
class CrfMode:
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 51:
            raise ValueError(f"CRF must be in 0..51, got {self.value}")


@dataclass(frozen=True)
class AbrMode:
    divisor: int
    source_bitrate: int  # bits per second of the original file

    def __post_init__(self) -> None:
        if self.divisor < 1:
            raise ValueError(f"divisor must be >= 1, got {self.divisor}")
        if self.source_bitrate <= 0:
            raise ValueError("source bitrate must be positive")

    @property
    def target_bitrate(self) -> int:
        return max(self.source_bitrate // self.divisor, 1)


def _fps_arg(fps: Fraction) -> str:
    fps = Fraction(fps)
    return str(fps.numerator) if fps.denominator == 1 else f"{fps.numerator}/{fps.denominator}"


def _run_template(template: str, config: CodecConfig, error_cls, **fields) -> subprocess.CompletedProcess:
    config.require()
    command = template
    for key, value in {"exe": config.executable, **fields}.items():
        command = command.replace("{" + key + "}", str(value))
    argv = shlex.split(command)
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        raise error_cls(
            f"codec invocation failed (exit {proc.returncode}): {' '.join(argv)}\n{proc.stderr.strip()}"
        )
    return proc


class _WorkDir:
    """Per-invocation temp directory: removed on success, kept for diagnostics on failure."""

    def __init__(self, config: CodecConfig):
        self.path = Path(tempfile.mkdtemp(prefix="vidcorrupt-", dir=config.workdir))

    def __enter__(self) -> Path:
        return self.path

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            shutil.rmtree(self.path, ignore_errors=True)


def encode(clip: VideoClip, mode: CrfMode | AbrMode, config: CodecConfig) -> EncodedStream:
    """Encode a clip to an Annex-B H.265 elementary stream."""
    with _WorkDir(config) as work:
        src = work / "frames.ppms"
        dst = work / "stream.h265"
        src.write_bytes(clip_to_ppm_bytes(clip))
        template = config.encode_crf_template if isinstance(mode, CrfMode) else config.encode_abr_template
        if config.extra_x265_params:
            template += f" --x265-params {config.extra_x265_params}"
        fields = {"input": src, "output": dst, "fps": _fps_arg(clip.fps)}
        if isinstance(mode, CrfMode):
            fields["crf"] = mode.value
        else:
            fields["bitrate"] = mode.target_bitrate
        _run_template(template, config, EncodeFailed, **fields)
        data = dst.read_bytes()
    return EncodedStream.parse(
        data, clip.fps, (clip.width, clip.height), clip.n_frames
    )


def decode(stream: EncodedStream, config: CodecConfig) -> VideoClip:
    """Decode an elementary stream back to pixels.

    With error concealment enabled (the default), missing frames are
    substituted by freezing the last decoded frame so the output matches the
    source frame count; without it the raw decoder output is returned.
    Raises DecodeFailed when the decoder yields zero frames.
    """
    if not stream.data:
        raise DecodeFailed("empty stream")
    with _WorkDir(config) as work:
        src = work / "stream.h265"
        dst = work / "frames.ppms"
        src.write_bytes(stream.data)
        try:
            _run_template(config.decode_template, config, DecodeFailed, input=src, output=dst)
        except DecodeFailed:
            raise
        raw = dst.read_bytes()
    try:
        frames = read_ppm_stream(raw)
    except ValueError as exc:
        raise DecodeFailed(f"decoder produced unusable frames: {exc}") from exc
    w, h = stream.source_dims
    if frames.shape[1] != h or frames.shape[2] != w:
        raise DecodeFailed(
            f"decoded dimensions {frames.shape[2]}x{frames.shape[1]} do not match source {w}x{h}"
        )
    if config.error_concealment:
        if frames.shape[0] < stream.n_frames:
            pad = np.broadcast_to(
                frames[-1], (stream.n_frames - frames.shape[0],) + frames.shape[1:]
            )
            frames = np.concatenate([frames, pad], axis=0)
        elif frames.shape[0] > stream.n_frames:
            frames = frames[: stream.n_frames]
    return VideoClip.from_uint8(frames, stream.source_fps)


def compression_corrupt(
    clip: VideoClip,
    kind: K,
    severity: int,
    profile: DatasetProfile,
    seed: int,
    config: CodecConfig,
    source_bitrate: int | None = None,
) -> VideoClip:
    """Encode -> (optional channel damage) -> decode for the codec-domain kinds."""
    if severity == 0:
        return clip
    params = lookup_params(kind, profile, severity)
    if kind is K.CRF:
        return decode(encode(clip, CrfMode(params), config), config)
    if kind is K.ABR:
        if source_bitrate is None:
            raise ValueError(
                "ABR needs the source bitrate (original file size / duration), supplied by the caller"
            )
        return decode(encode(clip, AbrMode(params, source_bitrate), config), config)
    carrier = encode(clip, CrfMode(CARRIER_CRF), config)
    if kind is K.BIT_ERROR:
        damaged = bit_error(carrier, params, seed)
    elif kind is K.PACKET_LOSS:
        damaged = packet_loss(carrier, params, seed)
    else:
        raise ValueError(f"{kind} is not a codec-domain corruption")
    return decode(damaged, config)


# ---------------------------------------------------------------------------
# Video-file helpers built on the same external tool


def probe_video(path, config: CodecConfig) -> dict:
    proc = _run_template(config.probe_template, config, DecodeFailed, input=path)
    return json.loads(proc.stdout)


def measure_bitrate(path, config: CodecConfig) -> int:
    """Source bitrate in bits/s: container byte size over duration."""
    info = probe_video(path, config)
    duration = info["duration"]
    if duration <= 0:
        raise DecodeFailed(f"cannot measure bitrate of {path}: unknown duration")
    return max(int(info["bytes"] * 8 / duration), 1)


def read_video_file(path, config: CodecConfig, fps=None) -> VideoClip:
    """Decode a video file (container or elementary stream) into a clip."""
    path = Path(path)
    if path.suffix == ".ppms":
        if fps is None:
            raise ValueError("raw frame streams carry no frame rate; pass fps explicitly")
        return clip_from_ppm_bytes(path.read_bytes(), fps)
    if fps is None:
        info = probe_video(path, config)
        if info["fps_num"] <= 0 or info["fps_den"] <= 0:
            raise DecodeFailed(f"cannot determine frame rate of {path}; pass fps explicitly")
        fps = Fraction(info["fps_num"], info["fps_den"])
    with _WorkDir(config) as work:
        dst = work / "frames.ppms"
        _run_template(config.decode_template, config, DecodeFailed, input=path, output=dst)
        frames = read_ppm_stream(dst.read_bytes())
    return VideoClip.from_uint8(frames, fps)


def write_video_file(path, clip: VideoClip, config: CodecConfig, crf: int = 0) -> None:
    """Write a clip to a video file; CRF 0 keeps the write near-lossless."""
    path = Path(path)
    if path.suffix == ".ppms":
        path.write_bytes(clip_to_ppm_bytes(clip))
        return
    with _WorkDir(config) as work:
        src = work / "frames.ppms"
        src.write_bytes(clip_to_ppm_bytes(clip))
        template = config.encode_crf_template
        if config.extra_x265_params:
            template += f" --x265-params {config.extra_x265_params}"
        _run_template(
            template,
            config,
            EncodeFailed,
            input=src,
            output=path,
            fps=_fps_arg(clip.fps),
            crf=crf,
        )


def default_config() -> CodecConfig:
    return CodecConfig()
