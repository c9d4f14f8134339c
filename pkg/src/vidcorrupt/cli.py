"""Command-line surface.

Subcommands: corrupt (single file), build (benchmark dataset), eval
(robustness metrics from prediction logs), inspect (severity-vs-PSNR
curves), table (severity parameters as JSON).

Exit codes are fixed so scripts can branch: 0 ok, 1 I/O or build failure,
2 codec unavailable, 3 bad arguments, 4 incomplete prediction grid.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import benchmark as bench_mod
from .benchmark import BenchmarkManifest, BuildError, CleanManifest, sha256_file
from .clip import VideoClip
from .codec import (
    CodecConfig,
    CodecUnavailable,
    DecodeFailed,
    EncodeFailed,
    measure_bitrate,
    read_video_file,
    write_video_file,
)
from .dispatch import apply
from .kinds import BENCHMARK_KINDS, CorruptionSpec, DatasetProfile
from .kinds import CorruptionKind as K
from .kinds import kind_from_name
from .metrics import (
    MissingCell,
    accuracy_table,
    read_prediction_log,
    render,
    split_report,
)
from .nal import BitstreamError
from .severity import (
    UnknownSeverity,
    gaussian_noise_std,
    lookup_params,
    severity_table_as_data,
)
from .temporal import aligned_psnr

EXIT_OK = 0
EXIT_IO = 1
EXIT_CODEC = 2
EXIT_ARGS = 3
EXIT_MISSING_CELL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; keep 2 for codec errors
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_ARGS)


@dataclass(frozen=True)
class CliConfig:
    """Validated global options shared by all subcommands."""

    codec: CodecConfig
    jobs: int
    master_seed: int
    profile: DatasetProfile
    verbosity: int

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        codec = (
            CodecConfig.from_file(args.codec_config)
            if getattr(args, "codec_config", None)
            else CodecConfig()
        )
        jobs = getattr(args, "jobs", 1)
        if jobs < 1:
            raise ValueError("--jobs must be >= 1")
        seed = getattr(args, "seed", 0)
        if not 0 <= seed < 2**64:
            raise ValueError("--seed must be an unsigned 64-bit integer")
        profile = DatasetProfile(getattr(args, "profile", "kinetics"))
        verbosity = getattr(args, "verbose", 0)
        logging.basicConfig(
            level=logging.WARNING - 10 * min(verbosity, 2),
            format="%(levelname)s %(name)s: %(message)s",
        )
        return cls(codec, jobs, seed, profile, verbosity)


def _params_text(kind: K, profile: DatasetProfile, severity: int) -> str:
    if severity == 0:
        return "identity"
    if kind is K.GAUSSIAN_NOISE:
        return f"std={gaussian_noise_std(severity)}"
    return f"params={lookup_params(kind, profile, severity)}"


def _read_input(path: Path, cfg: CliConfig, fps) -> VideoClip:
    if path.suffix == ".ppms" and fps is None:
        raise ValueError(".ppms inputs need --fps")
    return read_video_file(path, cfg.codec, fps=fps)


def _write_output(path: Path, clip: VideoClip, cfg: CliConfig) -> None:
    write_video_file(path, clip, cfg.codec, crf=0)


def _corrupt_one(cfg: CliConfig, input_path, output_path, kind, severity, profile, seed, fps) -> str:
    src = Path(input_path)
    dst = Path(output_path)
    if not src.exists():
        raise FileNotFoundError(f"input not found: {src}")

    if severity == 0:
        if src.suffix == dst.suffix:
            shutil.copyfile(src, dst)  # identity: pass the bytes through
        else:
            _write_output(dst, _read_input(src, cfg, fps), cfg)
        digest = sha256_file(dst)
        print(f"kind={kind.value} severity=0 identity")
        print("psnr=inf")
        print(f"sha256={digest}")
        return digest

    clean = _read_input(src, cfg, fps)
    source_bitrate = None
    if kind is K.ABR:
        if src.suffix == ".ppms":
            raise ValueError("ABR needs a container input to measure the source bitrate")
        source_bitrate = measure_bitrate(src, cfg.codec)
    spec = CorruptionSpec(kind, severity, profile, seed)
    corrupted = apply(clean, spec, config=cfg.codec, source_bitrate=source_bitrate)
    _write_output(dst, corrupted, cfg)
    digest = sha256_file(dst)
    print(f"kind={kind.value} severity={severity} {_params_text(kind, profile, severity)}")
    print(f"psnr={aligned_psnr(clean, corrupted):.3f}")
    print(f"sha256={digest}")
    return digest


def cmd_corrupt(args) -> int:
    cfg = CliConfig.from_args(args)
    if args.batch:
        failures = 0
        with open(args.batch, encoding="utf-8") as fh:
            jobs = [json.loads(ln) for ln in fh if ln.strip()]
        for job in jobs:
            try:
                _corrupt_one(
                    cfg,
                    job["input"],
                    job["output"],
                    kind_from_name(job["kind"]),
                    int(job["severity"]),
                    DatasetProfile(job.get("profile", cfg.profile.value)),
                    int(job.get("seed", cfg.master_seed)),
                    Fraction(job["fps"]) if "fps" in job else None,
                )
            except Exception as exc:
                failures += 1
                print(f"failed: {job.get('input')}: {exc}", file=sys.stderr)
        return EXIT_IO if failures else EXIT_OK

    kind = kind_from_name(args.kind)
    _corrupt_one(
        cfg,
        args.input,
        args.output,
        kind,
        args.severity,
        cfg.profile,
        cfg.master_seed,
        Fraction(args.fps) if args.fps else None,
    )
    return EXIT_OK


def cmd_build(args) -> int:
    cfg = CliConfig.from_args(args)
    manifest = CleanManifest.read(args.manifest, profile=cfg.profile)
    kinds = BENCHMARK_KINDS
    if args.kinds:
        kinds = tuple(kind_from_name(name) for name in args.kinds.split(","))
    try:
        result = bench_mod.build(
            manifest,
            cfg.master_seed,
            args.out_dir,
            config=cfg.codec,
            kinds=kinds,
            jobs=cfg.jobs,
            resume=args.resume,
        )
    except BuildError as exc:
        _write_failure_report(args.out_dir, exc.result)
        print(f"build failed: {exc}", file=sys.stderr)
        return EXIT_IO
    _write_failure_report(args.out_dir, result)
    print(
        f"built {len(result.manifest.items)} items "
        f"({len(result.failures)} failures) under {args.out_dir}"
    )
    return EXIT_OK


def _write_failure_report(out_dir, result) -> None:
    report = [
        {"video_id": f.video_id, "kind": f.kind.value, "severity": f.severity, "error": f.error}
        for f in result.failures
    ]
    Path(out_dir, "failure_report.json").write_text(
        json.dumps(report, indent=2) + "\n", encoding="utf-8"
    )


def cmd_eval(args) -> int:
    CliConfig.from_args(args)
    records = read_prediction_log(args.predictions)
    records += read_prediction_log(args.clean_predictions)
    table = accuracy_table(records, top_k=args.top_k)
    report = split_report(table)
    print(render([(args.approach, report)], fmt=args.format), end="")

    out_path = Path(args.out) if args.out else Path(args.predictions).with_suffix(".report.json")
    doc = {
        "approach": args.approach,
        "clean_accuracy": report.clean_accuracy,
        "mpc": report.mpc,
        "rpc": report.rpc,
        "spatial": {"mpc": report.spatial_mpc, "rpc": report.spatial_rpc},
        "temporal": {"mpc": report.temporal_mpc, "rpc": report.temporal_rpc},
        "per_corruption": {k.value: v for k, v in report.per_corruption.items()},
    }
    out_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_inspect(args) -> int:
    cfg = CliConfig.from_args(args)
    manifest_path = Path(args.benchmark_manifest)
    bench = BenchmarkManifest.read(manifest_path)
    root = manifest_path.parent

    video_ids = sorted(bench.clean_videos)[: args.probes]
    clean_clips = {
        vid: read_video_file(bench.clean_videos[vid], cfg.codec) for vid in video_ids
    }

    lines = ["kind,severity,psnr"]
    for kind in bench.kinds:
        for severity in bench.severities:
            values = []
            for item in bench.items:
                if item.kind is kind and item.severity == severity and item.video_id in clean_clips:
                    corrupted = read_video_file(root / item.path, cfg.codec)
                    values.append(aligned_psnr(clean_clips[item.video_id], corrupted))
            if values:
                finite = [v for v in values if v != float("inf")]
                mean = float(np.mean(finite)) if finite else float("inf")
                lines.append(f"{kind.value},{severity},{mean:.4f}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_table(args) -> int:
    CliConfig.from_args(args)
    print(json.dumps(severity_table_as_data(), indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="vidcorrupt", description=__doc__)
    parser.add_argument("--verbose", "-v", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corrupt", help="corrupt a single video file")
    p.add_argument("input")
    p.add_argument("--output", "-o", required=False)
    p.add_argument("--kind", required=False)
    p.add_argument("--severity", type=int, default=3)
    p.add_argument("--profile", default="kinetics", choices=[x.value for x in DatasetProfile])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fps", default=None, help="frame rate for raw .ppms inputs, e.g. 24 or 30000/1001")
    p.add_argument("--codec-config", default=None)
    p.add_argument("--batch", default=None, help="JSONL job list; 'input' is then ignored")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("build", help="build a corrupted benchmark dataset")
    p.add_argument("manifest")
    p.add_argument("out_dir")
    p.add_argument("--profile", default="kinetics", choices=[x.value for x in DatasetProfile])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kinds", default=None, help="comma-separated subset of corruption kinds")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--codec-config", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="compute robustness metrics from prediction logs")
    p.add_argument("predictions")
    p.add_argument("clean_predictions")
    p.add_argument("--approach", default="approach")
    p.add_argument("--format", default="markdown", choices=["markdown", "csv"])
    p.add_argument("--top-k", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="emit severity-vs-PSNR curves for a built benchmark")
    p.add_argument("benchmark_manifest")
    p.add_argument("--probes", type=int, default=10)
    p.add_argument("--out", default=None)
    p.add_argument("--codec-config", default=None)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("table", help="print the severity parameter table as JSON")
    p.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "corrupt" and not args.batch:
        if not args.kind or not args.output:
            parser.error("corrupt needs --kind and --output (or --batch)")
    try:
        return args.func(args)
    except CodecUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODEC
    except MissingCell as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_CELL
    except (ValueError, UnknownSeverity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (OSError, DecodeFailed, EncodeFailed, BitstreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
