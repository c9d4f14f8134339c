#!/usr/bin/env python3
"""Sweep every corruption kind over severities 1..5 on synthetic probe clips
and write the severity-vs-PSNR curves as CSV (plot-ready, one row per cell).

Example:
    python scripts/severity_psnr_sweep.py --clips 5 --frames 32 --out sweep.csv
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from conftest import make_probe_clip  # noqa: E402

from vidcorrupt.clip import clip_psnr  # noqa: E402
from vidcorrupt.codec import CodecConfig, measure_bitrate, read_video_file, write_video_file  # noqa: E402
from vidcorrupt.dispatch import apply  # noqa: E402
from vidcorrupt.kinds import BENCHMARK_KINDS, CODEC_KINDS, CorruptionSpec, DatasetProfile  # noqa: E402
from vidcorrupt.kinds import CorruptionKind as K  # noqa: E402
from vidcorrupt.seeding import derive_stream_seed  # noqa: E402
from vidcorrupt.temporal import aligned_psnr  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--clips", type=int, default=5)
    parser.add_argument("--frames", type=int, default=32)
    parser.add_argument("--side", type=int, default=224)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--profile", default="kinetics", choices=["kinetics", "ssv2"])
    parser.add_argument("--out", default="severity_psnr_sweep.csv")
    parser.add_argument("--workdir", default="sweep_sources")
    args = parser.parse_args()

    config = CodecConfig()
    config.require()
    profile = DatasetProfile(args.profile)

    workdir = Path(args.workdir)
    workdir.mkdir(exist_ok=True)
    sources = []
    for i in range(args.clips):
        path = workdir / f"probe_{i}.mp4"
        if not path.exists():
            clip = make_probe_clip(args.seed * 1000 + i, args.frames, args.side, args.side)
            write_video_file(path, clip, config, crf=18)
        clean = read_video_file(path, config)
        sources.append((clean, measure_bitrate(path, config), f"probe_{i}"))

    rows = ["kind,severity,psnr"]
    for kind in BENCHMARK_KINDS:
        for severity in range(1, 6):
            values = []
            for clean, bitrate, vid in sources:
                stream_seed = derive_stream_seed(args.seed, vid, kind, severity)
                spec = CorruptionSpec(kind, severity, profile, stream_seed)
                out = apply(
                    clean,
                    spec,
                    config=config,
                    source_bitrate=bitrate if kind is K.ABR else None,
                )
                values.append(aligned_psnr(clean, out))
            finite = [v for v in values if v != float("inf")]
            mean = float(np.mean(finite)) if finite else float("inf")
            rows.append(f"{kind.value},{severity},{mean:.4f}")
            print(rows[-1])

    Path(args.out).write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
