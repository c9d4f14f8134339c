"""Benchmark dataset construction and verification.

`build` expands a clean-video manifest over the corruption grid, writes one
near-lossless MP4 per (video, kind, severity) under
out_dir/{kind}/{severity}/{video_id}.mp4, and records a SHA-256 digest per
output in a machine-readable manifest. Per-item seeds depend only on
(master_seed, video_id, kind, severity), so rebuilding reproduces the same
bytes.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .codec import CodecConfig, measure_bitrate, read_video_file, write_video_file
from .dispatch import apply
from .kinds import BENCHMARK_KINDS, CODEC_KINDS, CorruptionSpec, DatasetProfile
from .kinds import CorruptionKind as K
from .kinds import kind_from_name
from .seeding import derive_stream_seed

log = logging.getLogger(__name__)

MANIFEST_FILENAME = "benchmark_manifest.json"

#: Fraction of failed items above which a build is considered failed.
FAILURE_THRESHOLD = 0.01


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    path: str
    label: str
    fps: Fraction
    frame_count: int

    def to_json(self) -> dict:
        return {
            "id": self.video_id,
            "path": self.path,
            "label": self.label,
            "fps": str(self.fps),
            "frame_count": self.frame_count,
        }

    @classmethod
    def from_json(cls, raw: dict) -> "ManifestEntry":
        return cls(
            video_id=str(raw["id"]),
            path=str(raw["path"]),
            label=str(raw["label"]),
            fps=Fraction(raw["fps"]),
            frame_count=int(raw["frame_count"]),
        )


@dataclass(frozen=True)
class CleanManifest:
    entries: tuple[ManifestEntry, ...]
    profile: DatasetProfile

    def __post_init__(self) -> None:
        ids = [e.video_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("video ids in a manifest must be unique")

    @classmethod
    def read(cls, path, profile: DatasetProfile | None = None) -> "CleanManifest":
        """Read either the line-delimited (.jsonl) or single-document (.json) form.

        The line-delimited form carries no profile, so one must be supplied.
        """
        path = Path(path)
        if path.suffix == ".jsonl":
            if profile is None:
                raise ValueError("line-delimited manifests need an explicit profile")
            with open(path, encoding="utf-8") as fh:
                entries = tuple(
                    ManifestEntry.from_json(json.loads(ln)) for ln in fh if ln.strip()
                )
            return cls(entries, profile)
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls(
            tuple(ManifestEntry.from_json(e) for e in doc["entries"]),
            DatasetProfile(doc["profile"]),
        )

    def write(self, path) -> None:
        path = Path(path)
        if path.suffix == ".jsonl":
            with open(path, "w", encoding="utf-8") as fh:
                for e in self.entries:
                    fh.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
        else:
            doc = {"profile": self.profile.value, "entries": [e.to_json() for e in self.entries]}
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ItemRecord:
    video_id: str
    kind: K
    severity: int
    path: str  # relative to the benchmark root
    seed: int
    sha256: str


@dataclass(frozen=True)
class BenchmarkManifest:
    profile: DatasetProfile
    master_seed: int
    kinds: tuple[K, ...]
    severities: tuple[int, ...]
    clean_videos: dict  # video_id -> source path
    items: tuple[ItemRecord, ...]
    toolkit_version: str

    def to_json(self) -> dict:
        return {
            "toolkit_version": self.toolkit_version,
            "profile": self.profile.value,
            "master_seed": self.master_seed,
            "kinds": [k.value for k in self.kinds],
            "severities": list(self.severities),
            "clean_videos": dict(self.clean_videos),
            "items": [
                {
                    "video_id": it.video_id,
                    "kind": it.kind.value,
                    "severity": it.severity,
                    "path": it.path,
                    "seed": it.seed,
                    "sha256": it.sha256,
                }
                for it in self.items
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BenchmarkManifest":
        return cls(
            profile=DatasetProfile(doc["profile"]),
            master_seed=int(doc["master_seed"]),
            kinds=tuple(kind_from_name(k) for k in doc["kinds"]),
            severities=tuple(doc["severities"]),
            clean_videos=dict(doc["clean_videos"]),
            items=tuple(
                ItemRecord(
                    video_id=it["video_id"],
                    kind=kind_from_name(it["kind"]),
                    severity=int(it["severity"]),
                    path=it["path"],
                    seed=int(it["seed"]),
                    sha256=it["sha256"],
                )
                for it in doc["items"]
            ),
            toolkit_version=doc["toolkit_version"],
        )

    def write(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def read(cls, path) -> "BenchmarkManifest":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class BuildFailureItem:
    video_id: str
    kind: K
    severity: int
    error: str


@dataclass(frozen=True)
class BuildResult:
    manifest: BenchmarkManifest
    failures: tuple[BuildFailureItem, ...]


class BuildError(RuntimeError):
    """More than the tolerated fraction of grid items failed."""

    def __init__(self, result: BuildResult, threshold: float):
        self.result = result
        total = len(result.manifest.items) + len(result.failures)
        super().__init__(
            f"{len(result.failures)} of {total} items failed (threshold {threshold:.0%})"
        )


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _item_relpath(video_id: str, kind: K, severity: int) -> str:
    return f"{kind.value}/{severity}/{video_id}.mp4"


def build(
    manifest: CleanManifest,
    master_seed: int,
    out_dir,
    config: CodecConfig | None = None,
    kinds: Sequence[K] = BENCHMARK_KINDS,
    severities: Sequence[int] = (1, 2, 3, 4, 5),
    jobs: int = 1,
    resume: bool = False,
    near_lossless_crf: int = 0,
    failure_threshold: float = FAILURE_THRESHOLD,
) -> BuildResult:
    """Build the corruption grid for every manifest entry.

    Per-item failures are collected rather than aborting; BuildError is
    raised only when more than `failure_threshold` of all items fail.
    With resume=True, outputs that already exist (always written atomically)
    are hashed and skipped instead of regenerated.
    """
    from . import __version__

    config = config or CodecConfig()
    config.require()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for entry in manifest.entries:
        if not Path(entry.path).exists():
            raise FileNotFoundError(f"manifest entry {entry.video_id}: missing file {entry.path}")

    items: list[ItemRecord] = []
    failures: list[BuildFailureItem] = []
    needs_bitrate = K.ABR in kinds

    def process_entry(entry: ManifestEntry) -> tuple[list[ItemRecord], list[BuildFailureItem]]:
        done: list[ItemRecord] = []
        failed: list[BuildFailureItem] = []
        clip = None
        bitrate = None
        for kind in kinds:
            for severity in severities:
                seed = derive_stream_seed(master_seed, entry.video_id, kind, severity)
                rel = _item_relpath(entry.video_id, kind, severity)
                target = out_dir / rel
                try:
                    if resume and target.exists():
                        done.append(
                            ItemRecord(entry.video_id, kind, severity, rel, seed, sha256_file(target))
                        )
                        continue
                    if clip is None:
                        clip = read_video_file(entry.path, config, fps=entry.fps)
                    if needs_bitrate and bitrate is None and kind is K.ABR:
                        bitrate = measure_bitrate(entry.path, config)
                    spec = CorruptionSpec(kind, severity, manifest.profile, seed)
                    corrupted = apply(clip, spec, config=config, source_bitrate=bitrate)
                    target.parent.mkdir(parents=True, exist_ok=True)
                    tmp = target.with_suffix(".tmp.mp4")
                    write_video_file(tmp, corrupted, config, crf=near_lossless_crf)
                    tmp.replace(target)
                    done.append(
                        ItemRecord(entry.video_id, kind, severity, rel, seed, sha256_file(target))
                    )
                except Exception as exc:  # collected, not fatal
                    log.warning("item failed: %s/%s/%s: %s", entry.video_id, kind, severity, exc)
                    failed.append(BuildFailureItem(entry.video_id, kind, severity, str(exc)))
        return done, failed

    if jobs > 1 and len(manifest.entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for done, failed in pool.map(process_entry, manifest.entries):
                items.extend(done)
                failures.extend(failed)
    else:
        for entry in manifest.entries:
            done, failed = process_entry(entry)
            items.extend(done)
            failures.extend(failed)

    bench = BenchmarkManifest(
        profile=manifest.profile,
        master_seed=master_seed,
        kinds=tuple(kinds),
        severities=tuple(severities),
        clean_videos={e.video_id: e.path for e in manifest.entries},
        items=tuple(items),
        toolkit_version=__version__,
    )
    bench.write(out_dir / MANIFEST_FILENAME)
    result = BuildResult(bench, tuple(failures))

    total = len(items) + len(failures)
    if total and len(failures) / total > failure_threshold:
        raise BuildError(result, failure_threshold)
    return result


@dataclass(frozen=True)
class Finding:
    path: str
    issue: str  # "missing" or "digest_mismatch"


@dataclass(frozen=True)
class VerifyReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def verify(bench: BenchmarkManifest, root) -> VerifyReport:
    """Re-hash every referenced output and report missing or altered files."""
    root = Path(root)
    findings = []
    for item in bench.items:
        target = root / item.path
        if not target.exists():
            findings.append(Finding(item.path, "missing"))
        elif sha256_file(target) != item.sha256:
            findings.append(Finding(item.path, "digest_mismatch"))
    return VerifyReport(tuple(findings))
