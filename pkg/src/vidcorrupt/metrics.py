"""Robustness metrics from prediction logs.

Accuracy per (corruption, severity) cell feeds three summary numbers:
per-corruption accuracy averaged over severities, its mean over all
corruption kinds (the benchmark's ranking metric), and that mean relative
to clean accuracy. All math runs in double precision; rounding to one
decimal happens only at render time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .kinds import BENCHMARK_KINDS, SPATIAL_KINDS, TEMPORAL_KINDS
from .kinds import CorruptionKind as K
from .kinds import kind_from_name

#: Kind name used for clean (uncorrupted) records in prediction logs.
CLEAN_KIND_NAME = "clean"

N_SEVERITIES = 5


class MissingCell(ValueError):
    """The prediction log lacks records for one or more required cells."""

    def __init__(self, missing: Sequence[tuple[str, int]]):
        self.missing = tuple(missing)
        listed = ", ".join(f"({name}, {sev})" for name, sev in self.missing)
        super().__init__(f"missing prediction cells: {listed}")


@dataclass(frozen=True)
class PredictionRecord:
    """One classification outcome; kind None with severity 0 means clean."""

    video_id: str
    kind: K | None
    severity: int
    true_label: str
    predicted_label: str | tuple[str, ...]

    def __post_init__(self) -> None:
        if (self.kind is None) != (self.severity == 0):
            raise ValueError("severity 0 if and only if the record is clean")

    @property
    def ranked_predictions(self) -> tuple[str, ...]:
        if isinstance(self.predicted_label, (list, tuple)):
            return tuple(self.predicted_label)
        return (self.predicted_label,)

    def correct(self, top_k: int = 1) -> bool:
        return self.true_label in self.ranked_predictions[:top_k]


@dataclass(frozen=True)
class AccuracyTable:
    """CA_clean plus the rectangular per-(kind, severity) accuracy grid, in percent."""

    clean_accuracy: float
    cells: Mapping[K, tuple[float, ...]]

    def __post_init__(self) -> None:
        widths = {len(v) for v in self.cells.values()}
        if len(widths) > 1:
            raise ValueError("accuracy table must be rectangular")
        for kind, row in self.cells.items():
            for v in (self.clean_accuracy, *row):
                if not 0.0 <= v <= 100.0:
                    raise ValueError(f"accuracies must be percentages in [0, 100], got {v}")

    @property
    def kinds(self) -> tuple[K, ...]:
        return tuple(self.cells)

    @property
    def n_severities(self) -> int:
        return len(next(iter(self.cells.values())))

    @classmethod
    def from_pc_values(cls, clean_accuracy: float, pc_values: Mapping[K, float], n_severities: int = N_SEVERITIES) -> "AccuracyTable":
        """Constant severity rows; handy for fixtures quoted as per-corruption values."""
        return cls(clean_accuracy, {k: (float(v),) * n_severities for k, v in pc_values.items()})


def accuracy_table(
    records: Iterable[PredictionRecord],
    kinds: Sequence[K] = BENCHMARK_KINDS,
    n_severities: int = N_SEVERITIES,
    top_k: int = 1,
) -> AccuracyTable:
    """Aggregate records into the accuracy grid.

    Gaussian-noise records are ignored (augmentation, not a benchmark kind).
    Raises MissingCell listing every required (kind, severity) pair - and
    clean - that has no records.
    """
    counts: dict[tuple[K | None, int], list[int]] = {}
    for rec in records:
        if rec.kind is K.GAUSSIAN_NOISE:
            continue
        correct, total = counts.setdefault((rec.kind, rec.severity), [0, 0])
        counts[(rec.kind, rec.severity)] = [correct + rec.correct(top_k), total + 1]

    missing = []
    if (None, 0) not in counts:
        missing.append((CLEAN_KIND_NAME, 0))
    for kind in kinds:
        for sev in range(1, n_severities + 1):
            if (kind, sev) not in counts:
                missing.append((kind.value, sev))
    if missing:
        raise MissingCell(missing)

    def cell(key) -> float:
        correct, total = counts[key]
        return 100.0 * correct / total

    return AccuracyTable(
        clean_accuracy=cell((None, 0)),
        cells={k: tuple(cell((k, s)) for s in range(1, n_severities + 1)) for k in kinds},
    )


def pc(table: AccuracyTable, kind: K) -> float:
    """Mean accuracy for one corruption across its severity levels."""
    row = table.cells[kind]
    return sum(row) / len(row)


def mpc(table: AccuracyTable, kinds: Sequence[K] | None = None) -> float:
    """Mean of per-corruption accuracies over the given kinds (default: all)."""
    kinds = table.kinds if kinds is None else tuple(kinds)
    return sum(pc(table, k) for k in kinds) / len(kinds)


def rpc(table: AccuracyTable, kinds: Sequence[K] | None = None) -> float:
    """mpc normalized by clean accuracy, as a percentage."""
    if table.clean_accuracy == 0:
        raise ZeroDivisionError("clean accuracy is zero; the clean baseline is unusable")
    return 100.0 * mpc(table, kinds) / table.clean_accuracy


@dataclass(frozen=True)
class RobustnessReport:
    clean_accuracy: float
    per_corruption: Mapping[K, float]
    mpc: float
    rpc: float
    spatial_mpc: float
    spatial_rpc: float
    temporal_mpc: float
    temporal_rpc: float


def split_report(table: AccuracyTable) -> RobustnessReport:
    """Overall and spatial/temporal-split metrics; requires the full 12-kind grid."""
    for kind in BENCHMARK_KINDS:
        if kind not in table.cells:
            raise MissingCell([(kind.value, 0)])
    return RobustnessReport(
        clean_accuracy=table.clean_accuracy,
        per_corruption={k: pc(table, k) for k in BENCHMARK_KINDS},
        mpc=mpc(table, BENCHMARK_KINDS),
        rpc=rpc(table, BENCHMARK_KINDS),
        spatial_mpc=mpc(table, SPATIAL_KINDS),
        spatial_rpc=rpc(table, SPATIAL_KINDS),
        temporal_mpc=mpc(table, TEMPORAL_KINDS),
        temporal_rpc=rpc(table, TEMPORAL_KINDS),
    )


# ---------------------------------------------------------------------------
# Rendering

_DISPLAY_NAMES = {
    K.SHOT_NOISE: "Shot Noise",
    K.RAIN: "Rain",
    K.FOG: "Fog",
    K.CONTRAST: "Contrast",
    K.BRIGHTNESS: "Brightness",
    K.SATURATE: "Saturate",
    K.MOTION_BLUR: "Motion Blur",
    K.FRAME_RATE: "Frame Rate",
    K.ABR: "ABR",
    K.CRF: "CRF",
    K.BIT_ERROR: "Bit Error",
    K.PACKET_LOSS: "Packet Loss",
}


def _rows_sorted(reports) -> list[tuple[str, RobustnessReport]]:
    if isinstance(reports, RobustnessReport):
        reports = [("approach", reports)]
    return sorted(reports, key=lambda item: -item[1].mpc)


def render(reports, fmt: str = "markdown") -> str:
    """Leaderboard-style table: Clean, mPC, rPC, then the 12 per-corruption
    columns (spatial then temporal); rows ordered by descending mPC; one
    decimal place.

    `reports` is a RobustnessReport or a sequence of (name, report) pairs;
    fmt is "markdown" or "csv".
    """
    rows = _rows_sorted(reports)
    if fmt == "markdown":
        headers = ["Approach", "Clean", "mPC", "rPC"] + [
            _DISPLAY_NAMES[k] for k in BENCHMARK_KINDS
        ]
        lines = [
            "| " + " | ".join(headers) + " |",
            "|" + "|".join("---" for _ in headers) + "|",
        ]
        for name, rep in rows:
            cells = [name, f"{rep.clean_accuracy:.1f}", f"{rep.mpc:.1f}", f"{rep.rpc:.1f}"]
            cells += [f"{rep.per_corruption[k]:.1f}" for k in BENCHMARK_KINDS]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        headers = ["approach", "clean", "mpc", "rpc"] + [k.value for k in BENCHMARK_KINDS]
        lines = [",".join(headers)]
        for name, rep in rows:
            cells = [name, f"{rep.clean_accuracy:.1f}", f"{rep.mpc:.1f}", f"{rep.rpc:.1f}"]
            cells += [f"{rep.per_corruption[k]:.1f}" for k in BENCHMARK_KINDS]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown render format {fmt!r} (expected 'markdown' or 'csv')")


def parse_rendered(text: str, fmt: str = "markdown") -> list[dict]:
    """Parse a rendered table back into numbers (for round-trip checks)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    rows = []
    if fmt == "markdown":
        body = [ln for ln in lines[2:]]
        for ln in body:
            cells = [c.strip() for c in ln.strip().strip("|").split("|")]
            rows.append(cells)
    elif fmt == "csv":
        rows = [ln.split(",") for ln in lines[1:]]
    else:
        raise ValueError(f"unknown render format {fmt!r}")
    out = []
    for cells in rows:
        name, clean, mpc_, rpc_ = cells[0], *map(float, cells[1:4])
        per = {k: float(v) for k, v in zip(BENCHMARK_KINDS, cells[4:])}
        out.append({"approach": name, "clean": clean, "mpc": mpc_, "rpc": rpc_, "pc": per})
    return out


# ---------------------------------------------------------------------------
# Prediction-log I/O (JSON lines)


def record_to_json(rec: PredictionRecord) -> str:
    return json.dumps(
        {
            "video_id": rec.video_id,
            "kind": CLEAN_KIND_NAME if rec.kind is None else rec.kind.value,
            "severity": rec.severity,
            "true_label": rec.true_label,
            "predicted_label": list(rec.predicted_label)
            if isinstance(rec.predicted_label, (list, tuple))
            else rec.predicted_label,
        },
        sort_keys=True,
    )


def record_from_json(line: str) -> PredictionRecord:
    raw = json.loads(line)
    kind_name = raw["kind"]
    kind = None if kind_name == CLEAN_KIND_NAME else kind_from_name(kind_name)
    predicted = raw["predicted_label"]
    if isinstance(predicted, list):
        predicted = tuple(predicted)
    return PredictionRecord(
        video_id=raw["video_id"],
        kind=kind,
        severity=int(raw["severity"]),
        true_label=raw["true_label"],
        predicted_label=predicted,
    )


def read_prediction_log(path) -> list[PredictionRecord]:
    with open(path, encoding="utf-8") as fh:
        return [record_from_json(line) for line in fh if line.strip()]


def write_prediction_log(path, records: Iterable[PredictionRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(record_to_json(rec) + "\n")
