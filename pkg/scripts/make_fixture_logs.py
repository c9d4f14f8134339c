#!/usr/bin/env python3
"""Generate synthetic prediction logs with planted per-cell accuracies.

Useful for exercising `vidcorrupt eval` end to end without a model: the
default plant reproduces a published leaderboard row (clean 69.4, mPC 56.9,
rPC 82.0).
"""

import argparse
import sys
from pathlib import Path

from vidcorrupt.kinds import BENCHMARK_KINDS
from vidcorrupt.metrics import PredictionRecord, write_prediction_log

DEFAULT_PLANT = dict(
    zip(
        BENCHMARK_KINDS,
        (50.8, 51.5, 47.6, 46.4, 62.0, 56.8, 54.9, 68.3, 62.8, 59.1, 59.9, 62.9),
    )
)
DEFAULT_CLEAN = 69.4


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--per-cell", type=int, default=1000)
    parser.add_argument("--out-dir", default=".")
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    total = args.per_cell

    clean = [
        PredictionRecord(f"v{i}", None, 0, "a", "a" if i < round(DEFAULT_CLEAN / 100 * total) else "b")
        for i in range(total)
    ]
    corrupted = []
    for kind, acc in DEFAULT_PLANT.items():
        n_correct = round(acc / 100 * total)
        for severity in range(1, 6):
            corrupted.extend(
                PredictionRecord(f"v{i}", kind, severity, "a", "a" if i < n_correct else "b")
                for i in range(total)
            )

    write_prediction_log(out / "fixture_predictions.jsonl", corrupted)
    write_prediction_log(out / "fixture_clean.jsonl", clean)
    print(f"wrote {len(corrupted)} corrupted and {len(clean)} clean records under {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
