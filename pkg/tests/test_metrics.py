import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vidcorrupt.kinds import BENCHMARK_KINDS, SPATIAL_KINDS, TEMPORAL_KINDS
from vidcorrupt.kinds import CorruptionKind as K
from vidcorrupt.metrics import (
    AccuracyTable,
    MissingCell,
    PredictionRecord,
    accuracy_table,
    mpc,
    parse_rendered,
    pc,
    record_from_json,
    record_to_json,
    render,
    rpc,
    split_report,
)

# Published leaderboard rows reused as oracle fixtures (per-corruption
# accuracies in benchmark kind order, plus the clean accuracy).
S3D_KINETICS = dict(
    zip(BENCHMARK_KINDS, (50.8, 51.5, 47.6, 46.4, 62.0, 56.8, 54.9, 68.3, 62.8, 59.1, 59.9, 62.9))
)
S3D_CLEAN = 69.4
TIMESFORMER_KINETICS = dict(
    zip(BENCHMARK_KINDS, (74.7, 70.5, 55.3, 62.7, 76.1, 69.6, 70.8, 81.1, 76.5, 73.0, 71.5, 75.4))
)
TIMESFORMER_CLEAN = 82.2
SLOWFAST_SSV2 = dict(
    zip(BENCHMARK_KINDS, (26.9, 34.0, 32.4, 34.9, 40.4, 34.6, 27.7, 37.1, 44.4, 44.0, 36.1, 41.8))
)
SLOWFAST_CLEAN = 48.7


def make_records(planted: dict, clean=(694, 1000), per_cell_total=1000):
    """Records realizing exact per-cell accuracies (planted values have one decimal)."""
    records = []
    correct_clean, total_clean = clean
    for i in range(total_clean):
        records.append(
            PredictionRecord(f"v{i}", None, 0, "a", "a" if i < correct_clean else "b")
        )
    for kind, acc in planted.items():
        n_correct = round(acc / 100 * per_cell_total)
        for sev in range(1, 6):
            for i in range(per_cell_total):
                records.append(
                    PredictionRecord(
                        f"v{i}", kind, sev, "a", "a" if i < n_correct else "b"
                    )
                )
    return records


class TestAccuracyTable:
    def test_all_correct_gives_100_everywhere(self):
        planted = {k: 100.0 for k in BENCHMARK_KINDS}
        table = accuracy_table(make_records(planted, clean=(50, 50), per_cell_total=20))
        assert table.clean_accuracy == 100.0
        assert all(v == 100.0 for row in table.cells.values() for v in row)

    def test_three_of_four_is_75(self):
        records = [PredictionRecord("c", None, 0, "x", "x")]
        for i in range(4):
            for kind in BENCHMARK_KINDS:
                for sev in range(1, 6):
                    records.append(
                        PredictionRecord(f"v{i}", kind, sev, "x", "x" if i < 3 else "y")
                    )
        table = accuracy_table(records)
        assert all(v == 75.0 for row in table.cells.values() for v in row)

    def test_planted_accuracies_recovered_exactly(self):
        table = accuracy_table(make_records(S3D_KINETICS, per_cell_total=50))
        for kind, acc in S3D_KINETICS.items():
            expected = 100.0 * round(acc / 100 * 50) / 50
            assert table.cells[kind] == (expected,) * 5

    def test_order_independent(self):
        records = make_records(S3D_KINETICS, per_cell_total=10)
        shuffled = records.copy()
        random.Random(0).shuffle(shuffled)
        assert accuracy_table(records) == accuracy_table(shuffled)

    def test_missing_cells_listed(self):
        records = make_records(S3D_KINETICS, per_cell_total=4)
        filtered = [r for r in records if not (r.kind is K.FOG and r.severity == 3)]
        with pytest.raises(MissingCell) as info:
            accuracy_table(filtered)
        assert info.value.missing == (("fog", 3),)

    def test_missing_clean_listed(self):
        records = [r for r in make_records(S3D_KINETICS, per_cell_total=2) if r.kind]
        with pytest.raises(MissingCell) as info:
            accuracy_table(records)
        assert ("clean", 0) in info.value.missing

    def test_gaussian_noise_records_ignored(self):
        records = make_records(S3D_KINETICS, per_cell_total=4)
        with_noise = records + [
            PredictionRecord("g", K.GAUSSIAN_NOISE, 2, "a", "b") for _ in range(10)
        ]
        assert accuracy_table(records) == accuracy_table(with_noise)

    def test_top_k(self):
        records = make_records({k: 100.0 for k in BENCHMARK_KINDS}, clean=(1, 1), per_cell_total=1)
        ranked = [
            PredictionRecord(r.video_id, r.kind, r.severity, "z", ("a", "z"))
            for r in records
        ]
        assert accuracy_table(ranked, top_k=2).clean_accuracy == 100.0
        assert accuracy_table(ranked, top_k=1).clean_accuracy == 0.0


class TestHeadlineMetrics:
    def test_pc_of_constant_row_is_that_value(self):
        table = AccuracyTable.from_pc_values(50.0, {K.FOG: 62.5})
        assert pc(table, K.FOG) == 62.5

    def test_pc_is_arithmetic_mean(self):
        table = AccuracyTable(50.0, {K.FOG: (50.0, 60.0, 70.0, 80.0, 90.0)})
        assert pc(table, K.FOG) == 70.0

    def test_published_s3d_row_reproduced(self):
        table = AccuracyTable.from_pc_values(S3D_CLEAN, S3D_KINETICS)
        assert abs(mpc(table) - 56.9) <= 0.05 + 1e-9
        assert abs(rpc(table) - 82.0) <= 0.1 + 1e-9

    def test_published_i3d_ssv2_rpc(self):
        # headline mPC 47.8 with clean accuracy 58.5
        table = AccuracyTable.from_pc_values(58.5, {k: 47.8 for k in BENCHMARK_KINDS})
        assert abs(mpc(table) - 47.8) <= 1e-9
        assert abs(rpc(table) - 81.7) <= 0.1 + 1e-9

    def test_rpc_100_when_cells_equal_clean(self):
        table = AccuracyTable.from_pc_values(63.0, {k: 63.0 for k in BENCHMARK_KINDS})
        assert abs(rpc(table) - 100.0) < 1e-9

    def test_zero_clean_baseline_raises(self):
        table = AccuracyTable.from_pc_values(0.0, {k: 10.0 for k in BENCHMARK_KINDS})
        with pytest.raises(ZeroDivisionError):
            rpc(table)


class TestSplits:
    def test_timesformer_spatial_temporal_split(self):
        table = AccuracyTable.from_pc_values(TIMESFORMER_CLEAN, TIMESFORMER_KINETICS)
        report = split_report(table)
        assert abs(report.spatial_mpc - 68.2) <= 0.05 + 1e-9
        assert abs(report.temporal_mpc - 74.7) <= 0.05 + 1e-9

    def test_slowfast_ssv2_split(self):
        table = AccuracyTable.from_pc_values(SLOWFAST_CLEAN, SLOWFAST_SSV2)
        report = split_report(table)
        assert abs(report.spatial_mpc - 33.9) <= 0.1 + 1e-9
        assert abs(report.temporal_mpc - 38.5) <= 0.1 + 1e-9

    def test_identical_values_make_equal_splits(self):
        table = AccuracyTable.from_pc_values(70.0, {k: 55.5 for k in BENCHMARK_KINDS})
        report = split_report(table)
        assert report.spatial_mpc == report.temporal_mpc == 55.5

    def test_splits_partition_the_grid(self):
        assert set(SPATIAL_KINDS) | set(TEMPORAL_KINDS) == set(BENCHMARK_KINDS)
        assert not set(SPATIAL_KINDS) & set(TEMPORAL_KINDS)


accuracy_row = st.lists(
    st.floats(0.0, 100.0, allow_nan=False), min_size=5, max_size=5
).map(tuple)


@given(rows=st.lists(accuracy_row, min_size=12, max_size=12), clean=st.floats(1.0, 100.0))
@settings(max_examples=100)
def test_mpc_equals_mean_of_all_cells(rows, clean):
    table = AccuracyTable(clean, dict(zip(BENCHMARK_KINDS, rows)))
    flat = [v for row in rows for v in row]
    assert abs(mpc(table) - sum(flat) / len(flat)) < 1e-9


@given(rows=st.lists(accuracy_row, min_size=12, max_size=12), clean=st.floats(1.0, 100.0))
@settings(max_examples=100)
def test_splits_average_back_to_overall(rows, clean):
    table = AccuracyTable(clean, dict(zip(BENCHMARK_KINDS, rows)))
    report = split_report(table)
    assert abs((report.spatial_mpc + report.temporal_mpc) / 2 - report.mpc) < 1e-9


@given(
    rows=st.lists(accuracy_row, min_size=12, max_size=12),
    clean=st.floats(10.0, 100.0),
    factor=st.floats(0.05, 1.0),
)
@settings(max_examples=100)
def test_rpc_scale_invariant(rows, clean, factor):
    table = AccuracyTable(clean, dict(zip(BENCHMARK_KINDS, rows)))
    scaled = AccuracyTable(
        clean * factor,
        {k: tuple(v * factor for v in row) for k, row in table.cells.items()},
    )
    assert abs(rpc(table) - rpc(scaled)) < 1e-6


class TestRender:
    def test_empty_list_renders_header_only(self):
        text = render([], fmt="markdown")
        assert len(text.strip().splitlines()) == 2
        assert render([], fmt="csv").strip().count("\n") == 0

    def test_s3d_row_matches_published_numbers(self):
        report = split_report(AccuracyTable.from_pc_values(S3D_CLEAN, S3D_KINETICS))
        text = render([("S3D", report)], fmt="markdown")
        row = text.strip().splitlines()[-1]
        assert row == (
            "| S3D | 69.4 | 56.9 | 82.0 | 50.8 | 51.5 | 47.6 | 46.4 | 62.0 | 56.8 "
            "| 54.9 | 68.3 | 62.8 | 59.1 | 59.9 | 62.9 |"
        )

    def test_rows_ordered_by_descending_mpc(self):
        weak = split_report(AccuracyTable.from_pc_values(S3D_CLEAN, S3D_KINETICS))
        strong = split_report(
            AccuracyTable.from_pc_values(TIMESFORMER_CLEAN, TIMESFORMER_KINETICS)
        )
        text = render([("weak", weak), ("strong", strong)], fmt="csv")
        lines = text.strip().splitlines()
        assert lines[1].startswith("strong,")
        assert lines[2].startswith("weak,")

    @pytest.mark.parametrize("fmt", ["markdown", "csv"])
    def test_render_parse_recompute_round_trip(self, fmt):
        report = split_report(AccuracyTable.from_pc_values(S3D_CLEAN, S3D_KINETICS))
        [parsed] = parse_rendered(render([("S3D", report)], fmt=fmt), fmt=fmt)
        recomputed_mpc = sum(parsed["pc"].values()) / len(parsed["pc"])
        assert abs(recomputed_mpc - parsed["mpc"]) <= 0.05 + 1e-9
        recomputed_rpc = 100 * recomputed_mpc / parsed["clean"]
        assert abs(recomputed_rpc - parsed["rpc"]) <= 0.15 + 1e-9


class TestRecordIO:
    def test_json_round_trip(self):
        rec = PredictionRecord("vid_7", K.BIT_ERROR, 4, "surfing", "surfing")
        assert record_from_json(record_to_json(rec)) == rec

    def test_clean_round_trip(self):
        rec = PredictionRecord("vid_8", None, 0, "a", ("a", "b", "c"))
        assert record_from_json(record_to_json(rec)) == rec

    def test_clean_consistency_enforced(self):
        with pytest.raises(ValueError):
            PredictionRecord("v", None, 3, "a", "a")
        with pytest.raises(ValueError):
            PredictionRecord("v", K.FOG, 0, "a", "a")

    def test_unknown_kind_rejected_with_hint(self):
        with pytest.raises(ValueError, match="valid kinds"):
            record_from_json(
                '{"video_id": "v", "kind": "sparkle", "severity": 1,'
                ' "true_label": "a", "predicted_label": "a"}'
            )
