/**
 * Robustness metrics over prediction records, numerically identical to
 * `vidcorrupt eval` (same accumulation order, IEEE doubles throughout;
 * divergence is bounded only by what the host prints).
 */

import { BENCHMARK_KINDS, BenchmarkKind, SPATIAL_KINDS, TEMPORAL_KINDS } from "./severity.js";

export const CLEAN_KIND = "clean";

export interface PredictionRecord {
  videoId: string;
  /** benchmark kind name, or "clean" with severity 0 */
  kind: BenchmarkKind | typeof CLEAN_KIND | "gaussian_noise";
  severity: number;
  trueLabel: string;
  /** single label or ranked predictions */
  predictedLabel: string | string[];
}

export class MissingCellError extends Error {
  constructor(readonly missing: Array<[string, number]>) {
    super(
      "missing prediction cells: " +
        missing.map(([name, sev]) => `(${name}, ${sev})`).join(", "),
    );
    this.name = "MissingCellError";
  }
}

export interface RobustnessReport {
  cleanAccuracy: number;
  perCorruption: Record<BenchmarkKind, number>;
  mpc: number;
  rpc: number;
  spatial: { mpc: number; rpc: number };
  temporal: { mpc: number; rpc: number };
}

const N_SEVERITIES = 5;

function isCorrect(record: PredictionRecord, topK: number): boolean {
  const ranked = Array.isArray(record.predictedLabel)
    ? record.predictedLabel
    : [record.predictedLabel];
  return ranked.slice(0, topK).includes(record.trueLabel);
}

function mean(values: number[]): number {
  let total = 0;
  for (const v of values) total += v; // left-to-right, matching the host
  return total / values.length;
}

/** Per-cell accuracy grid; throws MissingCellError listing absent cells. */
export function accuracyTable(
  records: Iterable<PredictionRecord>,
  topK = 1,
): { cleanAccuracy: number; cells: Map<BenchmarkKind, number[]> } {
  const counts = new Map<string, { correct: number; total: number }>();
  for (const record of records) {
    if (record.kind === "gaussian_noise") continue; // augmentation, not benchmark
    const key = `${record.kind}:${record.severity}`;
    const cell = counts.get(key) ?? { correct: 0, total: 0 };
    cell.correct += isCorrect(record, topK) ? 1 : 0;
    cell.total += 1;
    counts.set(key, cell);
  }

  const missing: Array<[string, number]> = [];
  if (!counts.has(`${CLEAN_KIND}:0`)) missing.push([CLEAN_KIND, 0]);
  for (const kind of BENCHMARK_KINDS) {
    for (let sev = 1; sev <= N_SEVERITIES; sev++) {
      if (!counts.has(`${kind}:${sev}`)) missing.push([kind, sev]);
    }
  }
  if (missing.length > 0) {
    throw new MissingCellError(missing);
  }

  const accuracy = (key: string): number => {
    const { correct, total } = counts.get(key)!;
    return (100 * correct) / total;
  };
  const cells = new Map<BenchmarkKind, number[]>();
  for (const kind of BENCHMARK_KINDS) {
    cells.set(
      kind,
      Array.from({ length: N_SEVERITIES }, (_, i) => accuracy(`${kind}:${i + 1}`)),
    );
  }
  return { cleanAccuracy: accuracy(`${CLEAN_KIND}:0`), cells };
}

/** Full report: overall and spatial/temporal-split metrics. */
export function evaluateRecords(
  records: Iterable<PredictionRecord>,
  topK = 1,
): RobustnessReport {
  const { cleanAccuracy, cells } = accuracyTable(records, topK);
  if (cleanAccuracy === 0) {
    throw new RangeError("clean accuracy is zero; the clean baseline is unusable");
  }
  const pc = (kind: BenchmarkKind): number => mean(cells.get(kind)!);
  const mpcOver = (kinds: readonly BenchmarkKind[]): number => mean(kinds.map(pc));
  const rpcOver = (kinds: readonly BenchmarkKind[]): number =>
    (100 * mpcOver(kinds)) / cleanAccuracy;

  const perCorruption = Object.fromEntries(
    BENCHMARK_KINDS.map((k) => [k, pc(k)]),
  ) as Record<BenchmarkKind, number>;

  return {
    cleanAccuracy,
    perCorruption,
    mpc: mpcOver(BENCHMARK_KINDS),
    rpc: rpcOver(BENCHMARK_KINDS),
    spatial: { mpc: mpcOver(SPATIAL_KINDS), rpc: rpcOver(SPATIAL_KINDS) },
    temporal: { mpc: mpcOver(TEMPORAL_KINDS), rpc: rpcOver(TEMPORAL_KINDS) },
  };
}

/** Parse one line of the toolkit's prediction-log format. */
export function recordFromJson(line: string): PredictionRecord {
  const raw = JSON.parse(line) as {
    video_id: string;
    kind: string;
    severity: number;
    true_label: string;
    predicted_label: string | string[];
  };
  return {
    videoId: raw.video_id,
    kind: raw.kind as PredictionRecord["kind"],
    severity: raw.severity,
    trueLabel: raw.true_label,
    predictedLabel: raw.predicted_label,
  };
}

export function recordToJson(record: PredictionRecord): string {
  return JSON.stringify({
    kind: record.kind,
    predicted_label: record.predictedLabel,
    severity: record.severity,
    true_label: record.trueLabel,
    video_id: record.videoId,
  });
}
