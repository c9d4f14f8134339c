/**
 * Corruption taxonomy and the calibrated severity parameter table as data.
 *
 * Mirrors the toolkit's table exactly; ratios are [numerator, denominator]
 * pairs to avoid decimal drift. `vidcorrupt table` prints the same
 * structure, which the test suite uses as the parity oracle.
 */

export const SPATIAL_KINDS = [
  "shot_noise",
  "rain",
  "fog",
  "contrast",
  "brightness",
  "saturate",
] as const;

export const TEMPORAL_KINDS = [
  "motion_blur",
  "frame_rate",
  "abr",
  "crf",
  "bit_error",
  "packet_loss",
] as const;

export const BENCHMARK_KINDS = [...SPATIAL_KINDS, ...TEMPORAL_KINDS] as const;

export const CODEC_KINDS = ["abr", "crf", "bit_error", "packet_loss"] as const;

export const ALL_KINDS = [...BENCHMARK_KINDS, "gaussian_noise"] as const;

export type CorruptionKind = (typeof ALL_KINDS)[number];
export type BenchmarkKind = (typeof BENCHMARK_KINDS)[number];
export type Profile = "kinetics" | "ssv2";

export function isTemporal(kind: CorruptionKind): boolean {
  return (TEMPORAL_KINDS as readonly string[]).includes(kind);
}

export function isCodecKind(kind: CorruptionKind): boolean {
  return (CODEC_KINDS as readonly string[]).includes(kind);
}

type Row = readonly (number | readonly number[])[];

const PROFILE_FREE: Record<string, Row> = {
  shot_noise: [60, 25, 12, 5, 3],
  rain: [
    [65, 10],
    [65, 30],
    [65, 60],
    [100, 60],
    [125, 80],
  ],
  fog: [
    [1.5, 2.0],
    [2.0, 2.0],
    [2.5, 1.7],
    [2.5, 1.5],
    [3.0, 1.4],
  ],
  contrast: [0.5, 0.4, 0.3, 0.2, 0.1],
  brightness: [0.1, 0.2, 0.3, 0.4, 0.5],
  saturate: [
    [0.3, 0.0],
    [0.1, 0.0],
    [2.0, 0.0],
    [5.0, 0.1],
    [20.0, 0.2],
  ],
  abr: [2, 4, 8, 16, 32],
  crf: [27, 33, 39, 45, 51],
  bit_error: [
    [1, 100000],
    [1, 50000],
    [1, 30000],
    [1, 20000],
    [1, 10000],
  ],
  packet_loss: [1, 2, 3, 4, 6],
};

const PROFILE_BOUND: Record<Profile, Record<string, Row>> = {
  kinetics: {
    motion_blur: [3, 5, 7, 9, 11],
    frame_rate: [20, 16, 12, 9, 6],
  },
  ssv2: {
    motion_blur: [1, 2, 3, 4, 6],
    frame_rate: [10, 8, 6, 4, 2],
  },
};

export const GAUSSIAN_NOISE_STD = [0.05, 0.1, 0.15, 0.2, 0.25] as const;

export interface SeverityTable {
  kinetics: Record<string, Row>;
  ssv2: Record<string, Row>;
  gaussian_noise_std: readonly number[];
}

function profileRows(profile: Profile): Record<string, Row> {
  return { ...PROFILE_FREE, ...PROFILE_BOUND[profile] };
}

/** The full table in the same shape `vidcorrupt table` prints. */
export const SEVERITY_TABLE: SeverityTable = {
  kinetics: profileRows("kinetics"),
  ssv2: profileRows("ssv2"),
  gaussian_noise_std: GAUSSIAN_NOISE_STD,
};

/** Parameter (scalar or tuple) for one grid cell; severity must be 1..5. */
export function lookupParams(
  kind: BenchmarkKind,
  profile: Profile,
  severity: number,
): number | readonly number[] {
  if (!Number.isInteger(severity) || severity < 1 || severity > 5) {
    throw new RangeError(`severity must be an integer in 1..5, got ${severity}`);
  }
  const row = profileRows(profile)[kind];
  if (!row) {
    throw new RangeError(`unknown benchmark corruption kind ${kind}`);
  }
  return row[severity - 1];
}
