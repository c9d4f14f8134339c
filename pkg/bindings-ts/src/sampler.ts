/**
 * Frame-sampling plans: uniform/dense strategies at clip and video level,
 * mirroring the toolkit's index rules (stride = floor(n / numFrames) for
 * uniform sampling, clamp-to-last for short clips, first-N starts for
 * video-level uniform, M evenly spaced windows for video-level dense).
 *
 * Random starts use a local splitmix64 generator: deterministic under the
 * plan seed, but not stream-compatible with the host toolkit's RNG.
 */

export type Strategy = "uniform" | "dense";
export type Level = "clip" | "video";

export interface SamplingPlan {
  strategy: Strategy;
  level: Level;
  numFrames: number;
  clipsPerVideo?: number;
  seed?: number;
}

const MASK64 = (1n << 64n) - 1n;

class SplitMix64 {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = BigInt(seed) & MASK64;
  }

  next(): bigint {
    this.state = (this.state + 0x9e3779b97f4a7c15n) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    return (z ^ (z >> 31n)) & MASK64;
  }

  /** uniform integer in [0, bound) */
  below(bound: number): number {
    return Number(this.next() % BigInt(bound));
  }
}

function uniformIndices(n: number, numFrames: number, start: number): number[] {
  const stride = Math.max(Math.floor(n / numFrames), 1);
  return Array.from({ length: numFrames }, (_, k) => Math.min(start + k * stride, n - 1));
}

/** Frame-index lists, one per sampled clip, for a clip of nFrames frames. */
export function sampleIndices(nFrames: number, plan: SamplingPlan): number[][] {
  if (!Number.isInteger(nFrames) || nFrames < 1) {
    throw new RangeError(`clip must contain at least one frame, got ${nFrames}`);
  }
  const f = plan.numFrames;
  if (!Number.isInteger(f) || f < 1) {
    throw new RangeError(`numFrames must be >= 1, got ${f}`);
  }
  const clips = plan.clipsPerVideo ?? 1;
  if (!Number.isInteger(clips) || clips < 1) {
    throw new RangeError(`clipsPerVideo must be >= 1, got ${clips}`);
  }
  const rng = new SplitMix64(plan.seed ?? 0);

  if (plan.level === "clip") {
    if (plan.strategy === "uniform") {
      const stride = Math.floor(nFrames / f);
      const start = stride >= 1 ? rng.below(stride) : 0;
      return [uniformIndices(nFrames, f, start)];
    }
    const start = rng.below(nFrames);
    return [Array.from({ length: f }, (_, k) => Math.min(start + k, nFrames - 1))];
  }

  if (plan.strategy === "uniform") {
    return Array.from({ length: clips }, (_, j) =>
      uniformIndices(nFrames, f, Math.min(j, nFrames - 1)),
    );
  }
  const span = Math.max(nFrames - f, 0);
  return Array.from({ length: clips }, (_, j) => {
    const start = clips > 1 ? Math.round((j * span) / (clips - 1)) : 0;
    return Array.from({ length: f }, (_, k) => Math.min(start + k, nFrames - 1));
  });
}
