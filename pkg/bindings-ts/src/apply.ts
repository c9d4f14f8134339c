/**
 * Corruption application for in-memory clips and files.
 *
 * Pixel-domain kinds round-trip through the CLI on raw frame streams, so
 * results are bit-identical to the primary toolkit given the same spec and
 * seed. Codec-domain kinds (abr/crf/bit_error/packet_loss) are file-only:
 * in-memory elementary-stream exchange buys a dataloader nothing, so
 * `applyCorruption` rejects them and `corruptFile` handles real video
 * files instead.
 */

import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli } from "./cli.js";
import { decodePpmStream, encodePpmStream } from "./ppm.js";
import { ALL_KINDS, CorruptionKind, Profile, isCodecKind } from "./severity.js";
import { TensorClipView } from "./tensor.js";

export class UnsupportedKindError extends Error {
  constructor(kind: string) {
    super(
      `${kind} operates on encoded streams and is not available in-memory; ` +
        `use corruptFile() on a video file instead`,
    );
    this.name = "UnsupportedKindError";
  }
}

export interface CorruptionRequest {
  kind: CorruptionKind;
  severity: number;
  profile?: Profile;
  seed?: number;
  /** frame rate assumed for raw in-memory clips (only frame_rate cares) */
  fps?: number;
}

function validate(request: CorruptionRequest): void {
  if (!(ALL_KINDS as readonly string[]).includes(request.kind)) {
    throw new RangeError(
      `unknown corruption kind ${JSON.stringify(request.kind)}; valid kinds: ${ALL_KINDS.join(", ")}`,
    );
  }
  if (!Number.isInteger(request.severity) || request.severity < 0 || request.severity > 5) {
    throw new RangeError(`severity must be an integer in 0..5, got ${request.severity}`);
  }
  if (isCodecKind(request.kind)) {
    throw new UnsupportedKindError(request.kind);
  }
}

async function inWorkDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "vidcorrupt-ts-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

/** Corrupt one in-memory clip; returns a byte-range view of the result. */
export async function applyCorruption(
  clip: TensorClipView,
  request: CorruptionRequest,
): Promise<TensorClipView> {
  const [result] = await applyCorruptionBatch([clip], request);
  return result;
}

/**
 * Corrupt many clips in one CLI invocation (one process for the whole
 * batch; this is what keeps dataloader-scale workloads fast). All clips
 * receive the same kind/severity/profile; the seed increments per clip
 * from `request.seed`.
 */
export async function applyCorruptionBatch(
  clips: TensorClipView[],
  request: CorruptionRequest,
): Promise<TensorClipView[]> {
  validate(request);
  if (clips.length === 0) {
    return [];
  }
  if (request.severity === 0) {
    return clips.map((c) => c.withBytes(c.toBytes()));
  }
  const seed = request.seed ?? 0;
  const profile = request.profile ?? "kinetics";

  return inWorkDir(async (dir) => {
    const jobs: string[] = [];
    await Promise.all(
      clips.map(async (clip, i) => {
        const input = join(dir, `in_${i}.ppms`);
        await writeFile(
          input,
          encodePpmStream({
            frames: clip.frames,
            height: clip.height,
            width: clip.width,
            data: clip.toBytes(),
          }),
        );
        jobs[i] = JSON.stringify({
          input,
          output: join(dir, `out_${i}.ppms`),
          kind: request.kind,
          severity: request.severity,
          profile,
          seed: seed + i,
          fps: request.fps ?? 24,
        });
      }),
    );
    const jobsPath = join(dir, "jobs.jsonl");
    await writeFile(jobsPath, jobs.join("\n") + "\n");
    await runCli(["corrupt", "batch", "--batch", jobsPath]);

    return Promise.all(
      clips.map(async (clip, i) => {
        const stream = decodePpmStream(await readFile(join(dir, `out_${i}.ppms`)));
        return TensorClipView.fromBytes(stream.data, stream.frames, stream.height, stream.width);
      }),
    );
  });
}

/**
 * Corrupt a video file (any kind, codec-domain included) through the same
 * CLI the primary toolkit uses. Returns the printed PSNR against the clean
 * input.
 */
export async function corruptFile(
  inputPath: string,
  outputPath: string,
  request: Omit<CorruptionRequest, "kind"> & { kind: CorruptionKind },
): Promise<{ psnr: number; sha256: string }> {
  if (!Number.isInteger(request.severity) || request.severity < 0 || request.severity > 5) {
    throw new RangeError(`severity must be an integer in 0..5, got ${request.severity}`);
  }
  const args = [
    "corrupt",
    inputPath,
    "--kind",
    request.kind,
    "--severity",
    String(request.severity),
    "--profile",
    request.profile ?? "kinetics",
    "--seed",
    String(request.seed ?? 0),
    "--output",
    outputPath,
  ];
  const { stdout } = await runCli(args);
  const psnrMatch = stdout.match(/^psnr=(\S+)$/m);
  const shaMatch = stdout.match(/^sha256=([0-9a-f]{64})$/m);
  return {
    psnr: psnrMatch ? Number(psnrMatch[1].replace("inf", "Infinity")) : NaN,
    sha256: shaMatch ? shaMatch[1] : "",
  };
}
