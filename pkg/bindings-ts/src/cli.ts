/**
 * Locating and invoking the toolkit CLI.
 *
 * The bindings never reimplement pixel math: corruption application shells
 * through `vidcorrupt corrupt`, which is what guarantees digest parity with
 * the primary toolkit. The executable resolves from VIDCORRUPT_CLI, falling
 * back to `vidcorrupt` on PATH. Invocations run asynchronously so heavy
 * pixel work never blocks the event loop.
 */

import { execFile } from "node:child_process";

export class CliError extends Error {
  constructor(
    message: string,
    readonly exitCode: number | null,
    readonly stderr: string,
  ) {
    super(message);
    this.name = "CliError";
  }
}

export function cliCommand(): string {
  return process.env.VIDCORRUPT_CLI ?? "vidcorrupt";
}

export interface CliResult {
  stdout: string;
  stderr: string;
}

export function runCli(args: string[]): Promise<CliResult> {
  return new Promise((resolve, reject) => {
    execFile(
      cliCommand(),
      args,
      { maxBuffer: 256 * 1024 * 1024 },
      (error, stdout, stderr) => {
        if (error) {
          const code = typeof error.code === "number" ? error.code : null;
          reject(
            new CliError(
              `${cliCommand()} ${args.join(" ")} failed (exit ${code}): ${stderr.trim()}`,
              code,
              stderr,
            ),
          );
          return;
        }
        resolve({ stdout, stderr });
      },
    );
  });
}
