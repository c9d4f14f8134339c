/**
 * Concatenated binary PPM (P6) frame streams: the byte-exact frame exchange
 * format shared with the toolkit's CLI and codec tool.
 */

export interface FrameStream {
  frames: number;
  height: number;
  width: number;
  /** frames * height * width * 3 bytes, RGB interleaved */
  data: Uint8Array;
}

export function encodePpmStream(stream: FrameStream): Buffer {
  const { frames, height, width, data } = stream;
  const frameBytes = height * width * 3;
  if (data.length !== frames * frameBytes) {
    throw new RangeError(
      `pixel buffer holds ${data.length} bytes, expected ${frames * frameBytes}`,
    );
  }
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, "ascii");
  const parts: Buffer[] = [];
  for (let i = 0; i < frames; i++) {
    parts.push(header, Buffer.from(data.buffer, data.byteOffset + i * frameBytes, frameBytes));
  }
  return Buffer.concat(parts);
}

function readToken(buf: Buffer, pos: number): { token: string; pos: number } {
  let i = pos;
  for (;;) {
    while (i < buf.length && isSpace(buf[i])) i++;
    if (i < buf.length && buf[i] === 0x23 /* # */) {
      while (i < buf.length && buf[i] !== 0x0a) i++;
      continue;
    }
    break;
  }
  const start = i;
  while (i < buf.length && !isSpace(buf[i])) i++;
  return { token: buf.toString("ascii", start, i), pos: i };
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d || byte === 0x0b || byte === 0x0c;
}

export function decodePpmStream(buf: Buffer): FrameStream {
  const frames: Buffer[] = [];
  let width = 0;
  let height = 0;
  let pos = 0;
  for (;;) {
    const magic = readToken(buf, pos);
    if (magic.token === "") break;
    if (magic.token !== "P6") {
      throw new Error(`expected P6 magic, got ${JSON.stringify(magic.token)}`);
    }
    const w = readToken(buf, magic.pos);
    const h = readToken(buf, w.pos);
    const maxval = readToken(buf, h.pos);
    if (maxval.token !== "255") {
      throw new Error(`unsupported PPM maxval ${maxval.token}`);
    }
    const fw = Number(w.token);
    const fh = Number(h.token);
    if (!Number.isInteger(fw) || !Number.isInteger(fh) || fw <= 0 || fh <= 0) {
      throw new Error("bad PPM dimensions");
    }
    if (frames.length === 0) {
      width = fw;
      height = fh;
    } else if (fw !== width || fh !== height) {
      throw new Error("frame dimensions changed mid-stream");
    }
    const start = maxval.pos + 1; // exactly one whitespace byte after maxval
    const size = fw * fh * 3;
    if (start + size > buf.length) {
      throw new Error("truncated PPM pixel data");
    }
    frames.push(buf.subarray(start, start + size));
    pos = start + size;
  }
  if (frames.length === 0) {
    throw new Error("frame stream contains no frames");
  }
  return {
    frames: frames.length,
    height,
    width,
    data: new Uint8Array(Buffer.concat(frames)),
  };
}
