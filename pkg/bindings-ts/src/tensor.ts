/**
 * TensorClipView: a typed view over a host-provided
 * (frames x height x width x 3) pixel array, with the caller declaring the
 * value range ("byte" for [0, 255] integers, "unit" for [0, 1] floats).
 *
 * Conversions follow the toolkit's pixel conventions: unit floats quantize
 * to bytes with round-half-to-even, so a byte -> unit -> byte round trip is
 * exact and a unit -> byte -> unit round trip stays within 1/255.
 */

export type ValueRange = "byte" | "unit";

/** Round half to even, matching the toolkit's 8-bit boundary rule. */
export function rintByte(value: number): number {
  const clamped = Math.min(Math.max(value, 0), 255);
  const floor = Math.floor(clamped);
  const frac = clamped - floor;
  if (frac > 0.5) return floor + 1;
  if (frac < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

export class TensorClipView {
  readonly frames: number;
  readonly height: number;
  readonly width: number;
  readonly range: ValueRange;
  readonly data: Uint8Array | Float64Array;

  constructor(
    data: Uint8Array | Float64Array | number[],
    frames: number,
    height: number,
    width: number,
    range: ValueRange,
  ) {
    const expected = frames * height * width * 3;
    const backing =
      data instanceof Uint8Array || data instanceof Float64Array
        ? data
        : range === "byte"
          ? Uint8Array.from(data)
          : Float64Array.from(data);
    if (backing.length !== expected) {
      throw new RangeError(
        `pixel buffer holds ${backing.length} values, expected ${expected} ` +
          `for ${frames}x${height}x${width}x3`,
      );
    }
    if (frames < 1 || height < 1 || width < 1) {
      throw new RangeError("frames, height and width must all be >= 1");
    }
    this.data = backing;
    this.frames = frames;
    this.height = height;
    this.width = width;
    this.range = range;
  }

  static fromBytes(data: Uint8Array, frames: number, height: number, width: number): TensorClipView {
    return new TensorClipView(data, frames, height, width, "byte");
  }

  static fromUnitFloats(
    data: Float64Array,
    frames: number,
    height: number,
    width: number,
  ): TensorClipView {
    return new TensorClipView(data, frames, height, width, "unit");
  }

  /** Pixels as [0, 255] bytes (zero-copy when already bytes). */
  toBytes(): Uint8Array {
    if (this.range === "byte") {
      return this.data as Uint8Array;
    }
    const src = this.data as Float64Array;
    const out = new Uint8Array(src.length);
    for (let i = 0; i < src.length; i++) {
      out[i] = rintByte(src[i] * 255);
    }
    return out;
  }

  /** Pixels as [0, 1] floats (zero-copy when already unit floats). */
  toUnitFloats(): Float64Array {
    if (this.range === "unit") {
      return this.data as Float64Array;
    }
    const src = this.data as Uint8Array;
    const out = new Float64Array(src.length);
    for (let i = 0; i < src.length; i++) {
      out[i] = src[i] / 255;
    }
    return out;
  }

  withBytes(data: Uint8Array): TensorClipView {
    return TensorClipView.fromBytes(data, this.frames, this.height, this.width);
  }
}
