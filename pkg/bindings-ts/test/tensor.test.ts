import { describe, expect, it } from "vitest";

import { TensorClipView, rintByte } from "../src/tensor.js";

describe("rintByte", () => {
  it("rounds half to even", () => {
    expect(rintByte(0.5)).toBe(0);
    expect(rintByte(1.5)).toBe(2);
    expect(rintByte(2.5)).toBe(2);
    expect(rintByte(3.5)).toBe(4);
    expect(rintByte(254.5)).toBe(254);
  });

  it("clamps out-of-range values", () => {
    expect(rintByte(-3)).toBe(0);
    expect(rintByte(300)).toBe(255);
  });
});

describe("TensorClipView", () => {
  it("byte -> unit -> byte round trip is exact", () => {
    const bytes = new Uint8Array(2 * 2 * 2 * 3).map((_, i) => (i * 37) % 256);
    const view = TensorClipView.fromBytes(bytes, 2, 2, 2);
    const unit = TensorClipView.fromUnitFloats(view.toUnitFloats(), 2, 2, 2);
    expect(Array.from(unit.toBytes())).toEqual(Array.from(bytes));
  });

  it("unit -> byte round trip stays within 1/255", () => {
    const values = new Float64Array(1 * 1 * 4 * 3).map(() => Math.random());
    const view = TensorClipView.fromUnitFloats(values, 1, 1, 4);
    const back = view.toBytes();
    for (let i = 0; i < values.length; i++) {
      expect(Math.abs(back[i] / 255 - values[i])).toBeLessThanOrEqual(1 / 255 / 2 + 1e-12);
    }
  });

  it("rejects mismatched buffer sizes", () => {
    expect(() => TensorClipView.fromBytes(new Uint8Array(10), 1, 2, 2)).toThrow(RangeError);
  });
});
