import { describe, expect, it } from "vitest";

import { computeLayout } from "../src/layout.js";
import { decideGesture } from "../src/keyboard.js";

const KEYS = [..."abcdef", " "];

describe("computeLayout", () => {
  it("keeps predicted keys full-size and shrinks the rest", () => {
    const views = computeLayout(KEYS, [{ ch: "a", p: 0.7 }, { ch: "c", p: 0.3 }], false, 0.55);
    for (const view of views) {
      if (view.ch === "a" || view.ch === "c") {
        expect(view.predicted).toBe(true);
        expect(view.scale).toBe(1);
      } else {
        expect(view.predicted).toBe(false);
        expect(view.scale).toBe(0.55);
      }
    }
  });

  it("renders everything full-size on an empty set", () => {
    for (const view of computeLayout(KEYS, [], false, 0.55)) {
      expect(view.scale).toBe(1);
      expect(view.predicted).toBe(false);
    }
  });

  it("treats idle as uninformative regardless of the set", () => {
    const views = computeLayout(KEYS, [{ ch: "a", p: 1 }], true, 0.4);
    expect(views.every((v) => v.scale === 1 && !v.predicted)).toBe(true);
  });

  it("non-predicted keys share one scale factor", () => {
    const views = computeLayout(KEYS, [{ ch: "b", p: 1 }], false, 0.3);
    const scales = new Set(views.filter((v) => !v.predicted).map((v) => v.scale));
    expect(scales).toEqual(new Set([0.3]));
  });

  it("is a pure function of its inputs", () => {
    const preds = [{ ch: "a", p: 0.5 }, { ch: "b", p: 0.5 }];
    const once = computeLayout(KEYS, preds, false, 0.55);
    const twice = computeLayout(KEYS, preds, false, 0.55);
    expect(twice).toEqual(once);
    expect(preds).toEqual([{ ch: "a", p: 0.5 }, { ch: "b", p: 0.5 }]);
  });

  it("ignores predictions for characters without keys", () => {
    const views = computeLayout(["a", "b"], [{ ch: "z", p: 1 }], false, 0.5);
    // the set is non-empty and informative, so unmatched keys still shrink
    expect(views.map((v) => v.scale)).toEqual([0.5, 0.5]);
  });

  it("rejects shrink factors outside (0, 1]", () => {
    expect(() => computeLayout(KEYS, [], false, 0)).toThrow(RangeError);
    expect(() => computeLayout(KEYS, [], false, 1.2)).toThrow(RangeError);
  });
});

describe("decideGesture", () => {
  it("classifies a straight-down drag as hide", () => {
    expect(decideGesture(5, 80)).toBe("hide");
    expect(decideGesture(-10, 60)).toBe("hide");
  });

  it("classifies a diagonal drag as feedback", () => {
    expect(decideGesture(70, 70)).toBe("feedback");
    expect(decideGesture(-55, 45)).toBe("feedback");
  });

  it("ignores small or upward movements", () => {
    expect(decideGesture(3, 4)).toBeNull();
    expect(decideGesture(80, -60)).toBeNull();
    expect(decideGesture(80, 10)).toBeNull();
  });
});
