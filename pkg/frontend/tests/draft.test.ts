/** Draft invariants: slider positions clamped by construction, u2 mode
 * switching, and the request fragment staying a valid API body. */

import { describe, expect, it } from "vitest";

import {
  CONTROL_NAMES,
  draftKey,
  makeDraft,
  parameterFragment,
  withControl,
  withDelta,
  withPpkmLevel,
} from "../src/draft.js";

const base = () =>
  makeDraft({
    delta: 0.653,
    controls: { u1: 0.4, u2: 0.278, u3: 0.5, u4: 0.3, u5: 0.0 },
  });

describe("scenario draft", () => {
  it("clamps out-of-range and non-finite positions on construction", () => {
    const draft = makeDraft({
      delta: 1.7,
      controls: { u1: -0.3, u2: Number.NaN, u3: Number.POSITIVE_INFINITY, u4: 0.5, u5: 1.0001 },
    });
    expect(draft.delta).toBe(1);
    expect(draft.controls.u1).toBe(0);
    expect(draft.controls.u2).toBe(0);
    expect(draft.controls.u3).toBe(1);
    expect(draft.controls.u4).toBe(0.5);
    expect(draft.controls.u5).toBe(1);
  });

  it("clamps through every edit helper", () => {
    let draft = base();
    draft = withDelta(draft, 2.5);
    expect(draft.delta).toBe(1);
    draft = withControl(draft, "u3", -9);
    expect(draft.controls.u3).toBe(0);
  });

  it("is immutable; edits return new objects", () => {
    const draft = base();
    expect(Object.isFrozen(draft)).toBe(true);
    expect(Object.isFrozen(draft.controls)).toBe(true);
    const next = withControl(draft, "u1", 0.9);
    expect(draft.controls.u1).toBe(0.4);
    expect(next.controls.u1).toBe(0.9);
    expect(next).not.toBe(draft);
  });

  it("continuous mode sends u2 and no ppkm_level", () => {
    const fragment = parameterFragment(base());
    expect(Object.keys(fragment).sort()).toEqual(["delta", "u1", "u2", "u3", "u4", "u5"]);
    expect(fragment.u2).toBe(0.278);
  });

  it("level mode sends ppkm_level in place of u2", () => {
    const fragment = parameterFragment(withPpkmLevel(base(), 3));
    expect(Object.keys(fragment).sort()).toEqual(["delta", "ppkm_level", "u1", "u3", "u4", "u5"]);
    expect(fragment.ppkm_level).toBe(3);
    expect("u2" in fragment).toBe(false); // the two are mutually exclusive on the wire
  });

  it("touching the u2 slider drops back to continuous mode", () => {
    let draft = withPpkmLevel(base(), 4);
    expect(draft.ppkmLevel).toBe(4);
    draft = withControl(draft, "u2", 0.5);
    expect(draft.ppkmLevel).toBeNull();
    expect(parameterFragment(draft).u2).toBe(0.5);
  });

  it("other sliders leave the restriction level alone", () => {
    let draft = withPpkmLevel(base(), 2);
    draft = withControl(draft, "u1", 0.8);
    expect(draft.ppkmLevel).toBe(2);
  });

  it("fragment values are always finite and in range", () => {
    for (const wild of [-5, 0, 0.5, 1, 7, Number.NaN]) {
      let draft = withDelta(base(), wild);
      for (const name of CONTROL_NAMES) draft = withControl(draft, name, wild);
      for (const [key, value] of Object.entries(parameterFragment(draft))) {
        expect(Number.isFinite(value), key).toBe(true);
        expect(value).toBeGreaterThanOrEqual(0);
        expect(value).toBeLessThanOrEqual(1);
      }
    }
  });

  it("draft key ignores which slider is active", () => {
    const resting = base();
    const dragging = withControl(withControl(resting, "u1", 0.7), "u1", 0.4);
    expect(dragging.activeSlider).toBe("u1");
    expect(resting.activeSlider).toBeNull();
    expect(draftKey(dragging)).toBe(draftKey(resting));
  });
});
