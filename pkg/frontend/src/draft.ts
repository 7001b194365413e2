/** Scenario draft state.
 *
 * A draft is the user's current knob settings: the quarantine-effectiveness
 * slider plus the five control sliders. Drafts are immutable; every edit
 * returns a fresh object, which keeps the update scheduler's "latest draft
 * wins" bookkeeping trivial.
 *
 * u2 has two entry modes. In continuous mode the slider value is sent as-is.
 * In restriction-level mode the draft carries the level and the request sends
 * ppkm_level instead of u2, so the mapping stays on the service side.
 */

import type { ControlName } from "./types.js";

export type PpkmLevel = 1 | 2 | 3 | 4;

export type SliderName = "delta" | ControlName;

export interface ScenarioDraft {
  readonly delta: number;
  readonly controls: Readonly<Record<ControlName, number>>;
  /** Non-null means u2 is driven by a restriction level; controls.u2 then
   * only remembers the last continuous position for when the mode toggles
   * back. */
  readonly ppkmLevel: PpkmLevel | null;
  /** Which slider the user is currently dragging, for highlight only. */
  readonly activeSlider: SliderName | null;
}

const clamp01 = (x: number): number => {
  if (Number.isNaN(x)) return 0;
  return Math.min(1, Math.max(0, x));
};

export const CONTROL_NAMES: readonly ControlName[] = ["u1", "u2", "u3", "u4", "u5"];

/** Build a draft, clamping everything into [0, 1] so out-of-range slider
 * positions cannot exist by construction. */
export function makeDraft(init: {
  delta: number;
  controls: Record<ControlName, number>;
  ppkmLevel?: PpkmLevel | null;
  activeSlider?: SliderName | null;
}): ScenarioDraft {
  const controls = {} as Record<ControlName, number>;
  for (const name of CONTROL_NAMES) controls[name] = clamp01(init.controls[name]);
  return Object.freeze({
    delta: clamp01(init.delta),
    controls: Object.freeze(controls),
    ppkmLevel: init.ppkmLevel ?? null,
    activeSlider: init.activeSlider ?? null,
  });
}

export function withDelta(draft: ScenarioDraft, value: number): ScenarioDraft {
  return makeDraft({
    delta: value,
    controls: { ...draft.controls },
    ppkmLevel: draft.ppkmLevel,
    activeSlider: "delta",
  });
}

/** Set one control slider. Touching u2 directly switches back to continuous
 * mode. */
export function withControl(draft: ScenarioDraft, name: ControlName, value: number): ScenarioDraft {
  const controls = { ...draft.controls, [name]: value };
  const ppkmLevel = name === "u2" ? null : draft.ppkmLevel;
  return makeDraft({ delta: draft.delta, controls, ppkmLevel, activeSlider: name });
}

export function withPpkmLevel(draft: ScenarioDraft, level: PpkmLevel | null): ScenarioDraft {
  return makeDraft({
    delta: draft.delta,
    controls: { ...draft.controls },
    ppkmLevel: level,
    activeSlider: "u2",
  });
}

/** Parameter fragment for request bodies. Sends ppkm_level in place of u2
 * when a restriction level is active; the two are mutually exclusive on the
 * wire. */
export function parameterFragment(draft: ScenarioDraft): Record<string, number> {
  const fragment: Record<string, number> = {
    delta: draft.delta,
    u1: draft.controls.u1,
    u3: draft.controls.u3,
    u4: draft.controls.u4,
    u5: draft.controls.u5,
  };
  if (draft.ppkmLevel === null) {
    fragment.u2 = draft.controls.u2;
  } else {
    fragment.ppkm_level = draft.ppkmLevel;
  }
  return fragment;
}

/** Stable identity string so the scheduler and pin list can tell whether two
 * drafts describe the same scenario. */
export function draftKey(draft: ScenarioDraft): string {
  return JSON.stringify(parameterFragment(draft));
}
