/** Comparison-pin behavior: the three-quarantine-level overlay shows the
 * published peak ordering, rendering is independent of pin order, and pins
 * are immutable snapshots. Trajectory fixtures were captured from the
 * service at u1=0.4, u2=0.278 with delta 0.653 / 0.9 / 0.93. */

import { describe, expect, it } from "vitest";

import { renderTrajectory } from "../src/panels.js";
import { makePin, pinSeries } from "../src/pins.js";
import type { ComparisonPin } from "../src/pins.js";
import type { RegionGeometry } from "../src/types.js";
import { loadFixture } from "./helpers.js";
import type { OverlayRun } from "./helpers.js";

const runs = loadFixture<OverlayRun[]>("overlay.json");

const dummyRegion = (delta: number): RegionGeometry => ({
  delta,
  l1: 0,
  l2: 0,
  l3: 0,
  slope: 0,
  slope_sign: 1,
  feasible_polygon: [],
});

function pinFor(run: OverlayRun): ComparisonPin {
  return makePin(
    `delta=${run.delta.toFixed(3)}`,
    { delta: run.delta, u1: 0.4, u2: 0.278, u3: 0.5, u4: 0.3, u5: 0 },
    1,
    dummyRegion(run.delta),
    run,
  );
}

describe("three-scenario trajectory overlay", () => {
  it("fixture holds the three quarantine levels", () => {
    expect(runs.map((r) => r.delta)).toEqual([0.653, 0.9, 0.93]);
    for (const run of runs) {
      expect(run.times.length).toBe(run.non_healthy.length);
      expect(run.times.length).toBeGreaterThan(300);
    }
  });

  it("peaks are strictly ordered by quarantine effectiveness", () => {
    const [low, mid, high] = runs;
    expect(low.peak.peak).toBeGreaterThan(mid.peak.peak);
    expect(mid.peak.peak).toBeGreaterThan(high.peak.peak);
    // each step of quarantine effectiveness buys more than an order of
    // magnitude at the wave peak
    expect(low.peak.peak / mid.peak.peak).toBeGreaterThan(10);
    expect(mid.peak.peak / high.peak.peak).toBeGreaterThan(10);
  });

  it("rendered overlay carries all three peaks in legend order", () => {
    const svg = renderTrajectory(runs.map((run) => pinSeries(pinFor(run))));
    const legendPeaks = [...svg.matchAll(/data-role="legend"[^>]*data-peak="([^"]+)"/g)].map(
      (match) => Number(match[1]),
    );
    expect(legendPeaks).toHaveLength(3);
    // labels sort as delta=0.653 < delta=0.900 < delta=0.930
    expect(legendPeaks[0]).toBeGreaterThan(legendPeaks[1]);
    expect(legendPeaks[1]).toBeGreaterThan(legendPeaks[2]);
  });

  it("pin order does not change the rendered document", () => {
    const [a, b, c] = runs.map((run) => pinSeries(pinFor(run)));
    const forward = renderTrajectory([a, b, c]);
    const reversed = renderTrajectory([c, b, a]);
    const shuffled = renderTrajectory([b, c, a]);
    expect(reversed).toBe(forward);
    expect(shuffled).toBe(forward);
  });

  it("the live scenario keeps its highlight regardless of pin order", () => {
    const [a, b] = runs.map((run) => pinSeries(pinFor(run)));
    const current = { ...pinSeries(pinFor(runs[2])), label: "current", current: true };
    const one = renderTrajectory([current, a, b]);
    const two = renderTrajectory([a, b, current]);
    expect(one).toBe(two);
    expect(one).toContain("series-current");
  });

  it("pins are frozen through and through", () => {
    const pin = pinFor(runs[0]);
    expect(Object.isFrozen(pin)).toBe(true);
    expect(Object.isFrozen(pin.fragment)).toBe(true);
    expect(Object.isFrozen(pin.times)).toBe(true);
    expect(Object.isFrozen(pin.peak)).toBe(true);
    expect(() => {
      (pin as { r0: number }).r0 = 99;
    }).toThrow(TypeError);
    expect(() => {
      (pin.nonHealthy as number[])[0] = -1;
    }).toThrow(TypeError);
  });

  it("pinning copies the source arrays instead of aliasing them", () => {
    const source: OverlayRun = {
      delta: 0.5,
      times: [0, 1, 2],
      non_healthy: [5, 6, 7],
      peak: { peak: 7, peak_time: 2, terminal: 7 },
      initial_preset: "default",
    };
    const pin = makePin("x", { delta: 0.5 }, 1, dummyRegion(0.5), source);
    source.non_healthy[0] = 1e9; // later mutation of the response object
    expect(pin.nonHealthy[0]).toBe(5);
  });
});
