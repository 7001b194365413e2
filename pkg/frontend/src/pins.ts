/** Comparison pins: frozen snapshots of a scenario and the service
 * responses it produced. A pin never recomputes anything; unpinning and
 * re-pinning the same fragment yields an equal snapshot only because the
 * service is stateless. */

import type { PeakSummary, RegionGeometry } from "./types.js";
import type { TrajectorySeries } from "./panels.js";

/** The slice of a simulate response a pin keeps. */
export interface PinSource {
  times: number[];
  non_healthy: number[];
  peak: PeakSummary;
  initial_preset: string | null;
}

export interface ComparisonPin {
  readonly label: string;
  readonly fragment: Readonly<Record<string, number>>;
  readonly r0: number;
  readonly region: RegionGeometry;
  readonly times: readonly number[];
  readonly nonHealthy: readonly number[];
  readonly peak: Readonly<PeakSummary>;
  readonly initialPreset: string | null;
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.getOwnPropertyNames(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export function makePin(
  label: string,
  fragment: Record<string, number>,
  r0: number,
  region: RegionGeometry,
  sim: PinSource,
): ComparisonPin {
  return deepFreeze({
    label,
    fragment: { ...fragment },
    r0,
    region,
    times: [...sim.times],
    nonHealthy: [...sim.non_healthy],
    peak: { ...sim.peak },
    initialPreset: sim.initial_preset,
  });
}

export function pinSeries(pin: ComparisonPin): TrajectorySeries {
  return {
    label: pin.label,
    times: pin.times,
    values: pin.nonHealthy,
    peak: pin.peak,
  };
}
