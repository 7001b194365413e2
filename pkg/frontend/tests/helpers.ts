/** Shared test plumbing: fixture loading and a hand-cranked clock for the
 * scheduler. Fixtures were captured from the real service (see
 * fixtures/generate.py), so assertions against them exercise the same
 * payload shapes the browser sees. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { TimerHooks } from "../src/scheduler.js";
import type { PeakSummary, RegionGeometry } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8")) as T;
}

export interface CoherenceTriple {
  delta: number;
  u1: number;
  u2: number;
  r0: number;
  region: RegionGeometry;
}

export interface OverlayRun {
  delta: number;
  times: number[];
  non_healthy: number[];
  peak: PeakSummary;
  initial_preset: string | null;
}

/** Deterministic replacement for setTimeout/Date.now. tick() advances
 * virtual time, firing due callbacks in order and draining microtasks after
 * each so promise chains settle before the next timer fires. */
export class FakeClock implements TimerHooks {
  private t = 0;
  private nextId = 1;
  private queue: { at: number; id: number; fn: () => void }[] = [];

  now(): number {
    return this.t;
  }

  schedule(fn: () => void, ms: number): unknown {
    const id = this.nextId;
    this.nextId += 1;
    this.queue.push({ at: this.t + Math.max(0, ms), id, fn });
    return id;
  }

  cancel(handle: unknown): void {
    this.queue = this.queue.filter((entry) => entry.id !== handle);
  }

  async tick(ms: number): Promise<void> {
    const target = this.t + ms;
    for (;;) {
      this.queue.sort((a, b) => a.at - b.at || a.id - b.id);
      const next = this.queue[0];
      if (next === undefined || next.at > target) break;
      this.queue.shift();
      this.t = next.at;
      next.fn();
      await drainMicrotasks();
    }
    this.t = target;
    await drainMicrotasks();
  }
}

/** Let pending promise callbacks run; one macrotask turn flushes the
 * microtask queue completely. */
export function drainMicrotasks(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export interface Deferred<T> {
  promise: Promise<T>;
  resolve(value: T): void;
  reject(error: unknown): void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}
