/** Debounced, ordered request scheduling for slider scrubbing.
 *
 * Contract: at most one flush per minIntervalMs (rate cap), only the newest
 * draft is ever sent (intermediate positions coalesce away), and a response
 * is applied only when it is the newest request in flight and no newer draft
 * is waiting. Responses arriving out of order therefore can never paint
 * stale numbers over fresh ones.
 *
 * Failures retry the same draft with doubled delay; a retry is a new
 * sequence number, so a late success from the original attempt is discarded
 * like any other superseded response. After maxRetries consecutive failures
 * the scheduler gives up and reports the error once.
 *
 * Timers and the clock are injectable so tests can drive a virtual clock.
 */

export interface TimerHooks {
  now(): number;
  schedule(fn: () => void, ms: number): unknown;
  cancel(handle: unknown): void;
}

const realTimers: TimerHooks = {
  now: () => Date.now(),
  schedule: (fn, ms) => setTimeout(fn, ms),
  cancel: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export interface SchedulerOptions<D, R> {
  send(draft: D): Promise<R>;
  apply(result: R, draft: D): void;
  /** Called once after retries are exhausted; the scheduler then idles
   * until the next submit. */
  onGiveUp?(error: unknown, draft: D): void;
  /** Minimum spacing between consecutive sends; 100 ms caps the stream at
   * ten requests per second. */
  minIntervalMs?: number;
  maxRetries?: number;
  backoffBaseMs?: number;
  timers?: TimerHooks;
}

export class UpdateScheduler<D, R> {
  private readonly send: (draft: D) => Promise<R>;
  private readonly apply: (result: R, draft: D) => void;
  private readonly onGiveUp: ((error: unknown, draft: D) => void) | undefined;
  private readonly minIntervalMs: number;
  private readonly maxRetries: number;
  private readonly backoffBaseMs: number;
  private readonly timers: TimerHooks;

  private seq = 0;
  private pending: { draft: D } | null = null;
  private timer: unknown = null;
  private lastSendAt = Number.NEGATIVE_INFINITY;
  private failures = 0;

  /** Total sends issued; exposed for rate-cap checks. */
  requestsSent = 0;

  constructor(options: SchedulerOptions<D, R>) {
    this.send = options.send;
    this.apply = options.apply;
    this.onGiveUp = options.onGiveUp;
    this.minIntervalMs = options.minIntervalMs ?? 100;
    this.maxRetries = options.maxRetries ?? 3;
    this.backoffBaseMs = options.backoffBaseMs ?? 200;
    this.timers = options.timers ?? realTimers;
  }

  /** Record the newest draft and arrange a flush. Replaces any draft still
   * waiting; a fresh edit also abandons the retry countdown of a failing
   * one. */
  submit(draft: D): void {
    this.pending = { draft };
    this.failures = 0;
    this.armFlush(0);
  }

  /** True while a draft is waiting or a request is being retried. */
  get busy(): boolean {
    return this.pending !== null || this.timer !== null;
  }

  private armFlush(extraDelayMs: number): void {
    if (this.timer !== null) return;
    const spacing = this.lastSendAt + this.minIntervalMs - this.timers.now();
    const wait = Math.max(0, extraDelayMs, spacing);
    this.timer = this.timers.schedule(() => {
      this.timer = null;
      this.flush();
    }, wait);
  }

  private flush(): void {
    if (this.pending === null) return;
    const { draft } = this.pending;
    this.pending = null;
    this.lastSendAt = this.timers.now();
    const seq = ++this.seq;
    this.requestsSent += 1;
    this.send(draft).then(
      (result) => this.settle(seq, draft, result, null),
      (error) => this.settle(seq, draft, null, error ?? new Error("request failed")),
    );
  }

  private settle(seq: number, draft: D, result: R | null, error: unknown): void {
    // Superseded either way: a newer request went out, or a newer draft is
    // queued. Its eventual response owns the panels.
    if (seq !== this.seq || this.pending !== null) return;
    if (error === null) {
      this.failures = 0;
      this.apply(result as R, draft);
      return;
    }
    this.failures += 1;
    if (this.failures > this.maxRetries) {
      this.failures = 0;
      this.onGiveUp?.(error, draft);
      return;
    }
    this.pending = { draft };
    this.armFlush(this.backoffBaseMs * 2 ** (this.failures - 1));
  }
}
