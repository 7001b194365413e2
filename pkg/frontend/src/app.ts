/** Explorer shell: wires sliders to the update scheduler and paints the
 * four linked panels from service responses.
 *
 * One composite fetch per draft (r0 + region + sensitivity + trajectory)
 * keeps the panels mutually consistent: they either all show the same
 * scenario or none of them moves. Domain errors on individual panels
 * (a vertical region boundary, an undefined sensitivity index) are folded
 * into the composite result so the remaining panels still update.
 */

import { ApiClient, ApiFailure } from "./api.js";
import {
  CONTROL_NAMES,
  draftKey,
  makeDraft,
  parameterFragment,
  withControl,
  withDelta,
  withPpkmLevel,
} from "./draft.js";
import type { PpkmLevel, ScenarioDraft } from "./draft.js";
import {
  renderGauge,
  renderRegion,
  renderSensitivity,
  renderTrajectory,
} from "./panels.js";
import type { TrajectorySeries } from "./panels.js";
import { makePin, pinSeries } from "./pins.js";
import type { ComparisonPin } from "./pins.js";
import { UpdateScheduler } from "./scheduler.js";
import type {
  ControlName,
  DefaultsResponse,
  R0Response,
  RegionGeometry,
  SensitivityTable,
  SimulateResponse,
} from "./types.js";

interface CompositeResult {
  r0: R0Response;
  region: RegionGeometry | ApiFailure;
  sensitivity: SensitivityTable | ApiFailure;
  simulation: SimulateResponse;
}

interface Snapshot {
  draft: ScenarioDraft;
  result: CompositeResult;
}

const FALLBACK_DELTA = 0.653;
const FALLBACK_U2 = 0.278;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function sliderLabel(value: number): string {
  return value.toFixed(3);
}

export class ExplorerApp {
  private readonly client: ApiClient;
  private defaults: DefaultsResponse | null = null;
  private draft: ScenarioDraft;
  private pins: ComparisonPin[] = [];
  private latest: Snapshot | null = null;
  private scheduler: UpdateScheduler<ScenarioDraft, CompositeResult>;

  constructor(baseUrl: string) {
    this.client = new ApiClient(baseUrl);
    this.draft = makeDraft({
      delta: FALLBACK_DELTA,
      controls: { u1: 0.4, u2: FALLBACK_U2, u3: 0.5, u4: 0.3, u5: 0.0 },
    });
    this.scheduler = new UpdateScheduler({
      send: (draft) => this.fetchComposite(draft),
      apply: (result, draft) => this.applyResult(result, draft),
      onGiveUp: (error) => this.showOffline(error),
    });
  }

  async start(): Promise<void> {
    try {
      this.defaults = await this.client.defaults();
    } catch (error) {
      this.showOffline(error);
      return;
    }
    const base = this.defaults.parameters;
    this.draft = makeDraft({
      delta: FALLBACK_DELTA,
      controls: {
        u1: base.u1 ?? 0.4,
        u2: FALLBACK_U2,
        u3: base.u3 ?? 0.5,
        u4: base.u4 ?? 0.3,
        u5: base.u5 ?? 0.0,
      },
    });
    this.buildControls();
    this.buildExpertPanel();
    this.scheduler.submit(this.draft);
  }

  private async fetchComposite(draft: ScenarioDraft): Promise<CompositeResult> {
    const fragment = parameterFragment(draft);
    const horizon = this.defaults?.integrator.horizon ?? 365;
    const interval = this.defaults?.integrator.sample_interval ?? 1;
    // Domain failures stay panel-local; anything else rejects the whole
    // composite so the scheduler can retry it.
    const soften = <T>(promise: Promise<T>): Promise<T | ApiFailure> =>
      promise.catch((error) => {
        if (error instanceof ApiFailure && error.kind === "domain") return error;
        throw error;
      });
    const [r0, region, sensitivity, simulation] = await Promise.all([
      this.client.r0(fragment),
      soften(this.client.region(fragment)),
      soften(this.client.sensitivity(fragment)),
      this.client.simulate({
        parameters: fragment,
        integrator: { horizon, sample_interval: interval },
      }),
    ]);
    return { r0, region, sensitivity, simulation };
  }

  private applyResult(result: CompositeResult, draft: ScenarioDraft): void {
    this.latest = { draft, result };
    this.hideBanner();
    el("gauge-panel").innerHTML = renderGauge(result.r0.r0);

    const u2Effective = this.effectiveU2(draft);
    if (result.region instanceof ApiFailure) {
      el("region-panel").innerHTML =
        `<p class="panel-notice">vertical boundary: the threshold line has no finite slope here (${result.region.message})</p>`;
    } else {
      el("region-panel").innerHTML = renderRegion(result.region, draft.controls.u1, u2Effective);
    }

    if (result.sensitivity instanceof ApiFailure) {
      el("sensitivity-panel").innerHTML =
        `<p class="panel-notice">sensitivity undefined here: ${result.sensitivity.message}</p>`;
    } else {
      el("sensitivity-panel").innerHTML = renderSensitivity(result.sensitivity);
    }

    this.renderTrajectoryPanel();
    const preset = result.simulation.initial_preset ?? "custom";
    el("preset-note").textContent = `initial condition: "${preset}" preset`;
    el("pin-button").removeAttribute("disabled");
  }

  private renderTrajectoryPanel(): void {
    const series: TrajectorySeries[] = this.pins.map(pinSeries);
    if (this.latest !== null) {
      series.push({
        label: this.scenarioLabel(this.latest.draft),
        times: this.latest.result.simulation.times,
        values: this.latest.result.simulation.non_healthy,
        peak: this.latest.result.simulation.peak,
        current: true,
      });
    }
    el("trajectory-panel").innerHTML = renderTrajectory(series);
  }

  private effectiveU2(draft: ScenarioDraft): number {
    if (draft.ppkmLevel !== null && this.defaults !== null) {
      const mapped = this.defaults.ppkm_levels[String(draft.ppkmLevel)];
      if (typeof mapped === "number") return mapped;
    }
    return draft.controls.u2;
  }

  private scenarioLabel(draft: ScenarioDraft): string {
    const u2 = draft.ppkmLevel !== null
      ? `level ${draft.ppkmLevel}`
      : sliderLabel(draft.controls.u2);
    return `δ=${sliderLabel(draft.delta)} u1=${sliderLabel(draft.controls.u1)} u2=${u2}`;
  }

  private submitDraft(next: ScenarioDraft): void {
    this.draft = next;
    this.refreshReadouts();
    this.scheduler.submit(next);
  }

  private pinCurrent(): void {
    if (this.latest === null) return;
    const { draft, result } = this.latest;
    if (result.region instanceof ApiFailure) return;
    const label = this.scenarioLabel(draft);
    if (this.pins.some((pin) => pin.label === label)) return;
    this.pins.push(
      makePin(label, parameterFragment(draft), result.r0.r0, result.region, result.simulation),
    );
    this.renderPinList();
    this.renderTrajectoryPanel();
  }

  private removePin(label: string): void {
    this.pins = this.pins.filter((pin) => pin.label !== label);
    this.renderPinList();
    this.renderTrajectoryPanel();
  }

  private renderPinList(): void {
    const list = el("pin-list");
    list.innerHTML = "";
    for (const pin of this.pins) {
      const item = document.createElement("li");
      const text = document.createElement("span");
      text.textContent = `${pin.label} (R0 ${pin.r0.toPrecision(4)})`;
      const remove = document.createElement("button");
      remove.textContent = "unpin";
      remove.addEventListener("click", () => this.removePin(pin.label));
      item.append(text, remove);
      list.append(item);
    }
  }

  private buildControls(): void {
    this.bindSlider("delta", this.draft.delta, (value) =>
      this.submitDraft(withDelta(this.draft, value)),
    );
    for (const name of CONTROL_NAMES) {
      this.bindSlider(name, this.draft.controls[name], (value) =>
        this.submitDraft(withControl(this.draft, name, value)),
      );
    }

    const modeContinuous = el<HTMLInputElement>("u2-mode-continuous");
    const modeLevel = el<HTMLInputElement>("u2-mode-level");
    const levelSelect = el<HTMLSelectElement>("u2-level");
    if (this.defaults !== null) {
      levelSelect.innerHTML = "";
      for (const level of [1, 2, 3, 4] as PpkmLevel[]) {
        const option = document.createElement("option");
        const mapped = this.defaults.ppkm_levels[String(level)];
        option.value = String(level);
        option.textContent = `level ${level} (u2 = ${mapped.toFixed(3)})`;
        levelSelect.append(option);
      }
    }
    const applyMode = () => {
      const snap = modeLevel.checked;
      levelSelect.disabled = !snap;
      el<HTMLInputElement>("slider-u2").disabled = snap;
      if (snap) {
        const level = Number(levelSelect.value) as PpkmLevel;
        this.submitDraft(withPpkmLevel(this.draft, level));
      } else {
        this.submitDraft(withPpkmLevel(this.draft, null));
      }
    };
    modeContinuous.addEventListener("change", applyMode);
    modeLevel.addEventListener("change", applyMode);
    levelSelect.addEventListener("change", applyMode);

    el("pin-button").addEventListener("click", () => this.pinCurrent());

    const expertToggle = el<HTMLInputElement>("expert-toggle");
    expertToggle.addEventListener("change", () => {
      el("expert-panel").hidden = !expertToggle.checked;
    });
    this.refreshReadouts();
  }

  private bindSlider(name: "delta" | ControlName, initial: number, onInput: (value: number) => void): void {
    const slider = el<HTMLInputElement>(`slider-${name}`);
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.001";
    slider.value = String(initial);
    slider.addEventListener("input", () => onInput(Number(slider.value)));
  }

  private refreshReadouts(): void {
    el("readout-delta").textContent = sliderLabel(this.draft.delta);
    for (const name of CONTROL_NAMES) {
      el(`readout-${name}`).textContent =
        name === "u2" && this.draft.ppkmLevel !== null
          ? `${sliderLabel(this.effectiveU2(this.draft))} (level ${this.draft.ppkmLevel})`
          : sliderLabel(this.draft.controls[name]);
    }
    el("scenario-key").textContent = draftKey(this.draft);
  }

  /** Read-only biological rates; visible behind the expert toggle only,
   * since editing them is outside the steering loop. */
  private buildExpertPanel(): void {
    if (this.defaults === null) return;
    const table = el("expert-table");
    table.innerHTML = "";
    const skip = new Set(["delta", "u1", "u2", "u3", "u4", "u5"]);
    for (const [name, value] of Object.entries(this.defaults.parameters)) {
      if (skip.has(name) || value === null) continue;
      const row = document.createElement("tr");
      const key = document.createElement("td");
      key.textContent = name;
      const val = document.createElement("td");
      val.textContent = String(value);
      row.append(key, val);
      table.append(row);
    }
  }

  private showOffline(error: unknown): void {
    const banner = el("banner");
    const message = error instanceof ApiFailure && error.kind === "field"
      ? `rejected: ${error.message}`
      : "model service unreachable; sliders will re-sync once it returns";
    banner.textContent = message;
    banner.hidden = false;
  }

  private hideBanner(): void {
    el("banner").hidden = true;
  }
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";
  const app = new ExplorerApp(baseUrl);
  void app.start();
}
