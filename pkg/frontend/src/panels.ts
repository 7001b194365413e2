/** Dashboard panels as pure SVG strings.
 *
 * Every renderer is a pure function of service responses (plus the marker
 * position), so a given set of API payloads always paints the same pixels.
 * No model math happens here; the only geometry the client does is scaling
 * numbers onto the canvas and the point-in-polygon test used to pick the
 * marker's styling, which consumes the polygon the service computed.
 */

import type { PeakSummary, RegionGeometry, SensitivityTable } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(x: number): string {
  // trim float noise in attribute coordinates
  return Number(x.toFixed(4)).toString();
}

/** Threshold-crossing classification against the service polygon. The
 * polygon is convex and counter-clockwise; a point is inside when it is
 * never strictly right of an edge. Boundary points count as inside, which
 * matches the service convention that the boundary itself satisfies
 * R0 = 1. */
export function pointInFeasiblePolygon(region: RegionGeometry, u1: number, u2: number): boolean {
  const poly = region.feasible_polygon;
  if (poly.length < 3) return false;
  for (let i = 0; i < poly.length; i += 1) {
    const [ax, ay] = poly[i];
    const [bx, by] = poly[(i + 1) % poly.length];
    const cross = (bx - ax) * (u2 - ay) - (by - ay) * (u1 - ax);
    if (cross < 0) return false;
  }
  return true;
}

/** Reproduction-number gauge. A log-ish ribbon with the eradication
 * threshold marked at R0 = 1; the needle and the data-feasible attribute
 * are driven purely by the service's r0 value. */
export function renderGauge(r0: number, width = 320, height = 72): string {
  const pad = 12;
  const span = width - 2 * pad;
  // place R0 on the ribbon: [0, 1] fills the left half, (1, 10] the right
  const position = r0 <= 1 ? r0 / 2 : 0.5 + Math.min(1, Math.log10(Math.max(r0, 1)) ) / 2;
  const x = pad + span * Math.min(1, Math.max(0, position));
  const mid = pad + span / 2;
  const feasible = r0 < 1;
  const cls = feasible ? "gauge-below" : "gauge-above";
  const parts = [
    `<svg xmlns="${SVG_NS}" viewBox="0 0 ${width} ${height}" class="gauge ${cls}" data-feasible="${feasible}" data-r0="${r0}">`,
    `<rect x="${pad}" y="28" width="${fmt(span / 2)}" height="14" class="gauge-band-safe"/>`,
    `<rect x="${fmt(mid)}" y="28" width="${fmt(span / 2)}" height="14" class="gauge-band-epidemic"/>`,
    `<line x1="${fmt(mid)}" y1="20" x2="${fmt(mid)}" y2="50" class="gauge-threshold"/>`,
    `<text x="${fmt(mid)}" y="62" text-anchor="middle" class="gauge-tick">1</text>`,
    `<line x1="${fmt(x)}" y1="24" x2="${fmt(x)}" y2="46" class="gauge-needle"/>`,
    `<text x="${pad}" y="16" class="gauge-label">R0 = ${esc(formatR0(r0))}</text>`,
    `</svg>`,
  ];
  return parts.join("");
}

function formatR0(r0: number): string {
  if (!Number.isFinite(r0)) return String(r0);
  return r0 >= 100 ? r0.toExponential(4) : r0.toPrecision(6);
}

/** Eradication-region panel: unit square in (u1, u2), the R0 = 1 line, the
 * feasible side shaded with the service polygon, and the current scenario
 * marker classed by which side of the threshold it sits on. */
export function renderRegion(
  region: RegionGeometry,
  u1: number,
  u2: number,
  size = 320,
): string {
  const pad = 30;
  const side = size - 2 * pad;
  const px = (u: number) => pad + u * side;
  const py = (v: number) => pad + (1 - v) * side; // svg y grows downward
  const inside = pointInFeasiblePolygon(region, u1, u2);

  const parts = [
    `<svg xmlns="${SVG_NS}" viewBox="0 0 ${size} ${size}" class="region" ` +
      `data-marker-inside="${inside}" data-delta="${region.delta}">`,
    `<rect x="${pad}" y="${pad}" width="${side}" height="${side}" class="region-frame"/>`,
  ];

  if (region.feasible_polygon.length >= 3) {
    const points = region.feasible_polygon
      .map(([a, b]) => `${fmt(px(a))},${fmt(py(b))}`)
      .join(" ");
    parts.push(`<polygon points="${points}" class="region-feasible"/>`);
  }

  // R0 = 1 line drawn from the u2-axis intercept with the service slope,
  // clipped to the square by sampling both vertical edges
  const yAt = (u: number) => region.l2 + region.slope * u;
  const lineStart: [number, number] = [0, yAt(0)];
  const lineEnd: [number, number] = [1, yAt(1)];
  parts.push(
    `<line x1="${fmt(px(lineStart[0]))}" y1="${fmt(py(lineStart[1]))}" ` +
      `x2="${fmt(px(lineEnd[0]))}" y2="${fmt(py(lineEnd[1]))}" class="region-boundary"/>`,
  );

  const markerClass = inside ? "region-marker-inside" : "region-marker-outside";
  parts.push(
    `<circle cx="${fmt(px(u1))}" cy="${fmt(py(u2))}" r="5" class="region-marker ${markerClass}"/>`,
    `<text x="${fmt(size / 2)}" y="${size - 6}" text-anchor="middle" class="axis-label">u1 (vaccination)</text>`,
    `<text x="10" y="${fmt(size / 2)}" text-anchor="middle" class="axis-label" ` +
      `transform="rotate(-90 10 ${fmt(size / 2)})">u2 (restrictions)</text>`,
    `</svg>`,
  );
  return parts.join("");
}

/** Signed tornado chart of elasticities. Rows arrive ranked from the
 * service; bar length encodes rank (longest bar is rank 1) and side encodes
 * sign, with the service-reported value printed verbatim. */
export function renderSensitivity(table: SensitivityTable, width = 380): string {
  const rowHeight = 18;
  const pad = 8;
  const mid = width / 2;
  const height = pad * 2 + table.rows.length * rowHeight;
  const maxBar = width / 2 - 70;
  const parts = [
    `<svg xmlns="${SVG_NS}" viewBox="0 0 ${width} ${height}" class="sensitivity" data-r0="${table.r0}">`,
    `<line x1="${fmt(mid)}" y1="${pad}" x2="${fmt(mid)}" y2="${fmt(height - pad)}" class="sensitivity-axis"/>`,
  ];
  const count = table.rows.length;
  for (const row of table.rows) {
    const y = pad + (row.rank - 1) * rowHeight;
    const length = maxBar * ((count + 1 - row.rank) / count);
    const barX = row.sign >= 0 ? mid : mid - length;
    const sideClass = row.sign >= 0 ? "sensitivity-up" : "sensitivity-down";
    const degenerate = row.degenerate ? " sensitivity-degenerate" : "";
    const labelX = row.sign >= 0 ? mid + length + 4 : mid - length - 4;
    const anchor = row.sign >= 0 ? "start" : "end";
    parts.push(
      `<rect x="${fmt(barX)}" y="${fmt(y + 3)}" width="${fmt(length)}" height="${rowHeight - 6}" ` +
        `class="sensitivity-bar ${sideClass}${degenerate}" data-parameter="${esc(row.parameter)}" ` +
        `data-rank="${row.rank}" data-upsilon="${row.upsilon}"/>`,
      `<text x="${fmt(labelX)}" y="${fmt(y + rowHeight - 5)}" text-anchor="${anchor}" class="sensitivity-label">` +
        `${esc(row.parameter)} ${esc(String(row.upsilon))}</text>`,
    );
  }
  parts.push(`</svg>`);
  return parts.join("");
}

export interface TrajectorySeries {
  label: string;
  times: readonly number[];
  values: readonly number[];
  peak: PeakSummary;
  /** Marks the live scenario line as opposed to a pinned one. */
  current?: boolean;
}

const SERIES_CLASSES = ["series-a", "series-b", "series-c", "series-d", "series-e", "series-f"];

/** Non-healthy trajectory overlay for the current scenario plus pins.
 *
 * Series are sorted by label before drawing, so the rendered document is a
 * pure function of the set of scenarios: pinning A then B paints the same
 * SVG as pinning B then A. */
export function renderTrajectory(
  seriesList: readonly TrajectorySeries[],
  width = 480,
  height = 260,
): string {
  const pad = { left: 64, right: 12, top: 14, bottom: 30 };
  const plotW = width - pad.left - pad.right;
  const plotH = height - pad.top - pad.bottom;
  const ordered = [...seriesList].sort((a, b) => (a.label < b.label ? -1 : a.label > b.label ? 1 : 0));

  let tMax = 0;
  let vMax = 0;
  for (const series of ordered) {
    for (const t of series.times) tMax = Math.max(tMax, t);
    for (const v of series.values) vMax = Math.max(vMax, v);
  }
  if (tMax <= 0) tMax = 1;
  if (vMax <= 0) vMax = 1;

  const px = (t: number) => pad.left + (t / tMax) * plotW;
  const py = (v: number) => pad.top + (1 - v / vMax) * plotH;

  const parts = [
    `<svg xmlns="${SVG_NS}" viewBox="0 0 ${width} ${height}" class="trajectory" data-series-count="${ordered.length}">`,
    `<rect x="${pad.left}" y="${pad.top}" width="${fmt(plotW)}" height="${fmt(plotH)}" class="trajectory-frame"/>`,
  ];

  ordered.forEach((series, index) => {
    const cls = SERIES_CLASSES[index % SERIES_CLASSES.length];
    const current = series.current ? " series-current" : "";
    const points: string[] = [];
    const n = Math.min(series.times.length, series.values.length);
    for (let i = 0; i < n; i += 1) {
      points.push(`${fmt(px(series.times[i]))},${fmt(py(series.values[i]))}`);
    }
    parts.push(
      `<polyline points="${points.join(" ")}" class="trajectory-line ${cls}${current}" ` +
        `data-label="${esc(series.label)}" data-peak="${series.peak.peak}" ` +
        `data-peak-time="${series.peak.peak_time}"/>`,
    );
  });

  // legend, one row per series in the same sorted order
  ordered.forEach((series, index) => {
    const cls = SERIES_CLASSES[index % SERIES_CLASSES.length];
    const y = pad.top + 14 + index * 16;
    parts.push(
      `<circle cx="${pad.left + 10}" cy="${fmt(y - 4)}" r="4" class="legend-dot ${cls}"/>`,
      `<text x="${pad.left + 20}" y="${fmt(y)}" class="legend-label" data-role="legend" ` +
        `data-label="${esc(series.label)}" data-peak="${series.peak.peak}">` +
        `${esc(series.label)}: peak ${esc(formatCount(series.peak.peak))} at day ${esc(formatCount(series.peak.peak_time))}</text>`,
    );
  });

  parts.push(
    `<text x="${fmt(width / 2)}" y="${height - 8}" text-anchor="middle" class="axis-label">days</text>`,
    `<text x="12" y="${fmt(height / 2)}" class="axis-label" transform="rotate(-90 12 ${fmt(height / 2)})">non-healthy</text>`,
    `</svg>`,
  );
  return parts.join("");
}

function formatCount(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (x >= 1e6) return `${(x / 1e6).toFixed(2)}M`;
  if (x >= 1e3) return `${(x / 1e3).toFixed(1)}k`;
  return x.toFixed(x >= 10 ? 0 : 2);
}
