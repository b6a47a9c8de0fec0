/**
 * The three figure kinds, all display-only:
 *
 *   spectrum-flow  energy levels against atan(gamma L) from sweep.csv
 *   histogram      momentum measurement bars with the continuous
 *                  |FT|^2 overlay from histogram.csv + density.csv
 *   snapshot       packet density in position and momentum space with
 *                  dashed expectation-value markers
 *
 * Each builder returns the SVG text plus the exact numeric series it
 * plotted, so tests can confirm the rendered data equal the input
 * columns bit for bit. The only transforms applied are axis mappings
 * (and the bin-width scaling that puts the continuous density on the
 * probability axis).
 */

import { numericColumn, requireColumns, Table } from "./csv.js";
import { document, extent, Panel, PALETTE } from "./svg.js";

export interface FigureResult {
  svg: string;
  series: Record<string, number[]>;
}

const W = 640;
const PANEL = { x: 70, y: 30, width: W - 100, height: 300 };

export function spectrumFlow(sweep: Table): FigureResult {
  requireColumns(sweep, ["gamma", "atan_gamma_L", "l", "kind", "energy"]);
  const angle = numericColumn(sweep, "atan_gamma_L");
  const level = numericColumn(sweep, "l");
  const energy = numericColumn(sweep, "energy");

  const panel = new Panel(
    { ...PANEL, xLabel: "atan(gamma L)", yLabel: "energy", title: "energy levels vs atan(gamma L)" },
    extent(angle, 0.02),
    extent(energy),
  );
  const indices = [...new Set(level)].sort((a, b) => a - b);
  for (const l of indices) {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let i = 0; i < level.length; i++) {
      if (level[i] === l) {
        xs.push(angle[i]);
        ys.push(energy[i]);
      }
    }
    panel.polyline(xs, ys, PALETTE[l % PALETTE.length]);
  }
  const svg = document(W, 380, [panel.render()]);
  return { svg, series: { atan_gamma_L: angle, l: level, energy } };
}

export function histogram(hist: Table, overlay?: Table): FigureResult {
  requireColumns(hist, ["n", "k", "probability"]);
  const n = numericColumn(hist, "n");
  const k = numericColumn(hist, "k");
  const p = numericColumn(hist, "probability");

  const series: Record<string, number[]> = { n, k, probability: p };
  const spacing = k.length > 1 ? Math.abs(k[1] - k[0]) : 1;
  let yMax = Math.max(...p.filter(Number.isFinite));

  let overlayK: number[] = [];
  let overlayScaled: number[] = [];
  if (overlay) {
    requireColumns(overlay, ["k", "density"]);
    overlayK = numericColumn(overlay, "k");
    const density = numericColumn(overlay, "density");
    series.overlay_k = overlayK;
    series.overlay_density = density;
    // per-mode probability = density x ladder spacing (pi/L)
    overlayScaled = density.map((d) => d * spacing);
    yMax = Math.max(yMax, ...overlayScaled.filter(Number.isFinite));
  }

  const panel = new Panel(
    { ...PANEL, xLabel: "k", yLabel: "probability", title: "momentum measurement" },
    extent(k, 0.02),
    [0, yMax * 1.08 || 1],
  );
  panel.bars(k, p, spacing * 0.8, PALETTE[0]);
  if (overlay) panel.polyline(overlayK, overlayScaled, PALETTE[1], 1.2);
  const svg = document(W, 380, [panel.render()]);
  return { svg, series };
}

export interface SnapshotMarkers {
  meanX?: number;
  pR?: number;
}

export function snapshot(position: Table, momentum?: Table,
                         markers: SnapshotMarkers = {}): FigureResult {
  requireColumns(position, ["x", "density"]);
  const x = numericColumn(position, "x");
  const density = numericColumn(position, "density");
  const series: Record<string, number[]> = { x, density };

  const h = 230;
  const top = new Panel(
    { x: 70, y: 30, width: W - 100, height: h, xLabel: "x", yLabel: "|psi|^2", title: "position space" },
    extent(x, 0.02),
    [0, Math.max(...density.filter(Number.isFinite)) * 1.08 || 1],
  );
  top.polyline(x, density, PALETTE[0]);
  if (markers.meanX !== undefined) top.dashedVLine(markers.meanX, "#555");

  const body = [top.render()];
  let height = 330;
  if (momentum) {
    requireColumns(momentum, ["n", "k", "probability"]);
    const k = numericColumn(momentum, "k");
    const p = numericColumn(momentum, "probability");
    series.momentum_n = numericColumn(momentum, "n");
    series.momentum_k = k;
    series.momentum_probability = p;
    const spacing = k.length > 1 ? Math.abs(k[1] - k[0]) : 1;
    const bottom = new Panel(
      { x: 70, y: 330, width: W - 100, height: h, xLabel: "k", yLabel: "P(n)", title: "momentum space" },
      extent(k, 0.02),
      [0, Math.max(...p.filter(Number.isFinite)) * 1.08 || 1],
    );
    bottom.bars(k, p, spacing * 0.8, PALETTE[0]);
    if (markers.pR !== undefined) bottom.dashedVLine(markers.pR, "#555");
    body.push(bottom.render());
    height = 640;
  }
  return { svg: document(W, height, body), series };
}

/** Pull the dashed-line expectation values for a snapshot from series.csv. */
export function markersFromSeries(seriesTable: Table, index: number): SnapshotMarkers {
  requireColumns(seriesTable, ["t", "mean_x", "pR"]);
  if (index < 0 || index >= seriesTable.rows.length) {
    throw new RangeError(`snapshot index ${index} outside series (${seriesTable.rows.length} rows)`);
  }
  return {
    meanX: numericColumn(seriesTable, "mean_x")[index],
    pR: numericColumn(seriesTable, "pR")[index],
  };
}

/** Sanity hook used by tests: the kinds a CLI invocation can name. */
export const KINDS = ["spectrum-flow", "histogram", "snapshot"] as const;
export type Kind = (typeof KINDS)[number];

export function describeKinds(): string {
  return KINDS.join(" | ");
}

