/**
 * Tiny deterministic SVG scene builder: linear scales, framed axes with
 * ticks, polylines, bars and dashed markers. No DOM, no randomness, no
 * timestamps, so identical inputs give identical bytes.
 */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = [d0, d1];
  fn.range = [r0, r1];
  return fn;
}

export function extent(values: number[], padFraction = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

export function ticks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const step0 = span / Math.max(count, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * Math.abs(span); v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  const s = a >= 1e-3 && a < 1e5 ? v.toPrecision(5) : v.toExponential(3);
  return s.replace(/(\.\d*?)0+($|e)/, "$1$2").replace(/\.($|e)/, "$1");
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                        "#8c564b", "#e377c2", "#17becf"];

export interface PanelOptions {
  x: number;
  y: number;
  width: number;
  height: number;
  xLabel: string;
  yLabel: string;
  title?: string;
}

export class Panel {
  readonly opts: PanelOptions;
  readonly xScale: Scale;
  readonly yScale: Scale;
  private readonly parts: string[] = [];

  constructor(opts: PanelOptions, xDomain: [number, number], yDomain: [number, number]) {
    this.opts = opts;
    this.xScale = linearScale(xDomain[0], xDomain[1], opts.x, opts.x + opts.width);
    this.yScale = linearScale(yDomain[0], yDomain[1], opts.y + opts.height, opts.y);
    this.frame();
  }

  private frame(): void {
    const { x, y, width, height, xLabel, yLabel, title } = this.opts;
    this.parts.push(
      `<rect x="${x}" y="${y}" width="${width}" height="${height}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const t of ticks(this.xScale.domain[0], this.xScale.domain[1])) {
      const px = this.xScale(t);
      this.parts.push(
        `<line x1="${r(px)}" y1="${y + height}" x2="${r(px)}" y2="${y + height + 4}" stroke="#333"/>`,
        `<text x="${r(px)}" y="${y + height + 16}" font-size="10" text-anchor="middle">${fmt(t)}</text>`,
      );
    }
    for (const t of ticks(this.yScale.domain[1], this.yScale.domain[0])) {
      const py = this.yScale(t);
      this.parts.push(
        `<line x1="${x - 4}" y1="${r(py)}" x2="${x}" y2="${r(py)}" stroke="#333"/>`,
        `<text x="${x - 6}" y="${r(py) + 3}" font-size="10" text-anchor="end">${fmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${x + width / 2}" y="${y + height + 30}" font-size="11" text-anchor="middle">${esc(xLabel)}</text>`,
      `<text x="${x - 44}" y="${y + height / 2}" font-size="11" text-anchor="middle" transform="rotate(-90 ${x - 44} ${y + height / 2})">${esc(yLabel)}</text>`,
    );
    if (title) {
      this.parts.push(
        `<text x="${x + width / 2}" y="${y - 6}" font-size="12" text-anchor="middle">${esc(title)}</text>`,
      );
    }
  }

  polyline(xs: number[], ys: number[], color: string, width = 1.5): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) continue;
      pts.push(`${r(this.xScale(xs[i]))},${r(this.yScale(ys[i]))}`);
    }
    this.parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="${width}"/>`,
    );
  }

  bars(xs: number[], heights: number[], barWidth: number, color: string): void {
    const y0 = this.yScale(Math.max(this.yScale.domain[0], 0));
    const half = Math.abs(this.xScale(barWidth) - this.xScale(0)) / 2;
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(heights[i])) continue;
      const px = this.xScale(xs[i]);
      const py = this.yScale(heights[i]);
      const top = Math.min(py, y0);
      const h = Math.abs(y0 - py);
      this.parts.push(
        `<rect x="${r(px - half)}" y="${r(top)}" width="${r(2 * half)}" height="${r(h)}" fill="${color}" stroke="none"/>`,
      );
    }
  }

  dashedVLine(xValue: number, color: string): void {
    const { y, height } = this.opts;
    const px = this.xScale(xValue);
    this.parts.push(
      `<line x1="${r(px)}" y1="${y}" x2="${r(px)}" y2="${y + height}" stroke="${color}" stroke-width="1.2" stroke-dasharray="5,4"/>`,
    );
  }

  render(): string {
    return this.parts.join("\n");
  }
}

function r(v: number): string {
  // fixed decimals keep coordinates stable across platforms
  return v.toFixed(3);
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
