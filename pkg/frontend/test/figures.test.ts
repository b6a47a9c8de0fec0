import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { loadTable, numericColumn, parseCsv, SchemaError } from "../src/csv.js";
import {
  histogram,
  markersFromSeries,
  snapshot,
  spectrumFlow,
} from "../src/figures.js";

const FIX = join(__dirname, "fixtures");

const sweepPath = join(FIX, "spectrum", "sweep.csv");
const histPath = join(FIX, "measure", "histogram.csv");
const densityPath = join(FIX, "measure", "density.csv");
const snapPath = join(FIX, "evolve", "snapshots", "000.csv");
const snapMomPath = join(FIX, "evolve", "snapshots", "000_momentum.csv");
const seriesPath = join(FIX, "evolve", "series.csv");

describe("spectrum-flow", () => {
  it("plots exactly the input columns", () => {
    const table = loadTable(sweepPath);
    const result = spectrumFlow(table);
    // independent parse for the fidelity check
    const raw = parseCsv(readFileSync(sweepPath, "utf8"), sweepPath);
    expect(result.series.energy).toEqual(numericColumn(raw, "energy"));
    expect(result.series.atan_gamma_L).toEqual(numericColumn(raw, "atan_gamma_L"));
    expect(result.series.l).toEqual(numericColumn(raw, "l"));
    expect(result.svg).toContain("<svg");
    expect(result.svg).toContain("polyline");
  });

  it("is deterministic", () => {
    const table = loadTable(sweepPath);
    expect(spectrumFlow(table).svg).toBe(spectrumFlow(table).svg);
  });

  it("names missing columns", () => {
    const bad = parseCsv("gamma,l,kind,energy\n1,0,positive,2\n", "bad.csv");
    expect(() => spectrumFlow(bad)).toThrowError(SchemaError);
    expect(() => spectrumFlow(bad)).toThrowError(/atan_gamma_L/);
  });
});

describe("histogram", () => {
  it("plots probabilities and overlay bit-exactly", () => {
    const result = histogram(loadTable(histPath), loadTable(densityPath));
    const rawHist = parseCsv(readFileSync(histPath, "utf8"), histPath);
    const rawDensity = parseCsv(readFileSync(densityPath, "utf8"), densityPath);
    expect(result.series.probability).toEqual(numericColumn(rawHist, "probability"));
    expect(result.series.k).toEqual(numericColumn(rawHist, "k"));
    expect(result.series.overlay_density).toEqual(numericColumn(rawDensity, "density"));
    expect(result.svg).toContain("rect");
  });

  it("works without an overlay", () => {
    const result = histogram(loadTable(histPath));
    expect(result.series.overlay_density).toBeUndefined();
    expect(result.svg).toContain("<svg");
  });

  it("rejects a density file without its column", () => {
    const bad = parseCsv("k,value\n0,1\n", "bad.csv");
    expect(() => histogram(loadTable(histPath), bad)).toThrowError(/density/);
  });
});

describe("snapshot", () => {
  it("plots position and momentum panels bit-exactly", () => {
    const markers = markersFromSeries(loadTable(seriesPath), 0);
    const result = snapshot(loadTable(snapPath), loadTable(snapMomPath), markers);
    const rawPos = parseCsv(readFileSync(snapPath, "utf8"), snapPath);
    const rawMom = parseCsv(readFileSync(snapMomPath, "utf8"), snapMomPath);
    expect(result.series.density).toEqual(numericColumn(rawPos, "density"));
    expect(result.series.x).toEqual(numericColumn(rawPos, "x"));
    expect(result.series.momentum_probability).toEqual(numericColumn(rawMom, "probability"));
    expect(result.svg).toContain("stroke-dasharray");
  });

  it("marker extraction validates the index", () => {
    const series = loadTable(seriesPath);
    expect(() => markersFromSeries(series, 99)).toThrowError(RangeError);
    const m = markersFromSeries(series, 1);
    expect(typeof m.meanX).toBe("number");
    expect(typeof m.pR).toBe("number");
  });

  it("requires the density column", () => {
    const bad = parseCsv("x,re,im\n0,1,0\n", "bad.csv");
    expect(() => snapshot(bad)).toThrowError(/density/);
  });
});
