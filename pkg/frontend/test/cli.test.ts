import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { run } from "../src/cli.js";

const FIX = join(__dirname, "fixtures");

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "boxqm-fig-"));
}

describe("figure CLI", () => {
  it("renders the spectrum-flow figure", () => {
    const out = join(tmp(), "fig1.svg");
    const code = run(["--kind", "spectrum-flow",
                      "--in", join(FIX, "spectrum", "sweep.csv"), "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("</svg>");
  });

  it("renders the histogram with overlay", () => {
    const out = join(tmp(), "fig3.svg");
    const code = run(["--kind", "histogram",
                      "--in", join(FIX, "measure", "histogram.csv"),
                      "--overlay", join(FIX, "measure", "density.csv"),
                      "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("polyline");
  });

  it("renders a snapshot with expectation markers", () => {
    const out = join(tmp(), "fig5.svg");
    const code = run(["--kind", "snapshot",
                      "--in", join(FIX, "evolve", "snapshots", "001.csv"),
                      "--momentum", join(FIX, "evolve", "snapshots", "001_momentum.csv"),
                      "--series", join(FIX, "evolve", "series.csv"),
                      "--index", "1", "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("stroke-dasharray");
  });

  it("is byte-deterministic across runs", () => {
    const a = join(tmp(), "a.svg");
    const b = join(tmp(), "b.svg");
    for (const out of [a, b]) {
      expect(run(["--kind", "histogram",
                  "--in", join(FIX, "measure", "histogram.csv"), "--out", out])).toBe(0);
    }
    expect(readFileSync(a, "utf8")).toBe(readFileSync(b, "utf8"));
  });

  it("fails with a column diagnostic on schema mismatch", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "a,b\n1,2\n");
    const code = run(["--kind", "histogram", "--in", bad, "--out", join(dir, "x.svg")]);
    expect(code).toBe(1);
  });

  it("rejects unknown kinds", () => {
    expect(run(["--kind", "pie", "--in", "x", "--out", "y"])).toBe(1);
  });
});
