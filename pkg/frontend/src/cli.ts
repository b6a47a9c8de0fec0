/**
 * Figure renderer for boxqm CLI outputs.
 *
 *   node dist/cli.js --kind spectrum-flow --in out/sweep.csv --out fig1.svg
 *   node dist/cli.js --kind histogram --in out/histogram.csv \
 *       --overlay out/density.csv --out fig3.svg
 *   node dist/cli.js --kind snapshot --in out/snapshots/000.csv \
 *       --momentum out/snapshots/000_momentum.csv \
 *       --series out/series.csv --index 0 --out fig5.svg
 *
 * Exits nonzero with a column diagnostic when an input does not match
 * the documented schema.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import yargs from "yargs";

import { loadTable, SchemaError } from "./csv.js";
import {
  FigureResult,
  histogram,
  Kind,
  KINDS,
  markersFromSeries,
  snapshot,
  spectrumFlow,
} from "./figures.js";

export interface CliOptions {
  kind: Kind;
  in: string;
  out: string;
  overlay?: string;
  momentum?: string;
  series?: string;
  index?: number;
}

export function render(opts: CliOptions): FigureResult {
  const table = loadTable(opts.in);
  if (opts.kind === "spectrum-flow") {
    return spectrumFlow(table);
  }
  if (opts.kind === "histogram") {
    return histogram(table, opts.overlay ? loadTable(opts.overlay) : undefined);
  }
  const markers = opts.series
    ? markersFromSeries(loadTable(opts.series), opts.index ?? 0)
    : {};
  return snapshot(table, opts.momentum ? loadTable(opts.momentum) : undefined, markers);
}

export function run(argv: string[]): number {
  try {
    const parsed = yargs(argv)
      .option("kind", { choices: KINDS, demandOption: true })
      .option("in", { type: "string", demandOption: true, describe: "main input CSV" })
      .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
      .option("overlay", { type: "string", describe: "density.csv for the histogram overlay" })
      .option("momentum", { type: "string", describe: "momentum CSV for snapshots" })
      .option("series", { type: "string", describe: "series.csv carrying expectation values" })
      .option("index", { type: "number", describe: "row of --series for the markers" })
      .strict()
      .exitProcess(false)
      .fail((msg) => {
        throw new SchemaError(msg);
      })
      .parseSync();
    const result = render(parsed as unknown as CliOptions);
    mkdirSync(dirname(parsed.out) || ".", { recursive: true });
    writeFileSync(parsed.out, result.svg);
    return 0;
  } catch (err) {
    if (err instanceof Error) {
      process.stderr.write(`boxqm-figures: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
