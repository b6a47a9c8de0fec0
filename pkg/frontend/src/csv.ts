/**
 * Strict loading of the boxqm CLI's CSV tables.
 *
 * Figures never recompute physics, so the only acceptable failure mode
 * for a malformed input is a loud one: missing columns raise a
 * SchemaError naming the file and the columns it lacks.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export interface Table {
  source: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string, source: string): Table {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${source}: CSV parse error: ${first.message} (row ${first.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  return { source, columns, rows: parsed.data };
}

export function loadTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

export function requireColumns(table: Table, needed: string[]): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${table.source}: missing column(s) ${missing.join(", ")}; ` +
        `found ${table.columns.join(", ")}`,
    );
  }
}

/** Numeric column; the CLI writes plain decimals plus literal inf/-inf. */
export function numericColumn(table: Table, name: string): number[] {
  requireColumns(table, [name]);
  return table.rows.map((row, i) => {
    const raw = row[name];
    if (raw === "inf") return Infinity;
    if (raw === "-inf") return -Infinity;
    const v = Number(raw);
    if (raw === "" || raw === undefined || Number.isNaN(v)) {
      throw new SchemaError(`${table.source}: non-numeric value ${raw ?? "<empty>"} in column ${name}, row ${i}`);
    }
    return v;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  requireColumns(table, [name]);
  return table.rows.map((row) => row[name]);
}
