/**
 * Reader for fuplab CSV tables: one `#` provenance line carrying
 * `key=value` metadata, then a plain numeric/string CSV.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export interface FuplabTable {
  /** column name -> values (numbers where parseable, else strings) */
  columns: Record<string, (number | string)[]>;
  /** key=value pairs from the provenance header line */
  meta: Record<string, string>;
  rows: number;
}

export class SchemaError extends Error {
  constructor(public missing: string[], path: string) {
    super(`${path} is missing required columns: ${missing.join(", ")}`);
    this.name = "SchemaError";
  }
}

export function readTable(path: string): FuplabTable {
  const raw = readFileSync(path, "utf8");
  const lines = raw.split(/\r?\n/);
  const meta: Record<string, string> = {};
  for (const line of lines) {
    if (!line.startsWith("#")) break;
    for (const tok of line.slice(1).trim().split(/\s+/)) {
      const eq = tok.indexOf("=");
      if (eq > 0) meta[tok.slice(0, eq)] = tok.slice(eq + 1);
    }
  }
  const body = lines.filter((l) => l.length > 0 && !l.startsWith("#")).join("\n");
  const parsed = Papa.parse<Record<string, number | string>>(body, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`failed to parse ${path}: ${parsed.errors[0].message}`);
  }
  const columns: Record<string, (number | string)[]> = {};
  for (const field of parsed.meta.fields ?? []) {
    columns[field] = parsed.data.map((row) => row[field]);
  }
  return { columns, meta, rows: parsed.data.length };
}

export function requireColumns(
  table: FuplabTable,
  required: string[],
  path: string,
): void {
  const missing = required.filter((c) => !(c in table.columns));
  if (missing.length > 0) throw new SchemaError(missing, path);
}

export function numericColumn(table: FuplabTable, name: string): number[] {
  return table.columns[name].map((v) =>
    typeof v === "number" ? v : parseFloat(String(v)),
  );
}
