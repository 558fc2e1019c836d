#!/usr/bin/env node
/**
 * Render a fuplab CSV into an SVG figure:
 *
 *   fuplab-render --kind scatter-cloud --input cloud.csv --output cloud.svg
 *   fuplab-render --kind alpha-curve --input k6.csv --input k8.csv -o curve.svg
 *
 * Stateless file-to-file transform; all math lives in the Python side.
 */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { FigureKind, render } from "./figures.js";
import { SchemaError } from "./csv.js";

const KINDS: FigureKind[] = [
  "scatter-cloud",
  "alpha-curve",
  "fourier-envelope",
  "loglog-energy",
  "interval-tree",
];

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", { choices: KINDS, demandOption: true, type: "string" })
    .option("input", { type: "string", array: true, demandOption: true })
    .option("output", { alias: "o", type: "string", demandOption: true })
    .option("ref-curves", { type: "boolean", default: true })
    .strict()
    .parseSync();
  try {
    const svg = render({
      kind: args.kind as FigureKind,
      inputs: args.input as string[],
      output: args.output,
      refCurves: args["ref-curves"],
    });
    writeFileSync(args.output, svg);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(JSON.stringify({ error: "SchemaError", missing: err.missing, message: err.message }));
      return 2;
    }
    console.error(JSON.stringify({ error: "Error", message: String(err) }));
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
