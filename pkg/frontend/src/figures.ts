/**
 * Figure renderers: each consumes fuplab CSV table(s) and emits an SVG
 * string. Data objects carry class="data-point" / "data-segment" so tests
 * can count them against input rows; reference curves carry
 * class="ref-curve" with stable ids.
 */

import {
  FuplabTable,
  numericColumn,
  readTable,
  requireColumns,
} from "./csv.js";
import {
  frame,
  linearScale,
  logScale,
  pad,
  polyline,
  svgDocument,
  tag,
} from "./svg.js";

export type FigureKind =
  | "scatter-cloud"
  | "alpha-curve"
  | "fourier-envelope"
  | "loglog-energy"
  | "interval-tree";

export interface PlotSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  refCurves: boolean;
}

const W = 800;
const H = 600;
const M = 60;

function axisLabels(xLab: string, yLab: string): string[] {
  return [
    tag("text", { x: W / 2, y: H - 15, "text-anchor": "middle", "font-size": "14" }, [], xLab),
    tag(
      "text",
      { x: 18, y: H / 2, "text-anchor": "middle", "font-size": "14", transform: `rotate(-90 18 ${H / 2})` },
      [],
      yLab,
    ),
  ];
}

export function renderScatterCloud(tables: FuplabTable[], refCurves: boolean, paths: string[]): string {
  tables.forEach((t, i) => requireColumns(t, ["delta", "beta_k"], paths[i]));
  const deltas = tables.flatMap((t) => numericColumn(t, "delta"));
  const betas = tables.flatMap((t) => numericColumn(t, "beta_k"));
  const sx = linearScale(0, 1, M, W - M);
  const [bLo, bHi] = pad([...betas, 0, 0.5]);
  const sy = linearScale(bLo, bHi, H - M, M);
  const children = [frame(W, H, M)];
  if (refCurves) {
    const grid = Array.from({ length: 201 }, (_, i) => i / 200);
    children.push(
      polyline(
        grid.map(sx),
        grid.map((d) => sy(Math.max(0, 0.5 - d))),
        { class: "ref-curve", id: "ref-basic", stroke: "#000000", "stroke-width": "1.5" },
      ),
      polyline(
        grid.map(sx),
        grid.map((d) => sy((1 - d) / 2)),
        {
          class: "ref-curve",
          id: "ref-conjectured",
          stroke: "#555555",
          "stroke-width": "1.5",
          "stroke-dasharray": "6 4",
        },
      ),
    );
  }
  deltas.forEach((d, i) => {
    children.push(
      tag("circle", { class: "data-point", cx: sx(d), cy: sy(betas[i]), r: 2.5, fill: "#1a5fb4" }),
    );
  });
  children.push(...axisLabels("delta", "beta"));
  return svgDocument(W, H, children);
}

export function renderAlphaCurve(tables: FuplabTable[], _refCurves: boolean, paths: string[]): string {
  tables.forEach((t, i) => requireColumns(t, ["alpha", "beta_tilde"], paths[i]));
  const alphas = tables.flatMap((t) => numericColumn(t, "alpha"));
  const betas = tables.flatMap((t) => numericColumn(t, "beta_tilde"));
  const [aLo, aHi] = pad(alphas, 0.02);
  const [bLo, bHi] = pad(betas);
  const sx = linearScale(aLo, aHi, M, W - M);
  const sy = linearScale(bLo, bHi, H - M, M);
  const palette = ["#1a5fb4", "#c01c28", "#26a269", "#e66100"];
  const children = [frame(W, H, M)];
  tables.forEach((t, ti) => {
    const a = numericColumn(t, "alpha");
    const b = numericColumn(t, "beta_tilde");
    children.push(
      polyline(a.map(sx), b.map(sy), {
        class: "data-series",
        stroke: palette[ti % palette.length],
        "stroke-width": "1.5",
      }),
    );
    a.forEach((x, i) =>
      children.push(
        tag("circle", { class: "data-point", cx: sx(x), cy: sy(b[i]), r: 2, fill: palette[ti % palette.length] }),
      ),
    );
  });
  children.push(...axisLabels("alpha", "beta~"));
  return svgDocument(W, H, children);
}

export function renderFourierEnvelope(tables: FuplabTable[], _refCurves: boolean, paths: string[]): string {
  const children = [frame(W, H, M)];
  const palette = ["#1a5fb4", "#c01c28", "#26a269"];
  const allXi: number[] = [];
  const allVal: number[] = [];
  const series: { xi: number[]; val: number[] }[] = [];
  tables.forEach((t, i) => {
    requireColumns(t, ["xi"], paths[i]);
    const col = "envelope" in t.columns ? "envelope" : "abs";
    requireColumns(t, [col], paths[i]);
    const xi = numericColumn(t, "xi");
    const val = numericColumn(t, col);
    series.push({ xi, val });
    allXi.push(...xi.filter((x) => x > 0));
    allVal.push(...val);
  });
  const sx = logScale(Math.min(...allXi), Math.max(...allXi), M, W - M);
  const [vLo, vHi] = pad(allVal);
  const sy = linearScale(Math.max(vLo, 0), vHi, H - M, M);
  series.forEach((s, ti) => {
    const keep = s.xi.map((x, i) => [x, s.val[i]]).filter(([x]) => x > 0);
    children.push(
      polyline(
        keep.map(([x]) => sx(x)),
        keep.map(([, v]) => sy(v)),
        { class: "data-series", stroke: palette[ti % palette.length], "stroke-width": "1" },
      ),
    );
    keep.forEach(([x, v]) =>
      children.push(
        tag("circle", { class: "data-point", cx: sx(x), cy: sy(v), r: 1.5, fill: palette[ti % palette.length] }),
      ),
    );
  });
  children.push(...axisLabels("xi (log)", "|mu-hat| envelope"));
  return svgDocument(W, H, children);
}

export function renderLoglogEnergy(tables: FuplabTable[], refCurves: boolean, paths: string[]): string {
  tables.forEach((t, i) => requireColumns(t, ["h", "mass"], paths[i]));
  const palette = ["#1a5fb4", "#c01c28"];
  const allH = tables.flatMap((t) => numericColumn(t, "h"));
  const allMass = tables.flatMap((t) => numericColumn(t, "mass")).filter((m) => m > 0);
  // reference slopes delta and 2 delta from the CSV header, anchored at
  // each table's largest-h data point; computed first so the y scale can
  // cover the (upper-bound) lines too
  interface Ref {
    id: string;
    color: string;
    hGrid: [number, number];
    vals: [number, number];
  }
  const refs: Ref[] = [];
  if (refCurves) {
    tables.forEach((t) => {
      const delta = parseFloat(t.meta["delta"] ?? "NaN");
      if (!isFinite(delta)) return;
      const h = numericColumn(t, "h");
      const mass = numericColumn(t, "mass");
      const iMax = h.indexOf(Math.max(...h));
      const hMin = Math.min(...h);
      for (const [slope, id, color] of [
        [delta, "ref-h-delta", "#c01c28"],
        [2 * delta, "ref-h-2delta", "#1c71d8"],
      ] as [number, string, string][]) {
        refs.push({
          id,
          color,
          hGrid: [hMin, h[iMax]],
          vals: [mass[iMax] * Math.pow(hMin / h[iMax], slope), mass[iMax]],
        });
      }
    });
  }
  const yVals = [...allMass, ...refs.flatMap((r) => r.vals)].filter((v) => v > 0);
  const sx = logScale(Math.min(...allH), Math.max(...allH), M, W - M);
  const sy = logScale(Math.min(...yVals), Math.max(...yVals), H - M, M);
  const children = [frame(W, H, M)];
  for (const r of refs) {
    children.push(
      polyline(r.hGrid.map(sx), r.vals.map(sy), {
        class: "ref-curve",
        id: r.id,
        stroke: r.color,
        "stroke-width": "1.5",
      }),
    );
  }
  tables.forEach((t, ti) => {
    const h = numericColumn(t, "h");
    const mass = numericColumn(t, "mass");
    h.forEach((x, i) => {
      if (mass[i] > 0) {
        children.push(
          tag("circle", { class: "data-point", cx: sx(x), cy: sy(mass[i]), r: 3, fill: palette[ti % palette.length] }),
        );
      }
    });
  });
  children.push(...axisLabels("h (log)", "pair-sum band mass (log)"));
  return svgDocument(W, H, children);
}

export function renderIntervalTree(tables: FuplabTable[], _refCurves: boolean, paths: string[]): string {
  tables.forEach((t, i) => requireColumns(t, ["word", "left", "right"], paths[i]));
  // rows for depth 1..n derived from word prefixes: each prefix group is
  // drawn as the hull of its descendants (exact for the deepest row)
  const t = tables[0];
  const words = t.columns["word"].map(String);
  const left = numericColumn(t, "left");
  const right = numericColumn(t, "right");
  const depth = Math.max(...words.map((w) => w.length));
  const [xLo, xHi] = pad([...left, ...right], 0.02);
  const sx = linearScale(xLo, xHi, M, W - M);
  const children = [frame(W, H, M)];
  const rowGap = (H - 2 * M) / (depth + 1);
  for (let level = 1; level <= depth; level++) {
    const groups = new Map<string, [number, number]>();
    words.forEach((w, i) => {
      const key = w.slice(0, level);
      const cur = groups.get(key);
      groups.set(key, cur ? [Math.min(cur[0], left[i]), Math.max(cur[1], right[i])] : [left[i], right[i]]);
    });
    const y = M + rowGap * level;
    const keys = Array.from(groups.keys()).sort();
    for (const key of keys) {
      const [a, b] = groups.get(key)!;
      children.push(
        tag("line", {
          class: "data-segment",
          "data-level": String(level),
          x1: sx(a),
          y1: y,
          x2: sx(b),
          y2: y,
          stroke: "#1a5fb4",
          "stroke-width": "6",
          "stroke-linecap": "butt",
        }),
      );
    }
  }
  children.push(...axisLabels("limit set", "refinement depth"));
  return svgDocument(W, H, children);
}

const RENDERERS: Record<FigureKind, (t: FuplabTable[], r: boolean, p: string[]) => string> = {
  "scatter-cloud": renderScatterCloud,
  "alpha-curve": renderAlphaCurve,
  "fourier-envelope": renderFourierEnvelope,
  "loglog-energy": renderLoglogEnergy,
  "interval-tree": renderIntervalTree,
};

export function render(spec: PlotSpec): string {
  const tables = spec.inputs.map(readTable);
  const renderer = RENDERERS[spec.kind];
  if (!renderer) throw new Error(`unknown figure kind ${spec.kind}`);
  return renderer(tables, spec.refCurves, spec.inputs);
}
