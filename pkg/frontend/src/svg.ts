/**
 * Minimal deterministic SVG builder. Attributes render in insertion
 * order and coordinates are fixed to 4 decimals, so identical inputs
 * produce identical bytes.
 */

export function fmt(x: number): string {
  if (!isFinite(x)) return "0";
  const s = x.toFixed(4);
  return s === "-0.0000" ? "0.0000" : s;
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  const open = parts.length ? `<${name} ${parts}>` : `<${name}>`;
  if (children.length === 0 && text === undefined) {
    return parts.length ? `<${name} ${parts}/>` : `<${name}/>`;
  }
  return `${open}${text ?? ""}${children.join("")}</${name}>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return [
    '<?xml version="1.0" encoding="UTF-8"?>',
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    ...children,
    "</svg>",
    "",
  ].join("\n");
}

export interface Scale {
  (x: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (x) => r0 + ((x - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log(d0);
  const span = Math.log(d1) - l0 || 1;
  return (x) => r0 + ((Math.log(x) - l0) / span) * (r1 - r0);
}

export function pad(values: number[], frac = 0.05): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const m = (hi - lo || 1) * frac;
  return [lo - m, hi + m];
}

export function polyline(
  xs: number[],
  ys: number[],
  attrs: Record<string, string | number>,
): string {
  const points = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
  return tag("polyline", { points, fill: "none", ...attrs });
}

export function frame(width: number, height: number, margin: number): string {
  return tag("rect", {
    x: margin,
    y: margin,
    width: width - 2 * margin,
    height: height - 2 * margin,
    fill: "none",
    stroke: "#222222",
    "stroke-width": "1",
  });
}
