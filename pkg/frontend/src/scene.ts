/** Renderer-independent description of a figure: a flat list of primitives
 * in pixel coordinates (origin top-left).  Both the SVG writer and the PNG
 * rasterizer consume this, so the two outputs always agree on geometry. */

export interface Color {
  r: number;
  g: number;
  b: number;
}

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: Color }
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      color: Color;
      width: number;
      dashed?: boolean;
    }
  | {
      kind: "polyline";
      points: Array<[number, number]>;
      color: Color;
      width: number;
      dashed?: boolean;
    }
  | { kind: "circle"; x: number; y: number; radius: number; fill: Color }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      color: Color;
      anchor: "start" | "middle" | "end";
      size: number;
    };

export interface Scene {
  width: number;
  height: number;
  background: Color;
  prims: Primitive[];
}

export const BLACK: Color = { r: 20, g: 20, b: 25 };
export const WHITE: Color = { r: 255, g: 255, b: 255 };
export const GREY: Color = { r: 140, g: 140, b: 150 };

/** matplotlib-like categorical palette */
export const PALETTE: Color[] = [
  { r: 31, g: 119, b: 180 },
  { r: 214, g: 39, b: 40 },
  { r: 44, g: 160, b: 44 },
  { r: 148, g: 103, b: 189 },
  { r: 255, g: 127, b: 14 },
  { r: 23, g: 190, b: 207 },
];

export interface LinearScale {
  domain: [number, number];
  range: [number, number];
  apply(value: number): number;
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  return {
    domain,
    range,
    apply: (v: number) => r0 + ((v - d0) / span) * (r1 - r0),
  };
}

/** Round tick positions covering [lo, hi] with a 1/2/5 step. */
export function ticks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, target);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 5, 10]) {
    if (power * mult >= rawStep) {
      step = power * mult;
      break;
    }
  }
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : Number(v.toPrecision(12)));
  }
  return out;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.001 && a < 10000) {
    return Number(v.toPrecision(4)).toString();
  }
  return v.toExponential(1).replace("e+", "e").replace("e-0", "e-").replace("e0", "e");
}
