/** Sequential colormap for heatmaps (piecewise-linear viridis-like ramp). */

import { Color } from "./scene";

const ANCHORS: Array<[number, Color]> = [
  [0.0, { r: 68, g: 1, b: 84 }],
  [0.25, { r: 59, g: 82, b: 139 }],
  [0.5, { r: 33, g: 145, b: 140 }],
  [0.75, { r: 94, g: 201, b: 98 }],
  [1.0, { r: 253, g: 231, b: 37 }],
];

export function colormap(t: number): Color {
  const x = Math.min(1, Math.max(0, t));
  for (let i = 1; i < ANCHORS.length; i++) {
    const [x1, c1] = ANCHORS[i];
    if (x <= x1) {
      const [x0, c0] = ANCHORS[i - 1];
      const u = (x - x0) / (x1 - x0);
      return {
        r: Math.round(c0.r + u * (c1.r - c0.r)),
        g: Math.round(c0.g + u * (c1.g - c0.g)),
        b: Math.round(c0.b + u * (c1.b - c0.b)),
      };
    }
  }
  return ANCHORS[ANCHORS.length - 1][1];
}
