/** Scene -> RGBA raster.  Simple scanline drawing: axis-aligned rects,
 * thick Bresenham lines, bitmap text.  All operations are integer-exact,
 * so re-rendering the same scene yields identical pixels. */

import { FONT, GLYPH_H, GLYPH_W, UNKNOWN } from "./font5x7";
import { Color, Primitive, Scene } from "./scene";

export class Raster {
  readonly data: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
    background: Color,
  ) {
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[i * 4] = background.r;
      this.data[i * 4 + 1] = background.g;
      this.data[i * 4 + 2] = background.b;
      this.data[i * 4 + 3] = 255;
    }
  }

  set(x: number, y: number, c: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = c.r;
    this.data[i + 1] = c.g;
    this.data[i + 2] = c.b;
    this.data[i + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    const x0 = Math.round(x);
    const y0 = Math.round(y);
    const x1 = Math.round(x + w);
    const y1 = Math.round(y + h);
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) {
        this.set(xx, yy, c);
      }
    }
  }

  /** Bresenham with a square pen of the given width; optional dashing. */
  line(
    x1: number,
    y1: number,
    x2: number,
    y2: number,
    c: Color,
    width = 1,
    dashed = false,
  ): void {
    let x = Math.round(x1);
    let y = Math.round(y1);
    const xe = Math.round(x2);
    const ye = Math.round(y2);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    const half = Math.floor(width / 2);
    let step = 0;
    for (;;) {
      if (!dashed || step % 10 < 6) {
        for (let oy = -half; oy <= half; oy++) {
          for (let ox = -half; ox <= half; ox++) {
            this.set(x + ox, y + oy, c);
          }
        }
      }
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step++;
    }
  }

  /** Bitmap text; scale 2 gives 10x14 px glyphs. (x, y) is the baseline
   * start like SVG; anchor shifts the start position. */
  text(
    x: number,
    y: number,
    s: string,
    c: Color,
    anchor: "start" | "middle" | "end",
    scale = 2,
  ): void {
    const adv = (GLYPH_W + 1) * scale;
    const total = s.length * adv - scale;
    let x0 = Math.round(x);
    if (anchor === "middle") x0 -= Math.round(total / 2);
    if (anchor === "end") x0 -= total;
    const y0 = Math.round(y) - GLYPH_H * scale + scale; // baseline-ish
    for (const ch of s) {
      const glyph = FONT[ch] ?? UNKNOWN;
      for (let row = 0; row < GLYPH_H; row++) {
        for (let col = 0; col < GLYPH_W; col++) {
          if ((glyph[row] >> (GLYPH_W - 1 - col)) & 1) {
            this.fillRect(x0 + col * scale, y0 + row * scale, scale, scale, c);
          }
        }
      }
      x0 += adv;
    }
  }
}

export function sceneToRaster(scene: Scene): Raster {
  const r = new Raster(scene.width, scene.height, scene.background);
  for (const p of scene.prims) {
    drawPrimitive(r, p);
  }
  return r;
}

function drawPrimitive(r: Raster, p: Primitive): void {
  switch (p.kind) {
    case "rect":
      r.fillRect(p.x, p.y, p.w, p.h, p.fill);
      break;
    case "line":
      r.line(p.x1, p.y1, p.x2, p.y2, p.color, p.width, p.dashed);
      break;
    case "polyline":
      for (let i = 1; i < p.points.length; i++) {
        const [ax, ay] = p.points[i - 1];
        const [bx, by] = p.points[i];
        r.line(ax, ay, bx, by, p.color, p.width, p.dashed);
      }
      break;
    case "circle": {
      const rad = Math.max(1, Math.round(p.radius));
      for (let dy = -rad; dy <= rad; dy++) {
        for (let dx = -rad; dx <= rad; dx++) {
          if (dx * dx + dy * dy <= rad * rad) {
            r.set(Math.round(p.x) + dx, Math.round(p.y) + dy, p.fill);
          }
        }
      }
      break;
    }
    case "text":
      r.text(p.x, p.y, p.text, p.color, p.anchor, p.size >= 15 ? 2 : 2);
      break;
  }
}
