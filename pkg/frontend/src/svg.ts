/** Scene -> SVG text.  Pure string building; identical input gives an
 * identical file byte for byte. */

import { Color, Primitive, Scene } from "./scene";

function css(c: Color): string {
  return `rgb(${c.r},${c.g},${c.b})`;
}

function num(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function render(p: Primitive): string {
  switch (p.kind) {
    case "rect":
      return `<rect x="${num(p.x)}" y="${num(p.y)}" width="${num(p.w)}" height="${num(
        p.h,
      )}" fill="${css(p.fill)}"/>`;
    case "line":
      return (
        `<line x1="${num(p.x1)}" y1="${num(p.y1)}" x2="${num(p.x2)}" y2="${num(p.y2)}" ` +
        `stroke="${css(p.color)}" stroke-width="${p.width}"` +
        (p.dashed ? ' stroke-dasharray="6 4"' : "") +
        "/>"
      );
    case "polyline": {
      const pts = p.points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
      return (
        `<polyline points="${pts}" fill="none" stroke="${css(p.color)}" ` +
        `stroke-width="${p.width}"` +
        (p.dashed ? ' stroke-dasharray="6 4"' : "") +
        "/>"
      );
    }
    case "circle":
      return `<circle cx="${num(p.x)}" cy="${num(p.y)}" r="${num(p.radius)}" fill="${css(
        p.fill,
      )}"/>`;
    case "text": {
      const anchor =
        p.anchor === "start" ? "start" : p.anchor === "end" ? "end" : "middle";
      const escaped = p.text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;");
      return (
        `<text x="${num(p.x)}" y="${num(p.y)}" fill="${css(p.color)}" ` +
        `font-family="DejaVu Sans Mono, monospace" font-size="${p.size}" ` +
        `text-anchor="${anchor}">${escaped}</text>`
      );
    }
  }
}

export function sceneToSvg(scene: Scene): string {
  const body = scene.prims.map(render).join("\n  ");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
    `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">\n` +
    `  <rect width="${scene.width}" height="${scene.height}" fill="${css(
      scene.background,
    )}"/>\n  ${body}\n</svg>\n`
  );
}
