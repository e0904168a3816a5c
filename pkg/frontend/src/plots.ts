/** Scene builders: one per result table.  Line plots carry their data/pixel
 * scales in the returned value so tests can check where data points land. */

import { colormap } from "./color";
import { Row } from "./csv";
import {
  BLACK,
  Color,
  GREY,
  LinearScale,
  PALETTE,
  Primitive,
  Scene,
  WHITE,
  formatTick,
  linearScale,
  ticks,
} from "./scene";
import { quadFit } from "./quadfit";

export interface BuiltScene {
  scene: Scene;
  xScale: LinearScale;
  yScale: LinearScale;
}

const W = 720;
const H = 480;

interface Frame {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

function axes(
  prims: Primitive[],
  frame: Frame,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
  title: string,
): { x: LinearScale; y: LinearScale } {
  const x = linearScale(xDomain, [frame.left, W - frame.right]);
  const y = linearScale(yDomain, [H - frame.bottom, frame.top]);
  prims.push({
    kind: "rect",
    x: frame.left,
    y: frame.top,
    w: W - frame.right - frame.left,
    h: H - frame.bottom - frame.top,
    fill: { r: 250, g: 250, b: 252 },
  });
  for (const tx of ticks(xDomain[0], xDomain[1], 6)) {
    const px = x.apply(tx);
    prims.push({
      kind: "line",
      x1: px,
      y1: H - frame.bottom,
      x2: px,
      y2: frame.top,
      color: { r: 225, g: 225, b: 230 },
      width: 1,
    });
    prims.push({
      kind: "line",
      x1: px,
      y1: H - frame.bottom,
      x2: px,
      y2: H - frame.bottom + 5,
      color: BLACK,
      width: 1,
    });
    prims.push({
      kind: "text",
      x: px,
      y: H - frame.bottom + 22,
      text: formatTick(tx),
      color: BLACK,
      anchor: "middle",
      size: 13,
    });
  }
  for (const ty of ticks(yDomain[0], yDomain[1], 6)) {
    const py = y.apply(ty);
    prims.push({
      kind: "line",
      x1: frame.left,
      y1: py,
      x2: W - frame.right,
      y2: py,
      color: { r: 225, g: 225, b: 230 },
      width: 1,
    });
    prims.push({
      kind: "line",
      x1: frame.left - 5,
      y1: py,
      x2: frame.left,
      y2: py,
      color: BLACK,
      width: 1,
    });
    prims.push({
      kind: "text",
      x: frame.left - 9,
      y: py + 5,
      text: formatTick(ty),
      color: BLACK,
      anchor: "end",
      size: 13,
    });
  }
  // frame on top of gridlines
  prims.push(
    { kind: "line", x1: frame.left, y1: frame.top, x2: frame.left, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: frame.left, y1: H - frame.bottom, x2: W - frame.right, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: W - frame.right, y1: frame.top, x2: W - frame.right, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: frame.left, y1: frame.top, x2: W - frame.right, y2: frame.top, color: BLACK, width: 1 },
  );
  prims.push({
    kind: "text",
    x: (frame.left + W - frame.right) / 2,
    y: H - 14,
    text: xLabel,
    color: BLACK,
    anchor: "middle",
    size: 14,
  });
  prims.push({
    kind: "text",
    x: frame.left,
    y: frame.top - 18,
    text: yLabel,
    color: BLACK,
    anchor: "start",
    size: 14,
  });
  prims.push({
    kind: "text",
    x: W / 2,
    y: 20,
    text: title,
    color: BLACK,
    anchor: "middle",
    size: 15,
  });
  return { x, y };
}

function legend(
  prims: Primitive[],
  frame: Frame,
  entries: Array<{ label: string; color: Color; dashed?: boolean }>,
): void {
  let yPos = frame.top + 16;
  for (const e of entries) {
    prims.push({
      kind: "line",
      x1: W - frame.right - 150,
      y1: yPos - 4,
      x2: W - frame.right - 118,
      y2: yPos - 4,
      color: e.color,
      width: 3,
      dashed: e.dashed,
    });
    prims.push({
      kind: "text",
      x: W - frame.right - 110,
      y: yPos,
      text: e.label,
      color: BLACK,
      anchor: "start",
      size: 13,
    });
    yPos += 20;
  }
}

function span(values: number[], padFrac = 0.04): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = (hi - lo || Math.abs(hi) || 1) * padFrac;
  return [lo - pad, hi + pad];
}

// ---------------------------------------------------------------------------
// line plots

export function buildFig2a(rows: Row[]): BuiltScene {
  const prims: Primitive[] = [];
  const frame = { left: 80, right: 30, top: 40, bottom: 60 };
  const kappas = rows.map((r) => r.kappa as number);
  const formula = rows.map((r) => r.C_formula as number);
  const { x, y } = axes(
    prims,
    frame,
    span(kappas, 0.02),
    span([...formula, 1.0], 0.03),
    "kappa = dw/alpha",
    "steady concurrence",
    "fig2a: steady concurrence vs detuning ratio",
  );
  const curve: Array<[number, number]> = rows.map((r) => [
    x.apply(r.kappa as number),
    y.apply(r.C_formula as number),
  ]);
  prims.push({ kind: "polyline", points: curve, color: PALETTE[0], width: 2 });
  for (const r of rows) {
    const v = r.C_numeric as number;
    if (Number.isNaN(v)) continue;
    prims.push({
      kind: "circle",
      x: x.apply(r.kappa as number),
      y: y.apply(v),
      radius: 3,
      fill: PALETTE[1],
    });
  }
  legend(prims, frame, [
    { label: "closed form", color: PALETTE[0] },
    { label: "null space", color: PALETTE[1] },
  ]);
  return { scene: { width: W, height: H, background: WHITE, prims }, xScale: x, yScale: y };
}

export function buildFig3(rows: Row[]): BuiltScene {
  const prims: Primitive[] = [];
  const frame = { left: 80, right: 30, top: 40, bottom: 60 };
  const profiles = [...new Set(rows.map((r) => r.profile as string))];
  const { x, y } = axes(
    prims,
    frame,
    span(rows.map((r) => r.t_ms as number), 0.01),
    span([...rows.map((r) => r.concurrence as number), 1.0], 0.03),
    "t (ms)",
    "concurrence",
    "fig3: concurrence under detuning profiles",
  );
  profiles.forEach((profile, i) => {
    const pts: Array<[number, number]> = rows
      .filter((r) => r.profile === profile)
      .map((r) => [x.apply(r.t_ms as number), y.apply(r.concurrence as number)]);
    prims.push({ kind: "polyline", points: pts, color: PALETTE[i % PALETTE.length], width: 2 });
  });
  legend(
    prims,
    frame,
    profiles.map((p, i) => ({ label: p, color: PALETTE[i % PALETTE.length] })),
  );
  return { scene: { width: W, height: H, background: WHITE, prims }, xScale: x, yScale: y };
}

export function buildOffsetFit(rows: Row[]): BuiltScene {
  const prims: Primitive[] = [];
  const frame = { left: 80, right: 30, top: 40, bottom: 60 };
  const profiles = [...new Set(rows.map((r) => r.profile as string))];
  const { x, y } = axes(
    prims,
    frame,
    span(rows.map((r) => r.eta_omega as number), 0.02),
    span(rows.map((r) => r.C_final as number), 0.05),
    "eta_omega",
    "C at 20 ms",
    "offset-fit: late concurrence vs frequency offset",
  );
  const entries: Array<{ label: string; color: Color; dashed?: boolean }> = [];
  profiles.forEach((profile, i) => {
    const sel = rows.filter((r) => r.profile === profile);
    const xs = sel.map((r) => r.eta_omega as number);
    const ys = sel.map((r) => r.C_final as number);
    for (let k = 0; k < xs.length; k++) {
      prims.push({
        kind: "circle",
        x: x.apply(xs[k]),
        y: y.apply(ys[k]),
        radius: 3,
        fill: PALETTE[i % PALETTE.length],
      });
    }
    // overlay: quadratic re-fitted from the plotted points themselves
    const fit = quadFit(xs, ys);
    const lo = Math.min(...xs);
    const hi = Math.max(...xs);
    const curve: Array<[number, number]> = [];
    for (let k = 0; k <= 60; k++) {
      const xv = lo + ((hi - lo) * k) / 60;
      curve.push([x.apply(xv), y.apply(fit.a2 * xv * xv + fit.a1 * xv + fit.a0)]);
    }
    prims.push({
      kind: "polyline",
      points: curve,
      color: PALETTE[i % PALETTE.length],
      width: 2,
      dashed: true,
    });
    entries.push({ label: profile, color: PALETTE[i % PALETTE.length] });
  });
  entries.push({ label: "quadratic fit", color: GREY, dashed: true });
  legend(prims, frame, entries);
  return { scene: { width: W, height: H, background: WHITE, prims }, xScale: x, yScale: y };
}

// ---------------------------------------------------------------------------
// heatmaps

function buildHeatmap(
  rows: Row[],
  xCol: string,
  yCol: string,
  vCol: string,
  xLabel: string,
  yLabel: string,
  title: string,
  filter?: (r: Row) => boolean,
): BuiltScene {
  const sel = filter ? rows.filter(filter) : rows;
  if (sel.length === 0) {
    throw new Error(`no rows to plot for ${title}`);
  }
  const xs = [...new Set(sel.map((r) => r[xCol] as number))].sort((a, b) => a - b);
  const ys = [...new Set(sel.map((r) => r[yCol] as number))].sort((a, b) => a - b);
  const value = new Map<string, number>();
  for (const r of sel) {
    value.set(`${r[xCol]}|${r[yCol]}`, r[vCol] as number);
  }
  const finite = [...value.values()].filter((v) => Number.isFinite(v));
  const vLo = Math.min(...finite);
  const vHi = Math.max(...finite);
  const norm = (v: number) => (vHi === vLo ? 0.5 : (v - vLo) / (vHi - vLo));

  const prims: Primitive[] = [];
  const frame = { left: 90, right: 110, top: 40, bottom: 60 };
  const plotW = W - frame.left - frame.right;
  const plotH = H - frame.top - frame.bottom;
  const cw = plotW / xs.length;
  const ch = plotH / ys.length;
  // cells (y axis increases upward: last row at the top)
  xs.forEach((xv, i) => {
    ys.forEach((yv, j) => {
      const v = value.get(`${xv}|${yv}`);
      const cellColor =
        v === undefined || !Number.isFinite(v) ? { r: 230, g: 230, b: 235 } : colormap(norm(v));
      prims.push({
        kind: "rect",
        x: frame.left + i * cw,
        y: H - frame.bottom - (j + 1) * ch,
        w: cw + 0.5,
        h: ch + 0.5,
        fill: cellColor,
      });
    });
  });
  // categorical tick labels at cell centers
  xs.forEach((xv, i) => {
    if (xs.length > 12 && i % Math.ceil(xs.length / 8) !== 0) return;
    prims.push({
      kind: "text",
      x: frame.left + (i + 0.5) * cw,
      y: H - frame.bottom + 22,
      text: formatTick(xv),
      color: BLACK,
      anchor: "middle",
      size: 13,
    });
  });
  ys.forEach((yv, j) => {
    if (ys.length > 12 && j % Math.ceil(ys.length / 8) !== 0) return;
    prims.push({
      kind: "text",
      x: frame.left - 8,
      y: H - frame.bottom - (j + 0.5) * ch + 5,
      text: formatTick(yv),
      color: BLACK,
      anchor: "end",
      size: 13,
    });
  });
  // frame
  prims.push(
    { kind: "line", x1: frame.left, y1: frame.top, x2: frame.left, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: frame.left, y1: H - frame.bottom, x2: W - frame.right, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: W - frame.right, y1: frame.top, x2: W - frame.right, y2: H - frame.bottom, color: BLACK, width: 1 },
    { kind: "line", x1: frame.left, y1: frame.top, x2: W - frame.right, y2: frame.top, color: BLACK, width: 1 },
  );
  // colorbar
  const cbX = W - frame.right + 25;
  const cbW = 18;
  const steps = 64;
  for (let s = 0; s < steps; s++) {
    prims.push({
      kind: "rect",
      x: cbX,
      y: H - frame.bottom - ((s + 1) * plotH) / steps,
      w: cbW,
      h: plotH / steps + 0.5,
      fill: colormap(s / (steps - 1)),
    });
  }
  prims.push(
    { kind: "text", x: cbX + cbW + 6, y: H - frame.bottom + 5, text: formatTick(vLo), color: BLACK, anchor: "start", size: 13 },
    { kind: "text", x: cbX + cbW + 6, y: frame.top + 10, text: formatTick(vHi), color: BLACK, anchor: "start", size: 13 },
  );
  prims.push(
    { kind: "text", x: (frame.left + W - frame.right) / 2, y: H - 14, text: xLabel, color: BLACK, anchor: "middle", size: 14 },
    { kind: "text", x: frame.left, y: frame.top - 18, text: yLabel, color: BLACK, anchor: "start", size: 14 },
    { kind: "text", x: W / 2, y: 20, text: title, color: BLACK, anchor: "middle", size: 15 },
  );
  const x = linearScale([xs[0], xs[xs.length - 1]], [frame.left + cw / 2, W - frame.right - cw / 2]);
  const y = linearScale([ys[0], ys[ys.length - 1]], [H - frame.bottom - ch / 2, frame.top + ch / 2]);
  return { scene: { width: W, height: H, background: WHITE, prims }, xScale: x, yScale: y };
}

// ---------------------------------------------------------------------------
// dispatch

export function buildScene(table: string, rows: Row[]): BuiltScene {
  switch (table) {
    case "fig2a":
      return buildFig2a(rows);
    case "fig3":
      return buildFig3(rows);
    case "offset-fit":
      return buildOffsetFit(rows);
    case "fig2b":
      return buildHeatmap(
        rows,
        "gamma_over_alpha",
        "kappa",
        "log10_t99_mean",
        "gamma/alpha",
        "kappa",
        "fig2b: log10 t99 (ms)",
      );
    case "fig4":
      return buildHeatmap(
        rows,
        "t_ms",
        "gamma_n_kHz",
        "concurrence",
        "t (ms)",
        "gamma_n (kHz)",
        "fig4: concurrence vs atomic decay (constant profile)",
        (r) => r.profile === "constant",
      );
    case "fig4-exponential":
      return buildHeatmap(
        rows,
        "t_ms",
        "gamma_n_kHz",
        "concurrence",
        "t (ms)",
        "gamma_n (kHz)",
        "fig4: concurrence vs atomic decay (exponential profile)",
        (r) => r.profile === "exponential",
      );
    case "fig5-decay":
      return buildHeatmap(
        rows,
        "t_ms",
        "sweep_value",
        "concurrence",
        "t (ms)",
        "gamma_n (kHz)",
        "fig5: offset profile vs atomic decay",
      );
    case "fig5-asym":
      return buildHeatmap(
        rows,
        "t_ms",
        "sweep_value",
        "concurrence",
        "t (ms)",
        "eta_g",
        "fig5: offset profile vs coupling asymmetry",
      );
    case "fig6":
      return buildHeatmap(
        rows,
        "t_ms",
        "eta_g",
        "concurrence",
        "t (ms)",
        "eta_g",
        "fig6: concurrence vs coupling asymmetry (constant profile)",
        (r) => r.profile === "constant",
      );
    case "fig6-exponential":
      return buildHeatmap(
        rows,
        "t_ms",
        "eta_g",
        "concurrence",
        "t (ms)",
        "eta_g",
        "fig6: concurrence vs coupling asymmetry (exponential profile)",
        (r) => r.profile === "exponential",
      );
    default:
      throw new Error(`no plot defined for table ${table}`);
  }
}
