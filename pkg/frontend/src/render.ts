/**
 * Deterministic SVG renderer for BER-vs-sweep curves.
 *
 * One line per (scheme, node): relay curves dashed, destination curves
 * solid, confidence whiskers at every point, log-scale BER axis with a
 * 1/bits floor so zero-error cells stay finite. No timestamps, no
 * randomness: identical input yields an identical file.
 */

import { Series, XColumn } from "./series";

const WIDTH = 840;
const HEIGHT = 560;
const MARGIN = { top: 28, right: 220, bottom: 52, left: 76 };

const PALETTE: Record<string, string> = {
  ibf: "#1f77b4",
  gebf: "#d62728",
  an: "#2ca02c",
  dj: "#9467bd",
};
const FALLBACK_COLORS = ["#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"];

export interface RenderOptions {
  xColumn: XColumn;
  logY: boolean;
  title?: string;
}

const fmt = (value: number): string => value.toFixed(2);

const fmtTick = (value: number): string => {
  if (value >= 0.01 && value < 10_000) {
    return String(Number(value.toPrecision(3)));
  }
  const exp = Math.round(Math.log10(value));
  return `1e${exp}`;
};

function buildYScale(series: Series[], logY: boolean) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      lo = Math.min(lo, p.yPlotted);
      hi = Math.max(hi, p.yPlotted + (logY ? 0 : p.ci99));
    }
  }
  if (logY) {
    const decLo = Math.floor(Math.log10(lo));
    const decHi = Math.ceil(Math.log10(Math.max(hi, lo * 1.0001)));
    const y0 = MARGIN.top + plotHeight();
    const scale = (v: number) =>
      y0 - ((Math.log10(v) - decLo) / (decHi - decLo || 1)) * plotHeight();
    const ticks: number[] = [];
    for (let d = decLo; d <= decHi; d++) ticks.push(10 ** d);
    return { scale, ticks, min: 10 ** decLo };
  }
  const span = hi - lo || 1;
  const y0 = MARGIN.top + plotHeight();
  const scale = (v: number) => y0 - ((v - lo) / span) * plotHeight();
  const ticks = [lo, lo + span / 4, lo + span / 2, lo + (3 * span) / 4, hi];
  return { scale, ticks, min: lo };
}

const plotWidth = () => WIDTH - MARGIN.left - MARGIN.right;
const plotHeight = () => HEIGHT - MARGIN.top - MARGIN.bottom;

function buildXScale(series: Series[]) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      lo = Math.min(lo, p.x);
      hi = Math.max(hi, p.x);
    }
  }
  const span = hi - lo || 1;
  const scale = (v: number) => MARGIN.left + ((v - lo) / span) * plotWidth();
  const tickCount = 6;
  const ticks: number[] = [];
  for (let i = 0; i <= tickCount; i++) ticks.push(lo + (span * i) / tickCount);
  return { scale, ticks };
}

function colorFor(scheme: string, index: number): string {
  return PALETTE[scheme] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

export function renderSvg(series: Series[], options: RenderOptions): string {
  if (series.length === 0) {
    throw new Error("nothing to render");
  }
  const xs = buildXScale(series);
  const ys = buildYScale(series, options.logY);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
  );
  if (options.title) {
    parts.push(
      `<text x="${MARGIN.left}" y="18" font-size="14" fill="#222">${options.title}</text>`,
    );
  }

  // frame and grid
  const x0 = MARGIN.left;
  const x1 = MARGIN.left + plotWidth();
  const yTop = MARGIN.top;
  const yBot = MARGIN.top + plotHeight();
  for (const tick of ys.ticks) {
    const y = ys.scale(tick);
    parts.push(
      `<line x1="${x0}" y1="${fmt(y)}" x2="${x1}" y2="${fmt(y)}" stroke="#ddd" stroke-width="1"/>`,
      `<text x="${x0 - 8}" y="${fmt(y + 4)}" font-size="11" fill="#444" text-anchor="end">${fmtTick(tick)}</text>`,
    );
  }
  for (const tick of xs.ticks) {
    const x = xs.scale(tick);
    parts.push(
      `<line x1="${fmt(x)}" y1="${yTop}" x2="${fmt(x)}" y2="${yBot}" stroke="#eee" stroke-width="1"/>`,
      `<text x="${fmt(x)}" y="${yBot + 18}" font-size="11" fill="#444" text-anchor="middle">${fmtTick(tick)}</text>`,
    );
  }
  parts.push(
    `<rect x="${x0}" y="${yTop}" width="${plotWidth()}" height="${plotHeight()}" fill="none" stroke="#888"/>`,
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" font-size="12" fill="#222" text-anchor="middle">${options.xColumn}</text>`,
    `<text x="20" y="${(yTop + yBot) / 2}" font-size="12" fill="#222" text-anchor="middle" transform="rotate(-90 20 ${(yTop + yBot) / 2})">BER</text>`,
  );

  // curves
  series.forEach((s, idx) => {
    const color = colorFor(s.scheme, idx);
    const dash = s.node === "relay" ? ' stroke-dasharray="7 4"' : "";
    const coords = s.points.map((p) => ({
      x: xs.scale(p.x),
      y: ys.scale(p.yPlotted),
      lo: ys.scale(Math.max(p.yPlotted - p.ci99, ys.min)),
      hi: ys.scale(Math.max(p.yPlotted + p.ci99, ys.min)),
    }));
    for (const c of coords) {
      parts.push(
        `<line x1="${fmt(c.x)}" y1="${fmt(c.lo)}" x2="${fmt(c.x)}" y2="${fmt(c.hi)}" stroke="${color}" stroke-width="1"/>`,
      );
    }
    if (coords.length > 1) {
      const path = coords.map((c) => `${fmt(c.x)},${fmt(c.y)}`).join(" ");
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`,
      );
    }
    for (const c of coords) {
      parts.push(
        `<circle cx="${fmt(c.x)}" cy="${fmt(c.y)}" r="3" fill="${color}"/>`,
      );
    }
  });

  // legend
  const legendX = x1 + 16;
  series.forEach((s, idx) => {
    const color = colorFor(s.scheme, idx);
    const y = yTop + 14 + idx * 20;
    const dash = s.node === "relay" ? ' stroke-dasharray="7 4"' : "";
    parts.push(
      `<line x1="${legendX}" y1="${y}" x2="${legendX + 28}" y2="${y}" stroke="${color}" stroke-width="1.8"${dash}/>`,
      `<text x="${legendX + 34}" y="${y + 4}" font-size="12" fill="#222">${s.scheme} ${s.node}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
