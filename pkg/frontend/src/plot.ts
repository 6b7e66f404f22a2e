/**
 * SVG figure builder for error-rate and iteration-count curves.
 *
 * One line per (label, decoder) pair.  Error rates draw on a log y axis;
 * measured-zero points cannot sit on that scale, so they are clamped to
 * the axis floor and drawn with an open marker to stay distinguishable
 * from real measurements.  Output depends only on the input rows.
 */

import type { FerRow } from "./csv.js";

export interface PlotJob {
  xAxis: "rber" | "snr";
  yAxis: "fer" | "iters";
}

interface Point {
  x: number;
  y: number;
  floored: boolean;
}

interface Series {
  name: string;
  color: string;
  points: Point[];
}

const PALETTE = [
  "#2563eb", "#dc2626", "#16a34a", "#9333ea",
  "#ea580c", "#0891b2", "#4b5563", "#ca8a04",
];

const WIDTH = 760;
const HEIGHT = 460;
const MARGIN = { top: 42, right: 210, bottom: 56, left: 78 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

function fmt(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  return String(Number(value.toPrecision(6)));
}

function tickLabel(value: number, log: boolean): string {
  if (log) {
    const exp = Math.round(Math.log10(value));
    return `1e${exp}`;
  }
  return fmt(value);
}

function linearTicks(lo: number, hi: number, want = 6): number[] {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const raw = (hi - lo) / want;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= want) ?? 10 * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function buildSeries(rows: FerRow[], job: PlotJob): Series[] {
  const groups = new Map<string, FerRow[]>();
  for (const row of rows) {
    const key = `${row.label} ${row.decoder}`;
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }
  const names = [...groups.keys()].sort();
  return names.map((name, i) => {
    const pts = groups.get(name)!.map((row) => ({
      x: job.xAxis === "rber" ? row.rber : row.snr_db,
      y: job.yAxis === "fer" ? row.fer : row.mean_iters,
      floored: false,
    }));
    pts.sort((a, b) => a.x - b.x);
    return { name, color: PALETTE[i % PALETTE.length], points: pts };
  });
}

export function render(rows: FerRow[], job: PlotJob): string {
  const series = buildSeries(rows, job);
  if (series.length === 0) {
    throw new Error("no data rows: nothing to plot");
  }
  const all = series.flatMap((s) => s.points);
  if (all.some((p) => !Number.isFinite(p.x))) {
    throw new Error("non-finite x value; the clean-channel row has no finite SNR");
  }
  const log = job.yAxis === "fer";

  let xLo = Math.min(...all.map((p) => p.x));
  let xHi = Math.max(...all.map((p) => p.x));
  if (xLo === xHi) {
    xLo -= xLo ? Math.abs(xLo) * 0.1 : 1;
    xHi += xHi ? Math.abs(xHi) * 0.1 : 1;
  }
  const pad = (xHi - xLo) * 0.05;
  xLo -= pad;
  xHi += pad;

  let yTicks: number[];
  let yLo: number;
  let yHi: number;
  if (log) {
    const positive = all.filter((p) => p.y > 0).map((p) => p.y);
    // zeros clamp one decade under the smallest real measurement
    const loExp = positive.length
      ? Math.floor(Math.log10(Math.min(...positive)))
      : -1;
    const hiExp = positive.length
      ? Math.ceil(Math.log10(Math.max(...positive)))
      : 0;
    const floorExp = all.some((p) => p.y === 0) ? loExp - 1 : loExp;
    yLo = floorExp;
    yHi = Math.max(hiExp, floorExp + 1);
    for (const p of all) {
      if (p.y === 0) {
        p.y = Math.pow(10, floorExp);
        p.floored = true;
      }
    }
    yTicks = [];
    for (let e = floorExp; e <= yHi; e++) yTicks.push(Math.pow(10, e));
  } else {
    const ys = all.map((p) => p.y);
    yLo = Math.min(0, ...ys);
    yHi = Math.max(...ys);
    if (yHi === yLo) yHi = yLo + 1;
    yHi += (yHi - yLo) * 0.08;
    yTicks = linearTicks(yLo, yHi);
  }

  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * PLOT_W;
  const sy = (y: number) => {
    const v = log ? Math.log10(y) : y;
    return MARGIN.top + PLOT_H - ((v - yLo) / (yHi - yLo)) * PLOT_H;
  };

  const xTicks = linearTicks(xLo, xHi);
  const xName = job.xAxis === "rber" ? "raw bit error rate" : "SNR (dB)";
  const yName = job.yAxis === "fer" ? "frame error rate" : "mean iterations";
  const title = job.yAxis === "fer" ? "Frame error rate" : "Mean decoding iterations";

  const parts: string[] = [];
  parts.push(`<?xml version="1.0" encoding="UTF-8"?>`);
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `font-family="Helvetica, Arial, sans-serif" font-size="12">`);
  parts.push(`<rect width="100%" height="100%" fill="white"/>`);
  parts.push(`<text x="${MARGIN.left + PLOT_W / 2}" y="24" text-anchor="middle" ` +
    `font-size="16" font-weight="bold">${escapeXml(title)}</text>`);

  for (const tick of xTicks) {
    const x = sx(tick);
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" ` +
      `y2="${MARGIN.top + PLOT_H}" stroke="#e5e7eb"/>`);
    parts.push(`<text x="${fmt(x)}" y="${MARGIN.top + PLOT_H + 18}" ` +
      `text-anchor="middle">${tickLabel(tick, false)}</text>`);
  }
  for (const tick of yTicks) {
    const y = sy(tick);
    parts.push(`<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${MARGIN.left + PLOT_W}" ` +
      `y2="${fmt(y)}" stroke="#e5e7eb"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" ` +
      `text-anchor="end">${tickLabel(tick, log)}</text>`);
  }
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" ` +
    `height="${PLOT_H}" fill="none" stroke="#374151"/>`);
  parts.push(`<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 14}" ` +
    `text-anchor="middle">${escapeXml(xName)}</text>`);
  parts.push(`<text x="20" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 20 ${MARGIN.top + PLOT_H / 2})">${escapeXml(yName)}</text>`);

  for (const s of series) {
    const coords = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`).join(" ");
    parts.push(`<polyline points="${coords}" fill="none" stroke="${s.color}" stroke-width="1.8"/>`);
    for (const p of s.points) {
      const x = fmt(sx(p.x));
      const y = fmt(sy(p.y));
      if (p.floored) {
        parts.push(`<rect class="floor" x="${fmt(sx(p.x) - 4)}" y="${fmt(sy(p.y) - 4)}" ` +
          `width="8" height="8" transform="rotate(45 ${x} ${y})" ` +
          `fill="white" stroke="${s.color}" stroke-width="1.5"/>`);
      } else {
        parts.push(`<circle cx="${x}" cy="${y}" r="3.5" fill="${s.color}"/>`);
      }
    }
  }

  let ly = MARGIN.top + 8;
  const lx = MARGIN.left + PLOT_W + 16;
  for (const s of series) {
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" ` +
      `stroke="${s.color}" stroke-width="1.8"/>`);
    parts.push(`<circle cx="${lx + 11}" cy="${ly}" r="3.5" fill="${s.color}"/>`);
    parts.push(`<text x="${lx + 28}" y="${ly + 4}">${escapeXml(s.name)}</text>`);
    ly += 20;
  }
  if (all.some((p) => p.floored)) {
    parts.push(`<text x="${lx}" y="${ly + 4}" font-size="10" fill="#4b5563">` +
      `open markers: measured 0, drawn at floor</text>`);
  }

  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}
