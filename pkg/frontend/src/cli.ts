#!/usr/bin/env node
/**
 * plot --csv <files...> --x {rber,snr} --y {fer,iters} --out <path>
 *
 * Reads one or more simulator CSV files, merges their rows, and writes a
 * single SVG figure.  Inputs are never modified; rerunning with the same
 * files produces an identical figure.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { parseCsv, type FerRow } from "./csv.js";
import { render, type PlotJob } from "./plot.js";

interface Args {
  csv: string[];
  x: "rber" | "snr";
  y: "fer" | "iters";
  out: string;
}

const USAGE = "usage: plot --csv <files...> --x {rber,snr} --y {fer,iters} --out <path>";

export function parseArgs(argv: string[]): Args {
  const csv: string[] = [];
  let x: string | undefined;
  let y: string | undefined;
  let out: string | undefined;
  let i = 0;
  while (i < argv.length) {
    const flag = argv[i];
    if (flag === "--csv") {
      i++;
      while (i < argv.length && !argv[i].startsWith("--")) {
        csv.push(argv[i]);
        i++;
      }
      if (csv.length === 0) throw new Error(`--csv needs at least one path\n${USAGE}`);
    } else if (flag === "--x" || flag === "--y" || flag === "--out") {
      const value = argv[i + 1];
      if (value === undefined) throw new Error(`${flag} needs a value\n${USAGE}`);
      if (flag === "--x") x = value;
      else if (flag === "--y") y = value;
      else out = value;
      i += 2;
    } else {
      throw new Error(`unknown argument ${flag}\n${USAGE}`);
    }
  }
  if (csv.length === 0 || !out) throw new Error(`--csv and --out are required\n${USAGE}`);
  if (x !== "rber" && x !== "snr") throw new Error(`--x must be rber or snr\n${USAGE}`);
  if (y !== "fer" && y !== "iters") throw new Error(`--y must be fer or iters\n${USAGE}`);
  return { csv, x, y, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const rows: FerRow[] = [];
    for (const path of args.csv) {
      rows.push(...parseCsv(readFileSync(path, "utf8"), path));
    }
    const job: PlotJob = { xAxis: args.x, yAxis: args.y };
    writeFileSync(args.out, render(rows, job));
    const series = new Set(rows.map((r) => `${r.label} ${r.decoder}`));
    console.error(`wrote ${args.out}: ${series.size} series, ${rows.length} points`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(main(process.argv.slice(2)));
}
