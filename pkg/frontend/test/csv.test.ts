import { describe, expect, it } from "vitest";

import { COLUMNS, parseCsv } from "../src/csv.js";

const HEADER = COLUMNS.join(",");

function row(over: Record<string, string> = {}): string {
  const base: Record<string, string> = {
    label: "run-a", K: "601", R: "500", b: "8", f: "4", decoder: "plus2",
    rber: "0.004", snr_db: "6.65", frames: "1000", failures: "12",
    fer: "0.012", mean_iters: "1.5", miscorrections: "0", seed: "7",
  };
  return COLUMNS.map((c) => over[c] ?? base[c]).join(",");
}

describe("parseCsv", () => {
  it("parses well-formed rows", () => {
    const rows = parseCsv([HEADER, row(), row({ decoder: "unique", fer: "0.05" })].join("\n"));
    expect(rows).toHaveLength(2);
    expect(rows[0].label).toBe("run-a");
    expect(rows[0].rber).toBeCloseTo(0.004);
    expect(rows[1].decoder).toBe("unique");
    expect(rows[1].fer).toBeCloseTo(0.05);
    expect(rows[0].frames).toBe(1000);
  });

  it("accepts a trailing newline and a header-only file", () => {
    expect(parseCsv(HEADER + "\n")).toHaveLength(0);
    expect(parseCsv([HEADER, row(), ""].join("\n"))).toHaveLength(1);
  });

  it("reads the clean-channel infinite SNR", () => {
    const rows = parseCsv([HEADER, row({ rber: "0.0", snr_db: "inf", fer: "0.0" })].join("\n"));
    expect(rows[0].snr_db).toBe(Infinity);
    expect(rows[0].fer).toBe(0);
  });

  it("rejects a missing column", () => {
    const short = COLUMNS.slice(0, -1).join(",");
    expect(() => parseCsv([short, row()].join("\n"), "x.csv")).toThrow(/header must be exactly/);
  });

  it("rejects a renamed column", () => {
    const bad = HEADER.replace("mean_iters", "avg_iters");
    expect(() => parseCsv([bad, row()].join("\n"))).toThrow(/header/);
  });

  it("rejects short rows and non-numeric cells", () => {
    expect(() => parseCsv([HEADER, "a,b,c"].join("\n"), "y.csv")).toThrow(/y.csv:2/);
    expect(() => parseCsv([HEADER, row({ fer: "oops" })].join("\n"))).toThrow(/column fer/);
    expect(() => parseCsv("")).toThrow(/empty/);
  });
});
