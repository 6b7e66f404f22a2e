/**
 * Reader for the simulator's result tables.
 *
 * The schema is fixed: one header row naming exactly the fourteen columns
 * below, then one data row per measured (channel point, decoder) pair.
 * Numeric cells use plain decimal or "inf"/"-inf" (the clean-channel row
 * has an infinite SNR).  Labels never contain commas, so no quoting.
 */

export const COLUMNS = [
  "label", "K", "R", "b", "f", "decoder", "rber", "snr_db", "frames",
  "failures", "fer", "mean_iters", "miscorrections", "seed",
] as const;

export interface FerRow {
  label: string;
  K: number;
  R: number;
  b: number;
  f: number;
  decoder: string;
  rber: number;
  snr_db: number;
  frames: number;
  failures: number;
  fer: number;
  mean_iters: number;
  miscorrections: number;
  seed: number;
}

function parseNumber(cell: string, column: string, where: string): number {
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  const value = Number(cell);
  if (cell === "" || Number.isNaN(value)) {
    throw new Error(`${where}: column ${column} has non-numeric value ${JSON.stringify(cell)}`);
  }
  return value;
}

export function parseCsv(text: string, source = "<csv>"): FerRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: empty file`);
  }
  const header = lines[0].split(",");
  if (header.length !== COLUMNS.length || COLUMNS.some((c, i) => header[i] !== c)) {
    throw new Error(`${source}: header must be exactly "${COLUMNS.join(",")}"`);
  }
  const rows: FerRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    const where = `${source}:${i + 1}`;
    if (cells.length !== COLUMNS.length) {
      throw new Error(`${where}: expected ${COLUMNS.length} cells, got ${cells.length}`);
    }
    rows.push({
      label: cells[0],
      K: parseNumber(cells[1], "K", where),
      R: parseNumber(cells[2], "R", where),
      b: parseNumber(cells[3], "b", where),
      f: parseNumber(cells[4], "f", where),
      decoder: cells[5],
      rber: parseNumber(cells[6], "rber", where),
      snr_db: parseNumber(cells[7], "snr_db", where),
      frames: parseNumber(cells[8], "frames", where),
      failures: parseNumber(cells[9], "failures", where),
      fer: parseNumber(cells[10], "fer", where),
      mean_iters: parseNumber(cells[11], "mean_iters", where),
      miscorrections: parseNumber(cells[12], "miscorrections", where),
      seed: parseNumber(cells[13], "seed", where),
    });
  }
  return rows;
}
