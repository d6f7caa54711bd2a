/**
 * Parsers for the two harness CSV schemas (sweep rows and k95 rows).
 * Headers are validated exactly; values are plain decimal, no locale.
 */

export const SWEEP_HEADER = [
  "algo", "m", "n", "l", "r", "k", "snr_db", "trials", "successes",
  "success_rate", "mean_l2_err", "mean_runtime_ms", "seed",
];

export const K95_HEADER = ["algo", "m", "n", "l", "r", "k95", "snr_db", "trials", "seed"];

export interface SweepRow {
  algo: string;
  m: number;
  n: number;
  l: number;
  r: number;
  k: number;
  snr_db: number;
  trials: number;
  successes: number;
  success_rate: number;
  mean_l2_err: number;
  mean_runtime_ms: number;
  seed: number;
  mean_frob_err?: number;
}

export interface K95Row {
  algo: string;
  m: number;
  n: number;
  l: number;
  r: number;
  k95: number;
  snr_db: number;
  trials: number;
  seed: number;
}

function parseNumber(text: string): number {
  if (text === "inf") return Infinity;
  if (text === "-inf") return -Infinity;
  const v = Number(text);
  if (text.trim() === "" || Number.isNaN(v) && text !== "nan") {
    throw new Error(`not a number: ${JSON.stringify(text)}`);
  }
  return v;
}

function splitLines(text: string): string[] {
  return text.split("\n").map((ln) => ln.trimEnd()).filter((ln) => ln.length > 0);
}

function checkHeader(got: string[], want: string[], kind: string): void {
  // the sweep schema may carry an extra verbose column at the end
  const base = got.slice(0, want.length);
  if (base.length !== want.length || base.some((c, i) => c !== want[i])) {
    throw new Error(
      `schema mismatch for ${kind} CSV: expected header starting ` +
      `"${want.join(",")}" but got "${got.join(",")}"`,
    );
  }
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new Error("empty file: not a harness CSV");
  const header = lines[0].split(",");
  checkHeader(header, SWEEP_HEADER, "sweep");
  return lines.slice(1).map((ln) => {
    const cells = ln.split(",");
    const row: SweepRow = {
      algo: cells[0],
      m: parseNumber(cells[1]),
      n: parseNumber(cells[2]),
      l: parseNumber(cells[3]),
      r: parseNumber(cells[4]),
      k: parseNumber(cells[5]),
      snr_db: parseNumber(cells[6]),
      trials: parseNumber(cells[7]),
      successes: parseNumber(cells[8]),
      success_rate: parseNumber(cells[9]),
      mean_l2_err: parseNumber(cells[10]),
      mean_runtime_ms: parseNumber(cells[11]),
      seed: parseNumber(cells[12]),
    };
    if (header.length > 13 && cells.length > 13) {
      row.mean_frob_err = parseNumber(cells[13]);
    }
    return row;
  });
}

export function parseK95Csv(text: string): K95Row[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new Error("empty file: not a harness CSV");
  checkHeader(lines[0].split(","), K95_HEADER, "k95");
  return lines.slice(1).map((ln) => {
    const c = ln.split(",");
    return {
      algo: c[0],
      m: parseNumber(c[1]),
      n: parseNumber(c[2]),
      l: parseNumber(c[3]),
      r: parseNumber(c[4]),
      k95: parseNumber(c[5]),
      snr_db: parseNumber(c[6]),
      trials: parseNumber(c[7]),
      seed: parseNumber(c[8]),
    };
  });
}
