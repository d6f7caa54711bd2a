/**
 * Deterministic SVG line figures over harness CSV data.
 *
 * The renderer never recomputes statistics: every plotted y value is copied
 * from the CSV, and each series element carries the raw values in a data-y
 * attribute so tests can assert sum(plotted) == sum(column).
 */

import { K95Row, SweepRow, parseK95Csv, parseSweepCsv } from "./csv.js";

export type FigureKind = "success_vs_k" | "error_vs_k" | "runtime_vs_k" | "k95_vs_l";

export interface FigureSpec {
  kind: FigureKind;
  series: string[];
  title?: string;
  xlabel?: string;
  ylabel?: string;
}

export interface RenderResult {
  svg: string;
  warnings: string[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 24, top: 44, bottom: 52 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
];

const Y_FIELDS: Record<FigureKind, { field: string; label: string; xlabel: string }> = {
  success_vs_k: { field: "success_rate", label: "success rate", xlabel: "sparsity k" },
  error_vs_k: { field: "mean_l2_err", label: "mean spectral-norm error", xlabel: "sparsity k" },
  runtime_vs_k: { field: "mean_runtime_ms", label: "mean runtime (ms)", xlabel: "sparsity k" },
  k95_vs_l: { field: "k95", label: "k at 95% success", xlabel: "measurement vectors l" },
};

interface Point {
  x: number;
  y: number;
}

function px(v: number): string {
  return v.toFixed(2);
}

function escape(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count);
  return out;
}

class Scale {
  constructor(
    private readonly lo: number,
    private readonly hi: number,
    private readonly a: number,
    private readonly b: number,
  ) {}

  map(v: number): number {
    if (this.hi === this.lo) return (this.a + this.b) / 2;
    return this.a + ((v - this.lo) / (this.hi - this.lo)) * (this.b - this.a);
  }
}

function seriesPoints(
  kind: FigureKind,
  rows: Array<SweepRow | K95Row>,
  algo: string,
): Point[] {
  const field = Y_FIELDS[kind].field;
  const xField = kind === "k95_vs_l" ? "l" : "k";
  return rows
    .filter((r) => r.algo === algo)
    .map((r) => {
      const rec = r as unknown as Record<string, number>;
      return { x: rec[xField], y: rec[field] };
    })
    .filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y))
    .sort((a, b) => a.x - b.x);
}

function polyline(points: Point[], sx: Scale, sy: Scale, color: string): string {
  const coords = points.map((p) => `${px(sx.map(p.x))},${px(sy.map(p.y))}`).join(" ");
  const dots = points
    .map((p) => `<circle cx="${px(sx.map(p.x))}" cy="${px(sy.map(p.y))}" r="3" fill="${color}"/>`)
    .join("");
  return `<polyline fill="none" stroke="${color}" stroke-width="1.8" points="${coords}"/>${dots}`;
}

export function render(spec: FigureSpec, csvText: string): RenderResult {
  const warnings: string[] = [];
  const rows: Array<SweepRow | K95Row> =
    spec.kind === "k95_vs_l" ? parseK95Csv(csvText) : parseSweepCsv(csvText);

  const present = [...new Set(rows.map((r) => r.algo))];
  const series = spec.series.length > 0 ? spec.series : present;
  if (rows.length === 0) {
    warnings.push("CSV has a header but no data rows; rendering empty axes");
  } else {
    for (const algo of series) {
      if (!present.includes(algo)) {
        throw new Error(`requested series ${JSON.stringify(algo)} not present in the CSV`);
      }
    }
  }

  const perSeries = series.map((algo) => ({ algo, points: seriesPoints(spec.kind, rows, algo) }));
  const allPoints = perSeries.flatMap((s) => s.points);

  // overlays for the k95 figure, computed from the CSV's m and l columns
  const overlays: Array<{ name: string; points: Point[]; dash: string }> = [];
  if (spec.kind === "k95_vs_l" && rows.length > 0) {
    const ls = [...new Set(rows.map((r) => r.l))].sort((a, b) => a - b);
    const m = (rows[0] as K95Row).m;
    overlays.push({
      name: "minimum-m curve (m+l-1)/2",
      points: ls.map((l) => ({ x: l, y: (m + l - 1) / 2 })),
      dash: "6 3",
    });
    overlays.push({
      name: "k+1 bound (m-1)",
      points: ls.map((l) => ({ x: l, y: m - 1 })),
      dash: "2 3",
    });
  }
  const overlayPoints = overlays.flatMap((o) => o.points);

  const xs = [...allPoints, ...overlayPoints].map((p) => p.x);
  const ys = [...allPoints, ...overlayPoints].map((p) => p.y);
  const xlo = xs.length ? Math.min(...xs) : 0;
  const xhi = xs.length ? Math.max(...xs) : 1;
  const ylo = 0;
  let yhi = ys.length ? Math.max(...ys) : 1;
  if (spec.kind === "success_vs_k") yhi = Math.max(yhi, 1);
  if (yhi === ylo) yhi = 1;

  const sx = new Scale(xlo, xhi, MARGIN.left, WIDTH - MARGIN.right);
  const sy = new Scale(ylo, yhi * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  const title = spec.title ?? `${spec.kind} — ${series.join(", ")}`;
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${escape(title)}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = HEIGHT - MARGIN.bottom;
  parts.push(`<g class="axes" stroke="#333">`);
  parts.push(`<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${WIDTH - MARGIN.right}" y2="${y0}"/>`);
  parts.push(`</g>`);
  parts.push(`<g class="ticks" fill="#333" stroke="none">`);
  for (const t of ticks(xlo, xhi, 6)) {
    const cx = sx.map(t);
    parts.push(
      `<text x="${px(cx)}" y="${y0 + 18}" text-anchor="middle">${px(t).replace(/\.00$/, "")}</text>`,
    );
  }
  for (const t of ticks(ylo, yhi, 5)) {
    const cy = sy.map(t);
    parts.push(
      `<text x="${x0 - 8}" y="${px(cy + 4)}" text-anchor="end">${Number(t.toPrecision(3))}</text>`,
    );
  }
  parts.push(`</g>`);

  const xlabel = spec.xlabel ?? Y_FIELDS[spec.kind].xlabel;
  const ylabel = spec.ylabel ?? Y_FIELDS[spec.kind].label;
  parts.push(
    `<text x="${(x0 + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 12}" text-anchor="middle">` +
    `${escape(xlabel)}</text>`,
  );
  parts.push(
    `<text x="16" y="${(MARGIN.top + y0) / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 16 ${(MARGIN.top + y0) / 2})">${escape(ylabel)}</text>`,
  );

  for (const overlay of overlays) {
    const coords = overlay.points
      .map((p) => `${px(sx.map(p.x))},${px(sy.map(p.y))}`)
      .join(" ");
    parts.push(
      `<g class="overlay" data-name="${escape(overlay.name)}" ` +
      `data-y="${overlay.points.map((p) => p.y).join(" ")}">` +
      `<polyline fill="none" stroke="#555" stroke-dasharray="${overlay.dash}" ` +
      `points="${coords}"/></g>`,
    );
  }

  perSeries.forEach(({ algo, points }, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    parts.push(
      `<g class="series" data-algo="${escape(algo)}" ` +
      `data-y="${points.map((p) => p.y).join(" ")}">` +
      (points.length ? polyline(points, sx, sy, color) : "") +
      `</g>`,
    );
  });

  // legend
  parts.push(`<g class="legend">`);
  perSeries.forEach(({ algo }, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const ly = MARGIN.top + 8 + idx * 18;
    const lx = WIDTH - MARGIN.right - 150;
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${lx + 28}" y="${ly + 4}">${escape(algo)}</text>`);
  });
  overlays.forEach((overlay, idx) => {
    const ly = MARGIN.top + 8 + (perSeries.length + idx) * 18;
    const lx = WIDTH - MARGIN.right - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="#555" ` +
      `stroke-dasharray="${overlay.dash}"/>`,
    );
    parts.push(`<text x="${lx + 28}" y="${ly + 4}" font-size="10">${escape(overlay.name)}</text>`);
  });
  parts.push(`</g>`);

  parts.push(`</svg>`);
  return { svg: parts.join("\n") + "\n", warnings };
}
