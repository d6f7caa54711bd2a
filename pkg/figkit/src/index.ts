export { parseK95Csv, parseSweepCsv, K95_HEADER, SWEEP_HEADER } from "./csv.js";
export type { K95Row, SweepRow } from "./csv.js";
export { render } from "./figure.js";
export type { FigureKind, FigureSpec, RenderResult } from "./figure.js";
