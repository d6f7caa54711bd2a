#!/usr/bin/env node
/** figkit render --kind success_vs_k --csv results.csv --out fig.svg */

import { readFileSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { FigureKind, render } from "./figure.js";

const KINDS: FigureKind[] = ["success_vs_k", "error_vs_k", "runtime_vs_k", "k95_vs_l"];

function usage(): string {
  return [
    "usage: figkit render --kind <kind> --csv <file> --out <file.svg>",
    "                     [--series a,b,c] [--title t] [--xlabel x] [--ylabel y]",
    `kinds: ${KINDS.join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    process.stderr.write(usage() + "\n");
    return argv.length === 0 ? 1 : 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        kind: { type: "string" },
        csv: { type: "string" },
        out: { type: "string" },
        series: { type: "string", default: "" },
        title: { type: "string" },
        xlabel: { type: "string" },
        ylabel: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${usage()}\n`);
    return 2;
  }
  const { kind, csv, out, series, title, xlabel, ylabel } = parsed.values;
  if (!kind || !csv || !out || !KINDS.includes(kind as FigureKind)) {
    process.stderr.write(usage() + "\n");
    return 2;
  }
  try {
    const text = readFileSync(csv, "utf-8");
    const result = render(
      {
        kind: kind as FigureKind,
        series: (series as string).split(",").filter((s) => s.length > 0),
        title,
        xlabel,
        ylabel,
      },
      text,
    );
    for (const w of result.warnings) process.stderr.write(`warning: ${w}\n`);
    writeFileSync(out, result.svg, "utf-8");
    process.stdout.write(`wrote ${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exitCode = main(process.argv.slice(2));
}
