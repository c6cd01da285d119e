/**
 * CLI: render figure-style SVG plots from collatz-abc CSV outputs.
 *
 *   node dist/src/render.js --which fig1 --in misses_fig1.csv --out fig1.svg
 *   node dist/src/render.js --which fig2 --in summary.csv --out fig2.svg \
 *        [--alpha 0.1818 --x0 1000]
 *
 * fig1: miss counts vs C, log y-axis, one curve per jmax.
 * fig2: cumulative counts below x, log-log, three series plus an optional
 *       dashed power-law overlay N = (x/x0)^alpha.
 *
 * Zero counts cannot appear on a log axis and are omitted from the curves.
 */

import { writeFileSync } from "fs";
import { CsvTable, overlayFromComments, readCsv } from "./csv";
import { ChartSpec, linearScale, log10Scale, renderChart, Series } from "./svg";

const FIG1_SCHEMA = "collatz-abc/fig1/1";
const FIG2_SCHEMA = "collatz-abc/fig2/1";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

const FRAME = {
  width: 800,
  height: 600,
  marginLeft: 70,
  marginBottom: 55,
  marginTop: 40,
  marginRight: 30,
};

function positiveExtent(values: number[]): [number, number] {
  const pos = values.filter((v) => v > 0);
  if (pos.length === 0) {
    throw new Error("no positive values to place on a log axis");
  }
  return [Math.min(...pos), Math.max(...pos)];
}

export function renderFig1(table: CsvTable): string {
  const ci = table.columns.indexOf("C");
  const ji = table.columns.indexOf("jmax");
  const ni = table.columns.indexOf("count");
  if (ci < 0 || ji < 0 || ni < 0) {
    throw new Error(`fig1 needs columns C,jmax,count; got ${table.columns}`);
  }
  const jmaxes = [...new Set(table.rows.map((r) => r[ji]))].sort((a, b) => a - b);
  const counts = table.rows.map((r) => r[ni]);
  const [loN, hiN] = positiveExtent(counts);
  const x = linearScale(0, 1, FRAME.marginLeft, FRAME.width - FRAME.marginRight, 0.1);
  const y = log10Scale(
    Math.min(loN, 1),
    Math.max(hiN, 10),
    FRAME.height - FRAME.marginBottom,
    FRAME.marginTop
  );
  const series: Series[] = jmaxes.map((jm, i) => ({
    name: `jmax=${jm}`,
    color: PALETTE[i % PALETTE.length],
    points: table.rows
      .filter((r) => r[ji] === jm && r[ni] > 0)
      .sort((a, b) => a[ci] - b[ci])
      .map((r) => [r[ci], r[ni]] as [number, number]),
  }));
  const spec: ChartSpec = {
    title: "Misses of the entropy lower bound vs C",
    xLabel: "C",
    yLabel: "misses (log)",
    x,
    y,
    series,
    ...FRAME,
  };
  return renderChart(spec);
}

export function renderFig2(
  table: CsvTable,
  overlay?: { alpha: number; x0: number }
): string {
  const xi = table.columns.indexOf("x");
  const names: Array<[string, string]> = [
    ["N_mu", "mu-hits"],
    ["N_abc", "abc-hits"],
    ["N_good", "good triples"],
  ];
  if (xi < 0 || names.some(([c]) => table.columns.indexOf(c) < 0)) {
    throw new Error(
      `fig2 needs columns x,N_mu,N_abc,N_good; got ${table.columns}`
    );
  }
  const xsAll = table.rows.map((r) => r[xi]);
  const [loX, hiX] = positiveExtent(xsAll);
  const countsAll = table.rows.flatMap((r) =>
    names.map(([c]) => r[table.columns.indexOf(c)])
  );
  const [loN, hiN] = positiveExtent(countsAll);
  const x = log10Scale(loX, hiX, FRAME.marginLeft, FRAME.width - FRAME.marginRight);
  const y = log10Scale(
    Math.min(loN, 1),
    Math.max(hiN, 10),
    FRAME.height - FRAME.marginBottom,
    FRAME.marginTop
  );
  const series: Series[] = names.map(([col, label], i) => ({
    name: label,
    color: PALETTE[i % PALETTE.length],
    points: table.rows
      .filter((r) => r[table.columns.indexOf(col)] > 0 && r[xi] > 0)
      .sort((a, b) => a[xi] - b[xi])
      .map((r) => [r[xi], r[table.columns.indexOf(col)]] as [number, number]),
  }));
  if (overlay) {
    const pts: Array<[number, number]> = [];
    for (const xv of [loX, Math.sqrt(loX * hiX), hiX]) {
      const n = Math.pow(xv / overlay.x0, overlay.alpha);
      if (n > 0) {
        pts.push([xv, n]);
      }
    }
    series.push({
      name: `(x/${overlay.x0})^${Number(overlay.alpha.toPrecision(4))}`,
      color: "#555555",
      dashed: true,
      points: pts,
    });
  }
  const spec: ChartSpec = {
    title: "Cumulative counts below x",
    xLabel: "x (log)",
    yLabel: "N (log)",
    x,
    y,
    series,
    ...FRAME,
  };
  return renderChart(spec);
}

export interface CliArgs {
  which: string;
  input: string;
  output: string;
  alpha?: number;
  x0?: number;
}

export function parseArgs(argv: string[]): CliArgs {
  const out: Partial<CliArgs> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`missing value for ${key}`);
    }
    switch (key) {
      case "--which":
        out.which = value;
        break;
      case "--in":
        out.input = value;
        break;
      case "--out":
        out.output = value;
        break;
      case "--alpha":
        out.alpha = Number(value);
        break;
      case "--x0":
        out.x0 = Number(value);
        break;
      default:
        throw new Error(`unknown flag ${key}`);
    }
  }
  if (!out.which || !out.input || !out.output) {
    throw new Error("required: --which fig1|fig2 --in <csv> --out <svg>");
  }
  if (out.which !== "fig1" && out.which !== "fig2") {
    throw new Error(`--which must be fig1 or fig2, got ${out.which}`);
  }
  return out as CliArgs;
}

export function run(args: CliArgs): void {
  let svg: string;
  if (args.which === "fig1") {
    svg = renderFig1(readCsv(args.input, FIG1_SCHEMA));
  } else {
    const table = readCsv(args.input, FIG2_SCHEMA);
    let overlay = overlayFromComments(table.comments);
    if (args.alpha !== undefined && args.x0 !== undefined) {
      overlay = { alpha: args.alpha, x0: args.x0 };
    }
    svg = renderFig2(table, overlay);
  }
  writeFileSync(args.output, svg, "utf8");
}

function main(): number {
  try {
    run(parseArgs(process.argv.slice(2)));
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main());
}
