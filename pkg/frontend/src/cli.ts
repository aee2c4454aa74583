#!/usr/bin/env node
/**
 * plot --csv <path> --x <pt|n> --out <svg path> [--filter key=value ...]
 *
 * Reads the simulator's CSV, renders one curve per (scheme, node) with
 * confidence whiskers on a log BER axis, and writes a sidecar JSON of the
 * plotted (x, y) pairs next to the image.
 */

import { readFileSync, writeFileSync } from "fs";

import { applyFilters, parseCsv } from "./csv";
import { renderSvg } from "./render";
import { buildSidecar, sidecarPath } from "./sidecar";
import { groupSeries, XColumn } from "./series";

interface Args {
  csv: string;
  x: XColumn;
  out: string;
  filters: Record<string, string>;
}

function usage(): string {
  return "usage: ber-plot plot --csv <path> --x <pt|n> --out <svg path> [--filter key=value ...]";
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "plot") {
    throw new Error(`unknown command ${argv[0] ?? "(none)"}; ${usage()}`);
  }
  let csv: string | undefined;
  let x: XColumn | undefined;
  let out: string | undefined;
  const filters: Record<string, string> = {};
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[++i];
    if (value === undefined) {
      throw new Error(`missing value for ${flag}; ${usage()}`);
    }
    switch (flag) {
      case "--csv":
        csv = value;
        break;
      case "--x":
        if (value === "pt") x = "P_t";
        else if (value === "n") x = "N";
        else throw new Error(`--x must be pt or n, got ${value}`);
        break;
      case "--out":
        out = value;
        break;
      case "--filter": {
        const eq = value.indexOf("=");
        if (eq <= 0) throw new Error(`--filter expects key=value, got ${value}`);
        filters[value.slice(0, eq)] = value.slice(eq + 1);
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}; ${usage()}`);
    }
  }
  if (!csv || !x || !out) {
    throw new Error(`--csv, --x and --out are required; ${usage()}`);
  }
  return { csv, x, out, filters };
}

export function runPlot(args: Args): { image: string; sidecar: string } {
  const rows = applyFilters(parseCsv(readFileSync(args.csv, "utf8")), args.filters);
  const series = groupSeries(rows, args.x);
  const svg = renderSvg(series, { xColumn: args.x, logY: true, title: args.csv });
  writeFileSync(args.out, svg, "utf8");
  const sidecarFile = sidecarPath(args.out);
  writeFileSync(sidecarFile, JSON.stringify(buildSidecar(series, args.x), null, 1) + "\n", "utf8");
  return { image: args.out, sidecar: sidecarFile };
}

export function main(argv: string[]): number {
  try {
    const { image, sidecar } = runPlot(parseArgs(argv));
    console.log(`wrote ${image} and ${sidecar}`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
