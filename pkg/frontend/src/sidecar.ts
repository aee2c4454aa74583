/**
 * Machine-readable sidecar next to the rendered image: every plotted
 * (x, y) pair, where y is the CSV ber value verbatim (the log-scale floor
 * only moves pixels, never data).
 */

import { Series, XColumn } from "./series";

export interface SidecarPoint {
  x: number;
  y: number;
  ci99: number;
  floor_applied: boolean;
}

export interface Sidecar {
  x_column: XColumn;
  series: Array<{
    scheme: string;
    node: string;
    points: SidecarPoint[];
  }>;
}

export function buildSidecar(series: Series[], xColumn: XColumn): Sidecar {
  return {
    x_column: xColumn,
    series: series.map((s) => ({
      scheme: s.scheme,
      node: s.node,
      points: s.points.map((p) => ({
        x: p.x,
        y: p.y,
        ci99: p.ci99,
        floor_applied: p.floorApplied,
      })),
    })),
  };
}

export function sidecarPath(outPath: string): string {
  return outPath.replace(/\.(svg|png)$/i, "") + ".points.json";
}
