export { parseCsv, applyFilters, CsvSchemaError, EmptySelectionError, EXPECTED_HEADER } from "./csv";
export type { BerRow, ColumnName } from "./csv";
export { groupSeries } from "./series";
export type { Series, SeriesPoint, XColumn } from "./series";
export { renderSvg } from "./render";
export type { RenderOptions } from "./render";
export { buildSidecar, sidecarPath } from "./sidecar";
export type { Sidecar, SidecarPoint } from "./sidecar";
export { main, parseArgs, runPlot } from "./cli";
