/**
 * Reader for the simulator's BER result CSV.
 *
 * Schema (one row per sweep point and node):
 *   scheme,protocol,constellation,mapping,N,P_t,P_r,N0,node,symbols,bits,
 *   errors,ber,ci99,seed,flags
 */

export const EXPECTED_HEADER = [
  "scheme", "protocol", "constellation", "mapping", "N", "P_t", "P_r", "N0",
  "node", "symbols", "bits", "errors", "ber", "ci99", "seed", "flags",
] as const;

export type ColumnName = (typeof EXPECTED_HEADER)[number];

export interface BerRow {
  scheme: string;
  protocol: string;
  constellation: string;
  mapping: string;
  n: number;
  pT: number;
  pR: number;
  n0: number;
  node: string;
  symbols: number;
  bits: number;
  errors: number;
  ber: number;
  ci99: number;
  seed: number;
  /** raw string fields by column name, used for exact filter matching */
  raw: Record<ColumnName, string>;
}

export class CsvSchemaError extends Error {}

const num = (row: string[], lineNo: number, idx: number, name: string): number => {
  const value = Number(row[idx]);
  if (!Number.isFinite(value)) {
    throw new CsvSchemaError(`line ${lineNo}: column ${name} is not numeric: ${row[idx]}`);
  }
  return value;
};

export function parseCsv(text: string): BerRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  if (header.join(",") !== EXPECTED_HEADER.join(",")) {
    throw new CsvSchemaError(
      `unexpected header: ${lines[0]} (expected ${EXPECTED_HEADER.join(",")})`,
    );
  }
  const rows: BerRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== EXPECTED_HEADER.length) {
      throw new CsvSchemaError(
        `line ${i + 1}: expected ${EXPECTED_HEADER.length} columns, got ${parts.length}`,
      );
    }
    const raw = {} as Record<ColumnName, string>;
    EXPECTED_HEADER.forEach((name, idx) => {
      raw[name] = parts[idx];
    });
    rows.push({
      scheme: parts[0],
      protocol: parts[1],
      constellation: parts[2],
      mapping: parts[3],
      n: num(parts, i + 1, 4, "N"),
      pT: num(parts, i + 1, 5, "P_t"),
      pR: num(parts, i + 1, 6, "P_r"),
      n0: num(parts, i + 1, 7, "N0"),
      node: parts[8],
      symbols: num(parts, i + 1, 9, "symbols"),
      bits: num(parts, i + 1, 10, "bits"),
      errors: num(parts, i + 1, 11, "errors"),
      ber: num(parts, i + 1, 12, "ber"),
      ci99: num(parts, i + 1, 13, "ci99"),
      seed: num(parts, i + 1, 14, "seed"),
      raw,
    });
  }
  return rows;
}

export class EmptySelectionError extends Error {}

/** Keep rows whose raw column value equals every filter value exactly. */
export function applyFilters(
  rows: BerRow[],
  filters: Record<string, string>,
): BerRow[] {
  for (const key of Object.keys(filters)) {
    if (!(EXPECTED_HEADER as readonly string[]).includes(key)) {
      throw new CsvSchemaError(`unknown filter column: ${key}`);
    }
  }
  const kept = rows.filter((row) =>
    Object.entries(filters).every(
      ([key, value]) => row.raw[key as ColumnName] === value,
    ),
  );
  if (kept.length === 0) {
    const description = Object.entries(filters)
      .map(([k, v]) => `${k}=${v}`)
      .join(" ");
    throw new EmptySelectionError(
      `no rows match filter ${description || "(none)"}`,
    );
  }
  return kept;
}
