/** CSV reading and schema validation for simulator result tables. */

import { readFileSync } from "node:fs";
import { TableSchema, expectedColumns } from "./schema";

export type Row = Record<string, number | string>;

export class SchemaError extends Error {
  constructor(
    message: string,
    readonly missing: string[],
    readonly unexpected: string[],
  ) {
    super(message);
  }
}

export function parseCsv(text: string): { header: string[]; cells: string[][] } {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("CSV is empty (no header row)");
  }
  const header = lines[0].split(",");
  const cells = lines.slice(1).map((line) => line.split(","));
  for (const [i, row] of cells.entries()) {
    if (row.length !== header.length) {
      throw new Error(
        `row ${i + 1} has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { header, cells };
}

/** Load rows and validate the columns against the experiment's schema. */
export function loadTable(path: string, schema: TableSchema): Row[] {
  const { header, cells } = parseCsv(readFileSync(path, "utf-8"));
  const expected = expectedColumns(schema);
  const missing = expected.filter((c) => !header.includes(c));
  const unexpected = header.filter((c) => !expected.includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    throw new SchemaError(
      `CSV columns do not match the ${schema.name} schema\n` +
        `  missing:    ${missing.length ? missing.join(", ") : "(none)"}\n` +
        `  unexpected: ${unexpected.length ? unexpected.join(", ") : "(none)"}`,
      missing,
      unexpected,
    );
  }
  if (cells.length === 0) {
    throw new Error(`CSV has a valid ${schema.name} header but no data rows`);
  }
  const stringCols = new Set([...schema.stringColumns, "params_hash", "version"]);
  return cells.map((row) => {
    const out: Row = {};
    header.forEach((name, i) => {
      out[name] = stringCols.has(name) ? row[i] : Number(row[i]);
    });
    return out;
  });
}
