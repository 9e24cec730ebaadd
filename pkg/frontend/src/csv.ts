import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  header: string[];
  rows: number[][];
}

/** Parse a numeric CSV and check it carries the expected columns. */
export function readCsv(path: string, expected: string[]): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${String(err)}`);
  }
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length < 2) {
    throw new SchemaError(`${path}: need a header and at least one row`);
  }
  const header = lines[0].split(",").map((s) => s.trim());
  for (const col of expected) {
    if (!header.includes(col)) {
      throw new SchemaError(`${path}: missing column '${col}' (got ${header.join(",")})`);
    }
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",").map((s) => Number(s));
    if (cells.length !== header.length || cells.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`${path}:${i + 1}: malformed numeric row`);
    }
    rows.push(cells);
  }
  return { header, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing column '${name}'`);
  return table.rows.map((r) => r[idx]);
}
