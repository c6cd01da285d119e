/**
 * Reader for the versioned CSV files emitted by the collatz-abc CLI.
 *
 * Every file starts with a `# schema=collatz-abc/<kind>/<version>` line,
 * optionally followed by more `#` comment lines (fig2 carries its overlay
 * parameters there), then a header row and numeric data rows.
 */

import { readFileSync } from "fs";

export interface CsvTable {
  schema: string;
  comments: string[];
  columns: string[];
  rows: number[][];
}

export class SchemaMismatchError extends Error {
  constructor(expected: string, actual: string) {
    super(`schema mismatch: expected '${expected}', got '${actual}'`);
    this.name = "SchemaMismatchError";
  }
}

export function parseCsv(text: string, expectedSchema: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no schema line");
  }
  const schemaLine = lines[0].trim();
  const expectedLine = `# schema=${expectedSchema}`;
  if (schemaLine !== expectedLine) {
    throw new SchemaMismatchError(expectedLine, schemaLine);
  }
  const comments: string[] = [];
  let i = 1;
  while (i < lines.length && lines[i].startsWith("#")) {
    comments.push(lines[i]);
    i += 1;
  }
  if (i >= lines.length) {
    throw new Error("empty CSV: missing header row");
  }
  const columns = lines[i].split(",").map((c) => c.trim());
  i += 1;
  const rows: number[][] = [];
  for (; i < lines.length; i += 1) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `row ${i + 1} has ${parts.length} fields, expected ${columns.length}`
      );
    }
    const row = parts.map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new Error(`row ${i + 1}: '${p}' is not a number`);
      }
      return v;
    });
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error("empty CSV: no data rows");
  }
  return { schema: schemaLine, comments, columns, rows };
}

export function readCsv(path: string, expectedSchema: string): CsvTable {
  return parseCsv(readFileSync(path, "utf8"), expectedSchema);
}

/** Overlay parameters from a `# overlay alpha=... x0=...` comment line. */
export function overlayFromComments(
  comments: string[]
): { alpha: number; x0: number } | undefined {
  for (const line of comments) {
    const m = /^#\s*overlay\s+alpha=([-\d.eE+]+)\s+x0=([-\d.eE+]+)/.exec(line);
    if (m) {
      return { alpha: Number(m[1]), x0: Number(m[2]) };
    }
  }
  return undefined;
}
