export const SWEEP_HEADER =
  "lambda,k_ratio,reveal_ratio,rep,delegated_fraction,approx_ratio,winner_index";

export interface SweepRow {
  lambda: number;
  kRatio: number;
  revealRatio: number;
  rep: number;
  delegatedFraction: number;
  /** may be Infinity, written as "inf" in the file */
  approxRatio: number;
  winnerIndex: number;
}

export class CsvError extends Error {
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.name = "CsvError";
    this.line = line;
  }
}

function parseNumber(field: string, name: string, line: number,
                     opts: { integer?: boolean; allowInf?: boolean } = {}): number {
  if (opts.allowInf && field === "inf") return Infinity;
  if (field.trim() === "") throw new CsvError(line, `empty ${name} field`);
  const value = Number(field);
  if (Number.isNaN(value)) {
    throw new CsvError(line, `bad ${name} value ${JSON.stringify(field)}`);
  }
  if (opts.integer && !Number.isInteger(value)) {
    throw new CsvError(line, `${name} must be an integer, got ${field}`);
  }
  return value;
}

/** Strict parse of a sweep CSV; the header must match exactly. */
export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0 || lines[0] !== SWEEP_HEADER) {
    throw new CsvError(1, `expected header ${JSON.stringify(SWEEP_HEADER)}`);
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = i + 1;
    const fields = lines[i].split(",");
    if (fields.length !== 7) {
      throw new CsvError(line, `expected 7 fields, got ${fields.length}`);
    }
    rows.push({
      lambda: parseNumber(fields[0], "lambda", line, { integer: true }),
      kRatio: parseNumber(fields[1], "k_ratio", line),
      revealRatio: parseNumber(fields[2], "reveal_ratio", line),
      rep: parseNumber(fields[3], "rep", line, { integer: true }),
      delegatedFraction: parseNumber(fields[4], "delegated_fraction", line),
      approxRatio: parseNumber(fields[5], "approx_ratio", line, { allowInf: true }),
      winnerIndex: parseNumber(fields[6], "winner_index", line, { integer: true }),
    });
  }
  return rows;
}
