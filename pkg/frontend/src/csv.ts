/** Parsing for the bench CSV contract. */

export const REQUIRED_COLUMNS = [
  'problem',
  'mode',
  'd',
  'k',
  'best_lp_p',
  'ours_mse',
  'baseline_mse',
  'ratio',
] as const;

export interface BenchRow {
  problem: string;
  mode: string;
  d: number;
  k: number | null;
  ratio: number | null; // null for rows marked "skipped"
}

export class SchemaError extends Error {}

export function parseBenchCsv(text: string): BenchRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError('empty file: missing header row');
  }
  const header = lines[0].split(',');
  const index = new Map(header.map((name, i) => [name, i]));
  const missing = REQUIRED_COLUMNS.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new SchemaError(`missing columns: ${missing.join(', ')}`);
  }
  return lines.slice(1).map((line, lineno) => {
    const cells = line.split(',');
    const cell = (name: string) => cells[index.get(name)!] ?? '';
    const d = Number(cell('d'));
    if (!Number.isFinite(d)) {
      throw new SchemaError(`line ${lineno + 2}: bad d value ${cell('d')}`);
    }
    const kRaw = cell('k');
    const ratioRaw = cell('ratio');
    return {
      problem: cell('problem'),
      mode: cell('mode'),
      d,
      k: kRaw === '' ? null : Number(kRaw),
      ratio: ratioRaw === 'skipped' || ratioRaw === '' ? null : Number(ratioRaw),
    };
  });
}
