#!/usr/bin/env node
/**
 * plot <csv> --out <dir> [--mode knorm|ellipse]
 *
 * Renders the bench CSV into one PNG per mode (knorm.png, ellipse.png).
 * Output is deterministic: the same CSV yields byte-identical images.
 * Exit codes: 0 success, 2 bad arguments or CSV schema, 3 runtime failure.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { renderChart } from './chart.js';
import { parseBenchCsv, SchemaError } from './csv.js';
import { encodePng } from './png.js';

export interface PlotSpec {
  inputCsv: string;
  outputDir: string;
  mode?: 'knorm' | 'ellipse';
}

export function parseArgs(argv: string[]): PlotSpec {
  let inputCsv: string | undefined;
  let outputDir: string | undefined;
  let mode: PlotSpec['mode'];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '--out') {
      outputDir = argv[++i];
    } else if (arg === '--mode') {
      const value = argv[++i];
      if (value !== 'knorm' && value !== 'ellipse') {
        throw new SchemaError(`--mode must be knorm or ellipse, got ${value}`);
      }
      mode = value;
    } else if (arg.startsWith('--')) {
      throw new SchemaError(`unknown option ${arg}`);
    } else if (inputCsv === undefined) {
      inputCsv = arg;
    } else {
      throw new SchemaError(`unexpected argument ${arg}`);
    }
  }
  if (!inputCsv) throw new SchemaError('usage: plot <csv> --out <dir> [--mode knorm|ellipse]');
  if (!outputDir) throw new SchemaError('--out <dir> is required');
  return { inputCsv, outputDir, mode };
}

export function render(spec: PlotSpec): string[] {
  const rows = parseBenchCsv(fs.readFileSync(spec.inputCsv, 'utf8'));
  fs.mkdirSync(spec.outputDir, { recursive: true });
  const modes = spec.mode ? [spec.mode] : (['knorm', 'ellipse'] as const);
  const written: string[] = [];
  for (const mode of modes) {
    const file = path.join(spec.outputDir, `${mode}.png`);
    fs.writeFileSync(file, encodePng(renderChart(rows, mode)));
    written.push(file);
  }
  return written;
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    for (const file of render(spec)) {
      process.stdout.write(`${file}\n`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    process.stderr.write(`runtime error: ${String(err)}\n`);
    return 3;
  }
}

if (process.argv[1] && path.basename(process.argv[1]).startsWith('plot')) {
  process.exit(main(process.argv.slice(2)));
}
