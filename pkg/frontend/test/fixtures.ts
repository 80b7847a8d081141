/** Synthetic bench CSV shaped like the real generator output. */

const HEADER = 'problem,mode,d,k,best_lp_p,ours_mse,baseline_mse,ratio';

export function fullBenchCsv(): string {
  const lines = [HEADER];
  for (let k = 2; k <= 48; k += 2) {
    const ratio = 0.6 + 0.4 * Math.abs(Math.sin(k));
    lines.push(`sum,knorm,50,${k},1,${(ratio * 16).toFixed(6)},16.0,${ratio.toFixed(6)}`);
  }
  for (let k = 2; k <= 49; k += 2) {
    const ratio = 0.4 + 0.3 * Math.abs(Math.cos(k));
    lines.push(`count,knorm,50,${k},inf,${(ratio * 16).toFixed(6)},16.0,${ratio.toFixed(6)}`);
  }
  for (let d = 5; d <= 50; d += 3) {
    lines.push(`vote,knorm,${d},,4,1.25,2.4,0.52`);
  }
  for (let k = 2; k <= 500; k += 20) {
    const ratio = 1 - k / 1200;
    lines.push(`count,ellipse,1000,${k},2,${(ratio * 0.9).toFixed(6)},0.9,${ratio.toFixed(6)}`);
  }
  // Dense-regime rows are emitted but skipped.
  lines.push('count,ellipse,8,5,2,,,skipped');
  for (let d = 3; d <= 1000; d += 50) {
    lines.push(`vote,ellipse,${d},,2,0.3,1.0,0.3`);
  }
  return lines.join('\n') + '\n';
}

export const EMPTY_BODY = HEADER + '\n';

export const SINGLE_ROW =
  HEADER + '\nvote,knorm,7,,2,1.5,2.9,0.517\n';

export const MISSING_COLUMN =
  'problem,mode,d,k,best_lp_p,ours_mse,baseline_mse\nsum,knorm,5,2,1,1.0,2.0\n';
