import { describe, expect, it } from 'vitest';

import { buildSeries, renderChart, WIDTH } from '../src/chart.js';
import { parseBenchCsv } from '../src/csv.js';
import { Raster } from '../src/png.js';
import { EMPTY_BODY, fullBenchCsv, SINGLE_ROW } from './fixtures.js';

function countColor(raster: Raster, color: readonly [number, number, number]): number {
  let n = 0;
  for (let i = 0; i < raster.pixels.length; i += 3) {
    if (
      raster.pixels[i] === color[0] &&
      raster.pixels[i + 1] === color[1] &&
      raster.pixels[i + 2] === color[2]
    ) {
      n++;
    }
  }
  return n;
}

describe('buildSeries', () => {
  it('splits by problem and picks the sweep axis', () => {
    const rows = parseBenchCsv(fullBenchCsv());
    const knorm = buildSeries(rows, 'knorm');
    expect(knorm.map((s) => s.problem)).toEqual(['sum', 'count', 'vote']);
    const vote = knorm.find((s) => s.problem === 'vote')!;
    expect(vote.points[0].x).toBe(5); // dimension, not k
    const xs = vote.points.map((p) => p.x);
    expect([...xs].sort((a, b) => a - b)).toEqual(xs);
  });

  it('drops skipped rows', () => {
    const rows = parseBenchCsv(fullBenchCsv());
    const ellipse = buildSeries(rows, 'ellipse');
    const count = ellipse.find((s) => s.problem === 'count')!;
    expect(count.points.every((p) => Number.isFinite(p.y))).toBe(true);
    expect(count.points.some((p) => p.x === 5 && p.y === null)).toBe(false);
  });
});

describe('renderChart', () => {
  it('draws the dashed ratio=1 reference line', () => {
    const raster = renderChart(parseBenchCsv(fullBenchCsv()), 'knorm');
    expect(countColor(raster, [150, 150, 150])).toBeGreaterThan(100);
  });

  it('draws one colored series per problem', () => {
    const raster = renderChart(parseBenchCsv(fullBenchCsv()), 'knorm');
    expect(countColor(raster, [214, 69, 65])).toBeGreaterThan(20); // sum
    expect(countColor(raster, [38, 134, 87])).toBeGreaterThan(20); // count
    expect(countColor(raster, [52, 98, 219])).toBeGreaterThan(20); // vote
  });

  it('renders empty axes for an empty body', () => {
    const raster = renderChart(parseBenchCsv(EMPTY_BODY), 'knorm');
    expect(countColor(raster, [150, 150, 150])).toBeGreaterThan(100); // reference line
    expect(countColor(raster, [214, 69, 65])).toBe(0);
    expect(countColor(raster, [52, 98, 219])).toBe(0);
  });

  it('renders a single row as a marker', () => {
    const raster = renderChart(parseBenchCsv(SINGLE_ROW), 'knorm');
    const votePixels = countColor(raster, [52, 98, 219]);
    expect(votePixels).toBeGreaterThan(10); // marker + legend swatch
    expect(votePixels).toBeLessThan(WIDTH); // not a full polyline
  });
});
