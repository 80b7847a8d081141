/**
 * Error-ratio line charts from bench rows.
 *
 * One chart per mode: each problem is a series of ratio against its sweep
 * parameter (the contribution bound k for sum/count, the dimension d for
 * vote), with a dashed reference line at ratio = 1.
 */

import { BenchRow } from './csv.js';
import { Color, GLYPH_HEIGHT, Raster, textWidth } from './png.js';

export const WIDTH = 640;
export const HEIGHT = 420;

const MARGIN = { left: 58, right: 16, top: 34, bottom: 44 };
const AXIS: Color = [40, 40, 40];
const GRID: Color = [150, 150, 150];
const SERIES_COLORS: Record<string, Color> = {
  sum: [214, 69, 65],
  count: [38, 134, 87],
  vote: [52, 98, 219],
};

interface Series {
  problem: string;
  points: Array<{ x: number; y: number }>;
}

export function buildSeries(rows: BenchRow[], mode: string): Series[] {
  const series: Series[] = [];
  for (const problem of ['sum', 'count', 'vote']) {
    const points = rows
      .filter((r) => r.mode === mode && r.problem === problem && r.ratio !== null)
      .map((r) => ({ x: problem === 'vote' ? r.d : (r.k as number), y: r.ratio as number }))
      .filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y))
      .sort((a, b) => a.x - b.x);
    if (points.length > 0) series.push({ problem, points });
  }
  return series;
}

function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const step = (hi - lo) / target;
  const mag = 10 ** Math.floor(Math.log10(step));
  const norm = step / mag;
  const nice = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
  const tick = nice * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / tick) * tick; t <= hi + 1e-12; t += tick) {
    ticks.push(Number(t.toFixed(12)));
  }
  return ticks;
}

function formatTick(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(Math.abs(value) < 0.1 ? 2 : 1);
}

export function renderChart(rows: BenchRow[], mode: string): Raster {
  const raster = new Raster(WIDTH, HEIGHT);
  const series = buildSeries(rows, mode);
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y));

  let xLo = xs.length ? Math.min(...xs) : 0;
  let xHi = xs.length ? Math.max(...xs) : 1;
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  const yLo = 0;
  // Always keep the ratio = 1 reference inside the frame.
  const yHi = Math.max(1.05, ys.length ? Math.max(...ys) * 1.05 : 1.05);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  // Frame.
  raster.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, AXIS);
  raster.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, AXIS);

  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    raster.line(x, MARGIN.top + plotH, x, MARGIN.top + plotH + 4, AXIS);
    const label = formatTick(t);
    raster.text(x - textWidth(label) / 2, MARGIN.top + plotH + 8, label, AXIS);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = py(t);
    raster.line(MARGIN.left - 4, y, MARGIN.left, y, AXIS);
    const label = formatTick(t);
    raster.text(MARGIN.left - 8 - textWidth(label), y - GLYPH_HEIGHT / 2, label, AXIS);
  }

  // Reference line at ratio = 1.
  raster.dashedHLine(Math.round(py(1)), MARGIN.left, MARGIN.left + plotW, GRID);
  raster.text(MARGIN.left + plotW - textWidth('ratio=1'), Math.round(py(1)) - GLYPH_HEIGHT - 2, 'ratio=1', GRID);

  for (const s of series) {
    const color = SERIES_COLORS[s.problem] ?? AXIS;
    for (let i = 1; i < s.points.length; i++) {
      raster.line(px(s.points[i - 1].x), py(s.points[i - 1].y), px(s.points[i].x), py(s.points[i].y), color);
    }
    for (const p of s.points) raster.marker(px(p.x), py(p.y), color);
  }

  // Legend and titles.
  let ly = MARGIN.top + 6;
  for (const s of series) {
    const color = SERIES_COLORS[s.problem] ?? AXIS;
    const lx = MARGIN.left + plotW - 86;
    raster.fillRect(lx, ly + 1, 10, 5, color);
    raster.text(lx + 14, ly, s.problem, AXIS);
    ly += GLYPH_HEIGHT + 4;
  }
  raster.text(MARGIN.left, MARGIN.top - GLYPH_HEIGHT - 8, `${mode} error ratio`, AXIS);
  raster.text(
    MARGIN.left + plotW / 2 - textWidth('k (sum,count) / d (vote)') / 2,
    HEIGHT - GLYPH_HEIGHT - 6,
    'k (sum,count) / d (vote)',
    AXIS,
  );
  raster.text(4, MARGIN.top - GLYPH_HEIGHT - 8, 'ratio', AXIS);
  return raster;
}
