/** Line-figure composition for one series file: axes, ticks, polylines,
 * legend, title.  All layout is integer arithmetic over the data, so the
 * same rows always rasterize to the same pixels.
 */

import { Raster, Color, textWidth } from "./raster.js";
import type { SeriesFile } from "./csv.js";

const WIDTH = 800;
const HEIGHT = 500;
const MARGIN = { left: 80, right: 24, top: 46, bottom: 56 };

const AXIS: Color = [40, 40, 40];
const GRID: Color = [225, 225, 225];
const TEXT: Color = [20, 20, 20];
const PALETTE: Color[] = [
  [31, 119, 180],
  [214, 39, 40],
  [44, 160, 44],
  [148, 103, 189],
];

export interface PlotSpec {
  /** indices of the y columns to draw (x is always column 0) */
  yColumns: number[];
  title: string;
}

/** Presentation choices per preset: which columns become curves. */
export const PLOT_SPECS: Record<string, Omit<PlotSpec, "title">> = {
  correlator: { yColumns: [1, 2] },
  defect: { yColumns: [1, 2, 3] },
  stability: { yColumns: [1, 2, 3] },
  fidelity: { yColumns: [1] },
};

function niceLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(4)));
  }
  return v.toExponential(2).replace("e", "E");
}

function range(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(Number.isFinite(lo) && Number.isFinite(hi))) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-300) {
    const pad = Math.max(1e-3, Math.abs(hi) * 0.1);
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

export function renderFigure(series: SeriesFile, preset: string): Raster {
  const spec = PLOT_SPECS[preset];
  const img = new Raster(WIDTH, HEIGHT);
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = MARGIN.top;
  const y1 = HEIGHT - MARGIN.bottom;

  const xs = series.rows.map((r) => r[0]);
  const ys = spec.yColumns.flatMap((c) => series.rows.map((r) => r[c]));
  const [xlo, xhi] = range(xs);
  const [ylo, yhi] = range(ys);
  const px = (x: number) => x0 + ((x - xlo) / (xhi - xlo)) * (x1 - x0);
  const py = (y: number) => y1 - ((y - ylo) / (yhi - ylo)) * (y1 - y0);

  // grid and ticks
  const nticks = 5;
  for (let i = 0; i <= nticks; i++) {
    const tx = xlo + ((xhi - xlo) * i) / nticks;
    const gx = Math.round(px(tx));
    img.line(gx, y0, gx, y1, GRID);
    const label = niceLabel(tx);
    img.text(gx - Math.floor(textWidth(label) / 2), y1 + 8, label, TEXT);

    const ty = ylo + ((yhi - ylo) * i) / nticks;
    const gy = Math.round(py(ty));
    img.line(x0, gy, x1, gy, GRID);
    const ylabel = niceLabel(ty);
    img.text(x0 - textWidth(ylabel) - 6, gy - 3, ylabel, TEXT);
  }
  img.rect(x0, y0, x1, y1, AXIS);

  // curves with point markers
  spec.yColumns.forEach((col, k) => {
    const color = PALETTE[k % PALETTE.length];
    let prev: [number, number] | null = null;
    for (const row of series.rows) {
      const cx = px(row[0]);
      const cy = py(row[col]);
      if (prev) img.line(prev[0], prev[1], cx, cy, color);
      img.fillRect(Math.round(cx) - 1, Math.round(cy) - 1, Math.round(cx) + 1, Math.round(cy) + 1, color);
      prev = [cx, cy];
    }
  });

  // legend, top-right inside the frame
  spec.yColumns.forEach((col, k) => {
    const color = PALETTE[k % PALETTE.length];
    const name = series.header[col];
    const ly = y0 + 8 + 12 * k;
    const lx = x1 - 16 - textWidth(name) - 14;
    img.fillRect(lx, ly, lx + 8, ly + 6, color);
    img.text(lx + 14, ly, name, TEXT);
  });

  // title and x-axis name
  img.text(x0, y0 - 26, `${preset}: ${series.path}`, TEXT);
  img.text(Math.round((x0 + x1) / 2) - 3, HEIGHT - 16, series.header[0], TEXT);
  return img;
}
