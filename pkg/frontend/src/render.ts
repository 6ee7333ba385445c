/** File-level rendering: read a CSV under one preset's contract, rasterize,
 * and write `<input-stem>.<preset>.png` into the output directory.  The
 * input is never modified; nothing is written when validation fails.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename, dirname, join } from "node:path";

import { loadSeries } from "./csv.js";
import { encodePng } from "./png.js";
import { renderFigure } from "./plot.js";

export function renderToBuffer(csvPath: string, preset: string): Buffer {
  const text = readFileSync(csvPath, "utf8");
  const series = loadSeries(basename(csvPath), text, preset);
  const img = renderFigure(series, preset);
  return encodePng(img.width, img.height, img.pixels);
}

export function outputPath(csvPath: string, preset: string, outDir?: string): string {
  const stem = basename(csvPath).replace(/\.[^.]*$/, "");
  return join(outDir ?? dirname(csvPath), `${stem}.${preset}.png`);
}

export function renderFile(csvPath: string, preset: string, outDir?: string): string {
  const png = renderToBuffer(csvPath, preset);
  const out = outputPath(csvPath, preset, outDir);
  writeFileSync(out, png);
  return out;
}
