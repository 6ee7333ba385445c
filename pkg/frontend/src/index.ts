export { CONTRACTS, parseCsv, loadSeries, presetForHeader, HeaderError, EmptySeriesError } from "./csv.js";
export type { SeriesFile } from "./csv.js";
export { encodePng } from "./png.js";
export { Raster } from "./raster.js";
export { renderFigure, PLOT_SPECS } from "./plot.js";
export { renderFile, renderToBuffer, outputPath } from "./render.js";
