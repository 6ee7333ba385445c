/** CSV parsing against the frozen modlab column contracts. */

export interface SeriesFile {
  path: string;
  header: string[];
  rows: number[][];
}

export class HeaderError extends Error {
  constructor(message: string, public readonly supported: string[]) {
    super(message);
    this.name = "HeaderError";
  }
}

export class EmptySeriesError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptySeriesError";
  }
}

/** The frozen contracts, keyed by preset name. */
export const CONTRACTS: Record<string, string[]> = {
  correlator: ["s", "re_F", "im_F"],
  defect: ["s", "defect", "choi_min_eig", "ks_min_residual"],
  stability: ["s", "lhs", "kato_rhs", "proj_dist", "fit_Cz"],
  fidelity: ["s", "fidelity"],
};

export function supportedHeaders(): string[] {
  return Object.entries(CONTRACTS).map(
    ([name, cols]) => `${name}: ${cols.join(",")}`,
  );
}

export function presetForHeader(header: string[]): string | undefined {
  for (const [name, cols] of Object.entries(CONTRACTS)) {
    if (cols.length === header.length && cols.every((c, i) => c === header[i])) {
      return name;
    }
  }
  return undefined;
}

export function parseCsv(path: string, text: string): SeriesFile {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new HeaderError(`${path}: empty file`, supportedHeaders());
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new HeaderError(
        `${path}: row ${i} has ${cells.length} cells, header has ${header.length}`,
        supportedHeaders(),
      );
    }
    const row = cells.map((c) => Number(c));
    if (row.some((v) => Number.isNaN(v))) {
      throw new HeaderError(`${path}: non-numeric cell in row ${i}`, supportedHeaders());
    }
    rows.push(row);
  }
  return { path, header, rows };
}

/** Parse and check the file against one preset's contract. */
export function loadSeries(path: string, text: string, preset: string): SeriesFile {
  const cols = CONTRACTS[preset];
  if (!cols) {
    throw new HeaderError(
      `unknown preset '${preset}'`,
      supportedHeaders(),
    );
  }
  const series = parseCsv(path, text);
  const got = series.header.join(",");
  if (got !== cols.join(",")) {
    throw new HeaderError(
      `${path}: header '${got}' does not match preset '${preset}' ` +
        `(expected '${cols.join(",")}')`,
      supportedHeaders(),
    );
  }
  if (series.rows.length === 0) {
    throw new EmptySeriesError(`${path}: no data rows to render`);
  }
  return series;
}
