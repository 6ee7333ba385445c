#!/usr/bin/env node
/** render_series <csv> --preset {correlator|defect|stability|fidelity} [--out dir] */

import { pathToFileURL } from "node:url";

import { EmptySeriesError, HeaderError, CONTRACTS } from "./csv.js";
import { renderFile } from "./render.js";

function usage(): string {
  return (
    "usage: render_series <csv> --preset " +
    `{${Object.keys(CONTRACTS).join("|")}} [--out dir]`
  );
}

export function main(argv: string[]): number {
  const args = [...argv];
  let preset: string | undefined;
  let outDir: string | undefined;
  const positional: string[] = [];
  while (args.length) {
    const a = args.shift()!;
    if (a === "--preset") preset = args.shift();
    else if (a === "--out") outDir = args.shift();
    else if (a === "-h" || a === "--help") {
      console.log(usage());
      return 0;
    } else positional.push(a);
  }
  if (positional.length !== 1 || !preset) {
    console.error(usage());
    return 2;
  }
  try {
    const out = renderFile(positional[0], preset, outDir);
    console.log(out);
    return 0;
  } catch (err) {
    if (err instanceof HeaderError) {
      console.error(`${err.message}\nsupported headers:`);
      for (const h of err.supported) console.error(`  ${h}`);
      return 2;
    }
    if (err instanceof EmptySeriesError) {
      console.error(err.message);
      return 1;
    }
    if (err instanceof Error && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`input file not found: ${positional[0]}`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
