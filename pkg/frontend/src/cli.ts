#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { CsvError, parseSweepCsv } from "./csv.js";
import { renderFigure } from "./figure.js";
import { GROUP_FIELDS, GroupField, Y_FIELDS, YField } from "./stats.js";

const USAGE = `usage: figure-kit --csv sweep.csv [--y delegated_fraction|approx_quality]
                  [--group k_ratio|reveal_ratio] [--title TEXT]
                  [--format svg] -o figure.svg`;

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        y: { type: "string", default: "delegated_fraction" },
        group: { type: "string", default: "k_ratio" },
        out: { type: "string", short: "o" },
        title: { type: "string" },
        format: { type: "string", default: "svg" },
        help: { type: "boolean", short: "h", default: false },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  if (!values.csv || !values.out) {
    console.error("error: --csv and -o/--out are required");
    console.error(USAGE);
    return 2;
  }
  if (!Y_FIELDS.includes(values.y as YField)) {
    console.error(`error: unknown y field ${JSON.stringify(values.y)}; ` +
                  `choose one of ${Y_FIELDS.join(", ")}`);
    return 2;
  }
  if (!GROUP_FIELDS.includes(values.group as GroupField)) {
    console.error(`error: unknown group field ${JSON.stringify(values.group)}; ` +
                  `choose one of ${GROUP_FIELDS.join(", ")}`);
    return 2;
  }
  if (values.format !== "svg") {
    console.error(`error: unsupported format ${JSON.stringify(values.format)}; ` +
                  `this tool writes vector output (svg)`);
    return 2;
  }
  try {
    const text = readFileSync(values.csv, "utf8");
    const rows = parseSweepCsv(text);
    const figure = renderFigure(rows, {
      y: values.y as YField,
      group: values.group as GroupField,
      title: values.title,
    });
    writeFileSync(values.out, figure.svg + "\n");
    console.error(`wrote ${figure.curves.length} curves to ${values.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] &&
    import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
