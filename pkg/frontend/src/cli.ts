#!/usr/bin/env node
/** entangler-plot <experiment> --in <csv> --out <img>
 *
 * Renders one simulator result table as SVG or PNG (chosen by the --out
 * extension).  Exit codes: 0 success, 1 data/schema error, 2 usage error.
 */

import { writeFileSync } from "node:fs";
import { loadTable, SchemaError } from "./csv";
import { buildScene } from "./plots";
import { rasterToPng } from "./png";
import { sceneToRaster } from "./raster";
import { SCHEMAS } from "./schema";
import { sceneToSvg } from "./svg";

/** plot name -> the table schema it reads */
const PLOTS: Record<string, string> = {
  fig2a: "fig2a",
  fig2b: "fig2b",
  fig3: "fig3",
  fig4: "fig4",
  "fig4-exponential": "fig4",
  "fig5-decay": "fig5-decay",
  "fig5-asym": "fig5-asym",
  fig6: "fig6",
  "fig6-exponential": "fig6",
  "offset-fit": "offset-fit",
};

function usage(): string {
  return (
    "usage: entangler-plot <experiment> --in <csv> --out <img.{svg,png}>\n" +
    `experiments: ${Object.keys(PLOTS).join(", ")}\n` +
    "(fig5 writes two tables; plot them as fig5-decay / fig5-asym)"
  );
}

export function main(argv: string[]): number {
  const args = [...argv];
  if (args.length === 0 || args[0] === "--help" || args[0] === "-h") {
    console.log(usage());
    return args.length === 0 ? 2 : 0;
  }
  const experiment = args.shift() as string;
  let input: string | undefined;
  let output: string | undefined;
  while (args.length > 0) {
    const flag = args.shift();
    if (flag === "--in") input = args.shift();
    else if (flag === "--out") output = args.shift();
    else {
      console.error(`unknown argument ${flag}\n${usage()}`);
      return 2;
    }
  }
  if (experiment === "fig5") {
    console.error("fig5 produces two tables; use fig5-decay or fig5-asym");
    return 2;
  }
  if (!(experiment in PLOTS)) {
    console.error(`unknown experiment ${experiment}\n${usage()}`);
    return 2;
  }
  if (!input || !output) {
    console.error(`--in and --out are required\n${usage()}`);
    return 2;
  }
  const format = output.endsWith(".svg")
    ? "svg"
    : output.endsWith(".png")
      ? "png"
      : null;
  if (format === null) {
    console.error("output file must end in .svg or .png");
    return 2;
  }

  const schema = SCHEMAS.get(PLOTS[experiment])!;
  let rows;
  try {
    rows = loadTable(input, schema);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(String(err.message));
    } else {
      console.error(`cannot read ${input}: ${(err as Error).message}`);
    }
    return 1;
  }
  try {
    const built = buildScene(experiment, rows);
    if (format === "svg") {
      writeFileSync(output, sceneToSvg(built.scene), "utf-8");
    } else {
      writeFileSync(output, rasterToPng(sceneToRaster(built.scene)));
    }
    console.log(output);
    return 0;
  } catch (err) {
    console.error(`plot failed: ${(err as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
