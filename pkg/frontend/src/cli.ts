#!/usr/bin/env node
/**
 * dwn-export: convert a trained checkpoint into the toolkit's model JSON.
 *
 *   dwn-export export --checkpoint ck.json --out model.json --num-classes 5 \
 *       [--key-map thresholds=enc.thresholds,weights=lut.w,mapping=lut.map] \
 *       [--mapping-layout threshold-major|feature-major] [--name NAME]
 */

import { readFileSync, writeFileSync } from "node:fs";
import { CheckpointError, parseKeyMap } from "./checkpoint.js";
import { MappingLayout, exportCheckpoint } from "./convert.js";

const USAGE =
  "usage: dwn-export export --checkpoint <path> --out <path> --num-classes <C> " +
  "[--key-map k=v,...] [--mapping-layout threshold-major|feature-major] [--name NAME]";

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new CheckpointError(`bad argument '${flag}'; ${USAGE}`);
    }
    args.set(flag.slice(2), value);
  }
  return args;
}

export function main(argv: string[]): number {
  if (argv[0] !== "export") {
    console.error(USAGE);
    return 2;
  }
  try {
    const args = parseArgs(argv.slice(1));
    for (const required of ["checkpoint", "out", "num-classes"]) {
      if (!args.has(required)) {
        console.error(`error: --${required} is required\n${USAGE}`);
        return 2;
      }
    }
    const layout = (args.get("mapping-layout") ?? "threshold-major") as MappingLayout;
    if (layout !== "threshold-major" && layout !== "feature-major") {
      console.error(`error: unknown --mapping-layout '${layout}'`);
      return 2;
    }
    const checkpoint = JSON.parse(readFileSync(args.get("checkpoint")!, "utf-8"));
    const doc = exportCheckpoint(checkpoint, {
      numClasses: Number(args.get("num-classes")),
      name: args.get("name"),
      keyMap: parseKeyMap(args.get("key-map") ?? ""),
      mappingLayout: layout,
    });
    writeFileSync(args.get("out")!, JSON.stringify(doc, null, 2) + "\n");
    console.log(
      `wrote ${args.get("out")}: ${doc.num_classes * doc.luts_per_class} LUTs, ` +
        `${doc.num_features}x${doc.bits_per_feature} encoder bits`,
    );
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
