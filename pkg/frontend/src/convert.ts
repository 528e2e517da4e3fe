/**
 * Checkpoint-to-model conversion.
 *
 * A checkpoint holds per-feature thresholds (F x T), a binarizable
 * LUT-weight tensor (L x 2^k, entry a scoring table address a), and an
 * input-mapping tensor (L x k) of flat encoder-bit indices.  The export
 * binarizes weights by sign (bit = w > 0), converts mapping indices to
 * the toolkit's feature-major flattening (bit = f*T + j), infers
 * luts_per_class from L and the class-count hint, and emits thresholds
 * as real values for the toolkit's own quantization stage.
 */

import { Checkpoint, CheckpointError, KeyMap, getMatrix } from "./checkpoint.js";
import { ModelDocument, modelDocumentSchema } from "./schema.js";

export type MappingLayout = "threshold-major" | "feature-major";

export interface ExportHints {
  numClasses: number;
  name?: string;
  keyMap?: KeyMap;
  /** How the checkpoint flattens (feature, threshold) pairs; training
   *  stacks that stack per-threshold planes index bits as j*F + f,
   *  hence the default. */
  mappingLayout?: MappingLayout;
}

function log2Exact(value: number): number | null {
  const k = Math.log2(value);
  return Number.isInteger(k) ? k : null;
}

export function binarizeWeights(weights: number[][], tensorName: string): string[] {
  const entries = weights[0].length;
  const digits = Math.max(1, entries / 4);
  return weights.map((row, i) => {
    let table = 0n;
    for (const [a, w] of row.entries()) {
      if (!Number.isFinite(w)) {
        throw new CheckpointError(
          `non-binarizable weight at [${i}][${a}] of tensor '${tensorName}'`,
        );
      }
      if (w > 0) table |= 1n << BigInt(a);
    }
    return table.toString(16).padStart(digits, "0");
  });
}

export function convertMappingIndex(
  flat: number,
  numFeatures: number,
  bitsPerFeature: number,
  layout: MappingLayout,
): number {
  const total = numFeatures * bitsPerFeature;
  if (!Number.isInteger(flat) || flat < 0 || flat >= total) {
    throw new CheckpointError(`mapping index ${flat} out of range [0, ${total})`);
  }
  if (layout === "feature-major") {
    return flat;
  }
  // threshold-major source: flat = j*F + f  ->  feature-major f*T + j
  const j = Math.floor(flat / numFeatures);
  const f = flat % numFeatures;
  return f * bitsPerFeature + j;
}

export function exportCheckpoint(checkpoint: Checkpoint, hints: ExportHints): ModelDocument {
  const keyMap = hints.keyMap ?? {};
  const layout = hints.mappingLayout ?? "threshold-major";
  const thresholds = getMatrix(checkpoint, "thresholds", keyMap);
  const weights = getMatrix(checkpoint, "weights", keyMap);
  const mapping = getMatrix(checkpoint, "mapping", keyMap);

  const F = thresholds.length;
  const T = thresholds[0].length;
  const L = weights.length;
  const k = log2Exact(weights[0].length);
  if (k === null || k < 2 || k > 6) {
    throw new CheckpointError(
      `weight tensor rows have ${weights[0].length} entries; expected 2^k with k in 2..6`,
    );
  }
  if (mapping.length !== L || mapping[0].length !== k) {
    throw new CheckpointError(
      `mapping shape ${mapping.length}x${mapping[0].length} does not match weights LxK = ${L}x${k}`,
    );
  }
  const C = hints.numClasses;
  if (!Number.isInteger(C) || C < 1) {
    throw new CheckpointError(`num_classes hint must be a positive integer, got ${C}`);
  }
  if (L % C !== 0) {
    throw new CheckpointError(`${L} LUTs do not divide evenly into ${C} classes`);
  }

  const doc: ModelDocument = {
    name: hints.name ?? "exported",
    num_features: F,
    bits_per_feature: T,
    lut_arity: k,
    num_classes: C,
    luts_per_class: L / C,
    threshold_format: { mode: "real" },
    thresholds,
    connections: mapping.map((row) => row.map((m) => convertMappingIndex(m, F, T, layout))),
    truth_tables: binarizeWeights(weights, keyMap.weights ?? "weights"),
  };
  return modelDocumentSchema.parse(doc);
}
