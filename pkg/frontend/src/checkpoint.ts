/**
 * Checkpoint access: named tensors in a JSON document.
 *
 * Training stacks disagree on tensor names, so lookups go through a
 * key map from the canonical names (thresholds, weights, mapping) to
 * whatever the checkpoint actually uses.
 */

export type Matrix = number[][];

export interface Checkpoint {
  [key: string]: unknown;
}

export const CANONICAL_KEYS = ["thresholds", "weights", "mapping"] as const;
export type CanonicalKey = (typeof CANONICAL_KEYS)[number];

export type KeyMap = Partial<Record<CanonicalKey, string>>;

export class CheckpointError extends Error {}

export function parseKeyMap(text: string): KeyMap {
  const map: KeyMap = {};
  if (!text.trim()) return map;
  for (const pair of text.split(",")) {
    const eq = pair.indexOf("=");
    if (eq < 0) {
      throw new CheckpointError(`bad --key-map entry '${pair}' (want canonical=checkpointKey)`);
    }
    const canonical = pair.slice(0, eq).trim() as CanonicalKey;
    if (!CANONICAL_KEYS.includes(canonical)) {
      throw new CheckpointError(
        `unknown canonical tensor '${canonical}' (expected one of ${CANONICAL_KEYS.join(", ")})`,
      );
    }
    map[canonical] = pair.slice(eq + 1).trim();
  }
  return map;
}

export function getMatrix(
  checkpoint: Checkpoint,
  canonical: CanonicalKey,
  keyMap: KeyMap,
): Matrix {
  const key = keyMap[canonical] ?? canonical;
  const raw = checkpoint[key];
  if (raw === undefined) {
    throw new CheckpointError(`missing tensor '${key}' (${canonical})`);
  }
  if (!Array.isArray(raw) || raw.length === 0 || !Array.isArray(raw[0])) {
    throw new CheckpointError(`tensor '${key}' is not a non-empty 2-D array`);
  }
  const width = (raw[0] as unknown[]).length;
  for (const [r, row] of (raw as unknown[][]).entries()) {
    if (!Array.isArray(row) || row.length !== width) {
      throw new CheckpointError(`tensor '${key}' is ragged at row ${r}`);
    }
    for (const v of row) {
      if (typeof v !== "number") {
        throw new CheckpointError(`tensor '${key}' has a non-numeric cell at row ${r}`);
      }
    }
  }
  return raw as Matrix;
}
