/**
 * Synthetic checkpoints for tests and demos.
 *
 * smallFixture pairs a checkpoint with a hand-written reference model:
 * the exported document must match it field for field and infer
 * identically through the Python toolkit.
 */

import { Checkpoint } from "./checkpoint.js";
import { ModelDocument } from "./schema.js";

export interface Fixture {
  checkpoint: Checkpoint;
  reference: ModelDocument;
  /** tiny dataset rows (features then label) exercising every feature range */
  datasetCsv: string;
}

export function smallFixture(): Fixture {
  // F=2 features, T=3 thresholds, k=2, C=2 classes, 2 LUTs per class.
  // Checkpoint mapping is threshold-major (flat = j*F + f); the reference
  // connections below are the same pairs in the f*T + j flattening.
  const checkpoint: Checkpoint = {
    thresholds: [
      [-0.5, 0.0, 0.5],
      [-0.25, 0.25, 0.75],
    ],
    weights: [
      [0.3, -0.2, 0.0, 1.5], // bits 1001 -> "9"
      [-1.0, 2.0, 3.0, -4.0], // bits 0110 -> "6"
      [5.0, 5.0, -5.0, 5.0], // bits 1011 -> "b"
      [-0.1, -0.2, 0.7, 0.0], // bits 0100 -> "4"
    ],
    mapping: [
      [0, 5], // (f0,j0), (f1,j2)
      [1, 4], // (f1,j0), (f0,j2)
      [2, 3], // (f0,j1), (f1,j1)
      [5, 0], // (f1,j2), (f0,j0)
    ],
  };

  const reference: ModelDocument = {
    name: "fixture-small",
    num_features: 2,
    bits_per_feature: 3,
    lut_arity: 2,
    num_classes: 2,
    luts_per_class: 2,
    threshold_format: { mode: "real" },
    thresholds: [
      [-0.5, 0.0, 0.5],
      [-0.25, 0.25, 0.75],
    ],
    connections: [
      [0, 5],
      [3, 2],
      [1, 4],
      [5, 0],
    ],
    truth_tables: ["9", "6", "b", "4"],
  };

  const rows = [
    [-0.9, -0.9, 0],
    [-0.4, 0.1, 0],
    [0.1, 0.3, 1],
    [0.6, 0.8, 1],
    [0.0, -0.25, 0],
    [0.5, 0.75, 1],
    [-0.5, 0.9, 0],
    [0.9, -0.5, 1],
  ];
  const datasetCsv = rows.map((r) => r.join(",")).join("\n") + "\n";

  return { checkpoint, reference, datasetCsv };
}

/** Checkpoint at the published sm-50 scale: L=50, k=6, C=5 -> 10 LUTs/class. */
export function sm50Fixture(seed = 1234): Checkpoint {
  let state = seed >>> 0;
  const next = () => {
    // xorshift32; deterministic fixtures without a RNG dependency
    state ^= state << 13;
    state ^= state >>> 17;
    state ^= state << 5;
    state >>>= 0;
    return state / 0xffffffff;
  };
  const F = 16;
  const T = 20;
  const L = 50;
  const k = 6;
  const thresholds = Array.from({ length: F }, () => {
    const row = Array.from({ length: T }, () => next() * 1.8 - 0.9);
    row.sort((a, b) => a - b);
    for (let j = 1; j < T; j++) {
      if (row[j] <= row[j - 1]) row[j] = row[j - 1] + 1e-9;
    }
    return row;
  });
  const weights = Array.from({ length: L }, () =>
    Array.from({ length: 1 << k }, () => next() * 2 - 1),
  );
  const mapping = Array.from({ length: L }, () =>
    Array.from({ length: k }, () => Math.floor(next() * F * T)),
  );
  return { thresholds, weights, mapping };
}
