/**
 * Model JSON schema shared with the dwngen toolkit.
 *
 * The Python side's load_model is the authoritative validator; this zod
 * mirror catches malformed exports before they leave this package and
 * gives the exporter a typed document to build.
 */

import { z } from "zod";

export const thresholdFormatSchema = z.union([
  z.object({ mode: z.literal("real") }),
  z.object({ mode: z.literal("fixed"), frac_bits: z.number().int().min(1) }),
]);

export const modelDocumentSchema = z
  .object({
    name: z.string(),
    num_features: z.number().int().min(1),
    bits_per_feature: z.number().int().min(1),
    lut_arity: z.number().int().min(2).max(6),
    num_classes: z.number().int().min(1),
    luts_per_class: z.number().int().min(1),
    threshold_format: thresholdFormatSchema,
    thresholds: z.array(z.array(z.number())),
    connections: z.array(z.array(z.number().int().min(0))),
    truth_tables: z.array(z.string().regex(/^[0-9a-f]+$/)),
  })
  .superRefine((doc, ctx) => {
    const { num_features: F, bits_per_feature: T, lut_arity: k } = doc;
    const L = doc.num_classes * doc.luts_per_class;
    if (doc.thresholds.length !== F) {
      ctx.addIssue({ code: "custom", message: `thresholds must have ${F} rows` });
    }
    for (const [f, row] of doc.thresholds.entries()) {
      if (row.length !== T) {
        ctx.addIssue({ code: "custom", message: `thresholds[${f}] must have ${T} entries` });
      }
      for (let j = 1; j < row.length; j++) {
        if (!(row[j] > row[j - 1])) {
          ctx.addIssue({
            code: "custom",
            message: `thresholds[${f}] not strictly ascending at column ${j}`,
          });
        }
      }
    }
    if (doc.connections.length !== L) {
      ctx.addIssue({ code: "custom", message: `connections must have ${L} rows` });
    }
    for (const [i, row] of doc.connections.entries()) {
      if (row.length !== k) {
        ctx.addIssue({ code: "custom", message: `connections[${i}] must have ${k} entries` });
      }
      for (const e of row) {
        if (e >= F * T) {
          ctx.addIssue({
            code: "custom",
            message: `connections[${i}] index ${e} out of range [0, ${F * T})`,
          });
        }
      }
    }
    const digits = Math.max(1, (1 << k) / 4);
    if (doc.truth_tables.length !== L) {
      ctx.addIssue({ code: "custom", message: `truth_tables must have ${L} entries` });
    }
    for (const [i, table] of doc.truth_tables.entries()) {
      if (table.length !== digits) {
        ctx.addIssue({
          code: "custom",
          message: `truth_tables[${i}] must be ${digits} hex digits`,
        });
      }
    }
  });

export type ModelDocument = z.infer<typeof modelDocumentSchema>;
