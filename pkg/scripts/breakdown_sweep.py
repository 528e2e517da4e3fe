#!/usr/bin/env python3
"""Sweep input bit-widths across the named model sizes and tabulate the
per-component LUT-node estimates.

Reproduces the encoder-share trend: for the small and medium sizes the
thermometer comparators dominate at every width, while for lg-2400 the
LUT layer plus popcount overtake the encoder at single-digit widths.

    python scripts/breakdown_sweep.py --widths 6,7,8,9,10,11,12 --out sweep.csv
"""

import argparse

from dwngen.model import PRESETS
from dwngen.netlist import (
    ComponentBreakdown,
    build_macro_netlist_for_shape,
    lower_to_luts,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--widths", default="6,7,8,9,10,11,12")
    ap.add_argument("--presets", default=",".join(PRESETS))
    ap.add_argument("--out", default=None, help="CSV path (default: stdout table)")
    args = ap.parse_args()

    widths = [int(w) for w in args.widths.split(",")]
    rows = []
    for preset in args.presets.split(","):
        cfg = PRESETS[preset]
        for w in widths:
            low = lower_to_luts(build_macro_netlist_for_shape(cfg, w - 1, preset))
            c = low.counts_by_label()
            rows.append(ComponentBreakdown(preset, w, c["encoder"], c["lut_layer"],
                                           c["popcount"], c["argmax"]))

    if args.out:
        with open(args.out, "w") as f:
            f.write(ComponentBreakdown.CSV_HEADER + "\n")
            f.writelines(r.to_csv_row() + "\n" for r in rows)
        print(f"wrote {args.out} ({len(rows)} rows)")
        return

    print(f"{'model':10s} {'w':>3s} {'encoder':>8s} {'lut_layer':>9s} "
          f"{'popcount':>8s} {'argmax':>6s} {'total':>8s} {'enc%':>6s}")
    for r in rows:
        share = 100.0 * r.encoder / r.total
        print(f"{r.model_name:10s} {r.input_width:3d} {r.encoder:8d} {r.lut_layer:9d} "
              f"{r.popcount:8d} {r.argmax:6d} {r.total:8d} {share:5.1f}%")


if __name__ == "__main__":
    main()
