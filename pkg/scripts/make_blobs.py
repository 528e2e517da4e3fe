#!/usr/bin/env python3
"""Generate a synthetic Gaussian-blob classification CSV.

The output matches the toolkit's dataset format: feature columns followed
by one integer label column, no header.

    python scripts/make_blobs.py --samples 500 --features 16 --classes 5 \
        --seed 7 --out blobs.csv
"""

import argparse

import numpy as np

from dwngen.model import save_dataset
from dwngen.trainer import gaussian_blobs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--features", type=int, default=16)
    ap.add_argument("--classes", type=int, default=5)
    ap.add_argument("--spread", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    data = gaussian_blobs(args.samples, args.features, args.classes, rng, spread=args.spread)
    with open(args.out, "w") as f:
        f.write(save_dataset(data))
    print(f"wrote {args.out}: {args.samples} samples, {args.features} features, {args.classes} classes")


if __name__ == "__main__":
    main()
