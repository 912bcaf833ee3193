#!/usr/bin/env python3
"""Convert a CSV MNIST dump (784 pixel columns + label column) to IDX files
holding only the digits 3 and 6."""

import argparse
import gzip
import struct
from pathlib import Path

import numpy as np


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", type=Path, help="csv or csv.gz, label in the last column")
    ap.add_argument("--out-dir", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--digits", type=int, nargs="+", default=[3, 6])
    args = ap.parse_args()

    opener = gzip.open if args.csv.suffix == ".gz" else open
    with opener(args.csv, "rt") as f:
        rows = np.loadtxt(f, delimiter=",", dtype=np.int64)
    if rows.shape[1] != 785:
        raise SystemExit(f"expected 785 columns, found {rows.shape[1]}")
    keep = np.isin(rows[:, -1], args.digits)
    pixels = rows[keep, :-1].astype(np.uint8)
    labels = rows[keep, -1].astype(np.uint8)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    img_path = args.out_dir / "mnist36-images-idx3-ubyte"
    lbl_path = args.out_dir / "mnist36-labels-idx1-ubyte"
    with open(img_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(pixels), 28, 28))
        f.write(pixels.tobytes())
    with open(lbl_path, "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(labels.tobytes())
    counts = {d: int((labels == d).sum()) for d in args.digits}
    print(f"wrote {len(labels)} images to {args.out_dir} {counts}")


if __name__ == "__main__":
    main()
