#!/usr/bin/env python3
"""Convert the UCI WiFi and HAR downloads into headered CSV for sdrc.

    prepare_uci.py wifi wifi_localization.txt data/wifi.csv
    prepare_uci.py har "UCI HAR Dataset" data/har.csv [--split train|test|all]
"""

import argparse
import csv
import sys
from pathlib import Path


def read_rows(path):
    with open(path) as f:
        return [line.split() for line in f if line.strip()]


def wifi(args):
    rows = read_rows(args.src)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        sys.exit(f"{args.src}: ragged rows")
    header = [f"w{i + 1}" for i in range(width - 1)] + ["room"]
    write(args.dst, header, rows)


def har(args):
    root = Path(args.src)
    names = dict(read_rows(root / "activity_labels.txt"))
    splits = ["train", "test"] if args.split == "all" else [args.split]
    rows = []
    for split in splits:
        x = read_rows(root / split / f"X_{split}.txt")
        y = read_rows(root / split / f"y_{split}.txt")
        if len(x) != len(y):
            sys.exit(f"{split}: {len(x)} feature rows but {len(y)} labels")
        rows += [feat + [names[lab[0]]] for feat, lab in zip(x, y)]
    header = [f"f{i + 1}" for i in range(len(rows[0]) - 1)] + ["activity"]
    write(args.dst, header, rows)


def write(dst, header, rows):
    Path(dst).parent.mkdir(parents=True, exist_ok=True)
    with open(dst, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{dst}: {len(rows)} rows, {len(header) - 1} features")


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="dataset", required=True)
    w = sub.add_parser("wifi")
    w.add_argument("src")
    w.add_argument("dst")
    w.set_defaults(run=wifi)
    h = sub.add_parser("har")
    h.add_argument("src", help="extracted 'UCI HAR Dataset' directory")
    h.add_argument("dst")
    h.add_argument("--split", choices=["train", "test", "all"], default="train")
    h.set_defaults(run=har)
    args = p.parse_args()
    args.run(args)


if __name__ == "__main__":
    main()
