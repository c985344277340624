"""Write the benchmark datasets into data/ in the layouts the presets expect.

iris   header, four measurements, species last (from scikit-learn's bundled copy)
crab   header, FL RW CL CW BD, sex last (MASS::crabs via the Rdatasets mirror)
usps   zip.train: digit first, 256 pixels, whitespace separated
poker  poker-hand-training-true.data: ten suit/rank codes, class last

Usage: python3 scripts/fetch_data.py [--out DIR] [NAME ...]
"""

import argparse
import csv
import gzip
import io
import sys
from pathlib import Path

import requests

CRAB_URL = "https://vincentarelbundock.github.io/Rdatasets/csv/MASS/crabs.csv"
USPS_URL = "https://hastie.su.domains/ElemStatLearn/datasets/zip.train.gz"
POKER_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/poker/"
    "poker-hand-training-true.data"
)


def fetch(url):
    resp = requests.get(url, timeout=30)
    resp.raise_for_status()
    return resp.content


def iris(out):
    from sklearn.datasets import load_iris

    data = load_iris()
    with open(out / "iris.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["sepal_length", "sepal_width", "petal_length", "petal_width", "species"])
        for row, target in zip(data.data, data.target):
            w.writerow([repr(float(v)) for v in row] + [data.target_names[target]])


def crab(out):
    rows = list(csv.DictReader(io.StringIO(fetch(CRAB_URL).decode())))
    with open(out / "crab.csv", "w", newline="") as f:
        w = csv.writer(f)
        cols = ["FL", "RW", "CL", "CW", "BD"]
        w.writerow(cols + ["sex"])
        for r in rows:
            w.writerow([r[c] for c in cols] + [r["sex"]])


def usps(out):
    (out / "usps.txt").write_bytes(gzip.decompress(fetch(USPS_URL)))


def poker(out):
    (out / "poker.csv").write_bytes(fetch(POKER_URL))


DATASETS = {"iris": iris, "crab": crab, "usps": usps, "poker": poker}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("names", nargs="*", default=list(DATASETS))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.names:
        try:
            DATASETS[name](args.out)
            print(f"{name}: ok")
        except Exception as exc:  # network or parsing problems are reported, not fatal
            failed += 1
            print(f"{name}: failed ({exc})", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
