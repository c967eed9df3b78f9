#!/usr/bin/env python3
"""Fetch and normalize the benchmark datasets into data/uci/.

Each dataset is downloaded from the UCI Machine Learning Repository (or a
stable mirror where the original is not plain CSV), converted to a plain
comma-separated file with simple machine-friendly column names, and written
to data/uci/. The repository already bundles most of these; this script is
for refreshing them or for picking up the ones that are not redistributed
here (forestfires, parkinsons_updrs).

Usage:
    python3 scripts/fetch_uci.py [--only name ...] [--dest DIR]

Needs network access. Row counts are verified after download.
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

HOUSING_COLS = ["crim", "zn", "indus", "chas", "nox", "rm", "age", "dis",
                "rad", "tax", "ptratio", "b", "lstat", "medv"]

WDBC_FEATURES = [
    "mean_radius", "mean_texture", "mean_perimeter", "mean_area",
    "mean_smoothness", "mean_compactness", "mean_concavity",
    "mean_concave_points", "mean_symmetry", "mean_fractal_dimension",
    "radius_error", "texture_error", "perimeter_error", "area_error",
    "smoothness_error", "compactness_error", "concavity_error",
    "concave_points_error", "symmetry_error", "fractal_dimension_error",
    "worst_radius", "worst_texture", "worst_perimeter", "worst_area",
    "worst_smoothness", "worst_compactness", "worst_concavity",
    "worst_concave_points", "worst_symmetry", "worst_fractal_dimension",
]

SLUMP_COLS = ["no", "cement", "slag", "fly_ash", "water", "sp",
              "coarse_aggr", "fine_aggr", "slump", "flow",
              "compressive_strength"]

WINE_COLS = ["fixed_acidity", "volatile_acidity", "citric_acid",
             "residual_sugar", "chlorides", "free_sulfur_dioxide",
             "total_sulfur_dioxide", "density", "pH", "sulphates",
             "alcohol", "quality"]


def fetch(url):
    req = urllib.request.Request(url, headers={"User-Agent": "fetch-uci/1.0"})
    with urllib.request.urlopen(req, timeout=60) as resp:
        return resp.read().decode("utf-8-sig")


def write_rows(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"  wrote {path} ({len(rows)} rows)")


def expect(name, got, want):
    if got != want:
        sys.exit(f"{name}: expected {want} rows, got {got}")


def do_housing(dest):
    # housing.data is whitespace-separated, no header
    text = fetch(f"{UCI}/housing/housing.data")
    rows = [ln.split() for ln in text.strip().splitlines()]
    expect("housing", len(rows), 506)
    write_rows(dest / "housing.csv", HOUSING_COLS, rows)


def do_wdbc(dest):
    # wdbc.data: id, diagnosis (M/B), 30 features. Encode benign as 1.
    text = fetch(f"{UCI}/breast-cancer-wisconsin/wdbc.data")
    rows = []
    for ln in text.strip().splitlines():
        parts = ln.split(",")
        rows.append(parts[2:] + ["1" if parts[1] == "B" else "0"])
    expect("wdbc", len(rows), 569)
    write_rows(dest / "wdbc.csv", WDBC_FEATURES + ["diagnosis"], rows)


def do_concrete(dest):
    # The UCI original is an .xls workbook; use a plain-CSV mirror with the
    # same 1030 rows and short column names.
    url = ("https://raw.githubusercontent.com/stedy/"
           "Machine-Learning-with-R-datasets/master/concrete.csv")
    text = fetch(url)
    lines = text.strip().splitlines()
    rows = [ln.split(",") for ln in lines[1:]]
    expect("concrete", len(rows), 1030)
    write_rows(dest / "concrete.csv",
               ["cement", "slag", "ash", "water", "superplastic",
                "coarseagg", "fineagg", "age", "strength"], rows)


def do_wine(dest, which, count):
    text = fetch(f"{UCI}/wine-quality/winequality-{which}.csv")
    lines = text.strip().splitlines()
    rows = [ln.split(";") for ln in lines[1:]]
    expect(f"{which} wine", len(rows), count)
    write_rows(dest / f"winequality-{which}.csv", WINE_COLS, rows)


def do_slump(dest):
    text = fetch(f"{UCI}/concrete/slump/slump_test.data")
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    rows = [ln.split(",") for ln in lines[1:]]
    expect("slump", len(rows), 103)
    write_rows(dest / "slump.csv", SLUMP_COLS, rows)


def do_fires(dest):
    text = fetch(f"{UCI}/forest-fires/forestfires.csv")
    lines = text.strip().splitlines()
    rows = [ln.split(",") for ln in lines[1:]]
    expect("forestfires", len(rows), 517)
    write_rows(dest / "forestfires.csv", lines[0].split(","), rows)


def do_parkinsons(dest):
    text = fetch(f"{UCI}/parkinsons/telemonitoring/parkinsons_updrs.data")
    lines = text.strip().splitlines()
    rows = [ln.split(",") for ln in lines[1:]]
    expect("parkinsons", len(rows), 5875)
    write_rows(dest / "parkinsons_updrs.csv", lines[0].split(","), rows)


JOBS = {
    "housing": do_housing,
    "wdbc": do_wdbc,
    "concrete": do_concrete,
    "red-wine": lambda d: do_wine(d, "red", 1599),
    "white-wine": lambda d: do_wine(d, "white", 4898),
    "slump": do_slump,
    "fires": do_fires,
    "parkinsons": do_parkinsons,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", choices=sorted(JOBS),
                    help="fetch just these datasets")
    ap.add_argument("--dest", default=None,
                    help="output directory (default: <repo>/data/uci)")
    args = ap.parse_args()

    dest = Path(args.dest) if args.dest else \
        Path(__file__).resolve().parent.parent / "data" / "uci"
    dest.mkdir(parents=True, exist_ok=True)

    names = args.only or sorted(JOBS)
    for name in names:
        print(f"fetching {name} ...")
        JOBS[name](dest)


if __name__ == "__main__":
    main()
