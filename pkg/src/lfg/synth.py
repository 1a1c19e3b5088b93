"""Synthetic demo datasets, usable as Dataset objects or written to CSV.

``python -m lfg.synth planted out.csv`` / ``python -m lfg.synth shellfish out.csv``
produce ready-to-run inputs for the CLI.
"""

from __future__ import annotations

import argparse
import csv

import numpy as np

from .data import Dataset


def make_planted_interaction(n: int = 300, seed: int = 0, flip: float = 0.10) -> Dataset:
    """Binary task whose label is the sign of f1*f2 plus label noise.

    f1 and f2 are signed magnitudes bounded away from zero, so their product
    separates the classes cleanly once made explicit; the four distractors
    are two-cluster columns that dominate plain nearest-neighbor distance
    until then.
    """
    rng = np.random.default_rng(seed)
    f1 = rng.choice([-1.0, 1.0], n) * rng.uniform(0.5, 2.0, n)
    f2 = rng.choice([-1.0, 1.0], n) * rng.uniform(0.5, 2.0, n)
    distractors = [
        3.0 * rng.integers(0, 2, n) + rng.normal(scale=0.05, size=n) for _ in range(4)
    ]
    X = np.column_stack([f1, f2, *distractors])
    y = (f1 * f2 > 0).astype(np.int64)
    y = np.where(rng.random(n) < flip, 1 - y, y)
    return Dataset(
        columns=("f1", "f2", "n1", "n2", "n3", "n4"),
        matrix=X,
        labels=y,
        n_classes=2,
        label_names=("neg", "pos"),
        source=f"synth:planted(n={n},seed={seed})",
    )


def make_shellfish(n: int = 4177, seed: int = 11) -> Dataset:
    """Stand-in for a shellfish-measurement table: 8 correlated morphometric
    columns and a 3-way age-band label (n defaults to 4177 rows)."""
    rng = np.random.default_rng(seed)
    age = rng.gamma(shape=5.0, scale=2.0, size=n)
    size = 1.0 - np.exp(-age / 8.0)
    noise = lambda s: rng.normal(scale=s, size=n)

    sex_code = rng.integers(0, 3, n).astype(np.float64)
    length = 0.8 * size + noise(0.06)
    diameter = 0.64 * size + noise(0.05)
    height = 0.22 * size + noise(0.03)
    whole = 1.9 * size**2.8 + noise(0.10)
    shucked = 0.44 * whole + noise(0.06)
    viscera = 0.23 * whole + noise(0.04)
    shell = 0.28 * whole + noise(0.05)

    X = np.column_stack(
        [sex_code, length, diameter, height, whole, shucked, viscera, shell]
    )
    bands = np.quantile(age, [1 / 3, 2 / 3])
    y = np.digitize(age, bands).astype(np.int64)
    jitter = rng.random(n) < 0.55
    y = np.where(jitter, np.clip(y + rng.choice([-1, 1], n), 0, 2), y)
    return Dataset(
        columns=(
            "sex_code",
            "length",
            "diameter",
            "height",
            "whole_weight",
            "shucked_weight",
            "viscera_weight",
            "shell_weight",
        ),
        matrix=X,
        labels=y,
        n_classes=3,
        label_names=("young", "adult", "old"),
        source=f"synth:shellfish(n={n},seed={seed})",
    )


def write_csv(d: Dataset, path, label_column: str = "label"):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*d.columns, label_column])
        names = d.label_names or tuple(str(c) for c in range(d.n_classes))
        for i in range(d.n_samples):
            writer.writerow([repr(float(v)) for v in d.matrix[i]] + [names[d.labels[i]]])


def main(argv=None):
    parser = argparse.ArgumentParser(description="generate a synthetic demo CSV")
    parser.add_argument("kind", choices=["planted", "shellfish"])
    parser.add_argument("out")
    parser.add_argument("--rows", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if args.kind == "planted":
        d = make_planted_interaction(n=args.rows or 300, seed=args.seed)
    else:
        d = make_shellfish(n=args.rows or 4177, seed=args.seed)
    write_csv(d, args.out)
    print(f"wrote {d.n_samples} rows x {d.n_features} features to {args.out}")


if __name__ == "__main__":
    main()
