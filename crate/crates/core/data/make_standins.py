"""Regenerates the synthetic stand-in CSV files in this directory.

The files mimic the schema and group sizes of two public clinical datasets
(heart-failure survival, 299 rows; breast-cancer diagnosis, 569 rows). All
values are synthetic. Run with any Python 3; the output is deterministic.
"""

import csv
import math
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


def heart_failure(rng):
    rows = []
    events = [0] * 203 + [1] * 96
    rng.shuffle(events)
    for death in events:
        age = round(clamp(rng.gauss(65 if death else 58.5, 13 if death else 10.5), 40, 95))
        cpk = round(clamp(math.exp(rng.gauss(5.9, 0.95)), 23, 7861))
        ef = round(clamp(rng.gauss(33.5 if death else 40.3, 12.5 if death else 10.9), 14, 80))
        platelets = int(round(clamp(rng.gauss(263000, 97000), 25100, 850000), -2))
        creat = round(clamp(math.exp(rng.gauss(0.45 if death else 0.12, 0.45 if death else 0.3)), 0.5, 9.4), 2)
        sodium = round(clamp(rng.gauss(135.4 if death else 137.2, 5 if death else 4), 113, 148))
        time = round(clamp(rng.gauss(70 if death else 158, 62 if death else 67), 4, 285))
        rows.append([
            age,
            int(rng.random() < (0.48 if death else 0.41)),
            cpk,
            int(rng.random() < 0.42),
            ef,
            int(rng.random() < (0.41 if death else 0.33)),
            platelets,
            creat,
            sodium,
            int(rng.random() < 0.65),
            int(rng.random() < 0.32),
            time,
            death,
        ])
    header = [
        "age", "anaemia", "creatinine_phosphokinase", "diabetes", "ejection_fraction",
        "high_blood_pressure", "platelets", "serum_creatinine", "serum_sodium", "sex",
        "smoking", "time", "DEATH_EVENT",
    ]
    return header, rows


BASES = [
    # name, benign mean, malignant mean, relative spread
    ("radius", 12.1, 17.5, 0.15),
    ("texture", 17.9, 21.6, 0.2),
    ("perimeter", 78.1, 115.4, 0.15),
    ("area", 462.8, 978.4, 0.3),
    ("smoothness", 0.0925, 0.1029, 0.12),
    ("compactness", 0.080, 0.145, 0.35),
    ("concavity", 0.046, 0.161, 0.5),
    ("concave points", 0.0257, 0.0880, 0.4),
    ("symmetry", 0.174, 0.193, 0.13),
    ("fractal_dimension", 0.0629, 0.0627, 0.1),
]


def breast_cancer(rng):
    labels = ["B"] * 357 + ["M"] * 212
    rng.shuffle(labels)
    rows = []
    for i, diag in enumerate(labels):
        size = rng.gauss(0, 1)
        means, ses, worsts = [], [], []
        for _, b, m, spread in BASES:
            centre = m if diag == "M" else b
            v = centre * math.exp(spread * (0.7 * size + 0.7 * rng.gauss(0, 1)))
            means.append(round(v, 5))
            ses.append(round(v * clamp(rng.gauss(0.08, 0.03), 0.01, 0.3), 5))
            worsts.append(round(v * clamp(rng.gauss(1.25, 0.1), 1.0, 2.0), 5))
        rows.append([842302 + 977 * i, diag] + means + ses + worsts)
    header = ["id", "diagnosis"]
    for suffix in ("mean", "se", "worst"):
        header += [f"{name}_{suffix}" for name, *_ in BASES]
    return header, rows


def write(name, header, rows):
    with open(HERE / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


if __name__ == "__main__":
    write("heart_failure_standin.csv", *heart_failure(random.Random(20200203)))
    write("breast_cancer_standin.csv", *breast_cancer(random.Random(19951101)))
