#!/usr/bin/env python3
"""Regenerate the CSV files under data/.

Everything here is either enumerated exactly from the problem definition
(tictactoe, balance, monks*), sampled from a fixed-seed generator (led7*,
the menagerie fixture's filler columns), or derived from datasets bundled
with scikit-learn (iris, wine, wdbc, diabetes).  Numeric attributes are
discretized with equal-frequency bins so the classifiers downstream only
ever see categorical data.

Run from the repository root:  python3 scripts/generate_datasets.py
"""

import csv
import os
import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "data")


def write_csv(name, header, rows):
    path = os.path.join(OUT, name)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"{name}: {len(rows)} rows")


def ef_bins(values, k):
    """Equal-frequency bin labels q1..qk (duplicate edges merged)."""
    qs = np.quantile(values, [i / k for i in range(1, k)])
    edges = sorted(set(qs))
    idx = np.searchsorted(edges, values, side="right")
    return [f"q{i + 1}" for i in idx]


def discretize(data, names, k):
    cols = [ef_bins(data[:, j], k) for j in range(data.shape[1])]
    rows = [[cols[j][i] for j in range(len(names))] for i in range(len(data))]
    return rows


# --- tic-tac-toe endgames: every board reachable in play, x moves first ---

LINES = [(0, 1, 2), (3, 4, 5), (6, 7, 8),
         (0, 3, 6), (1, 4, 7), (2, 5, 8),
         (0, 4, 8), (2, 4, 6)]


def winner(board):
    for a, b, c in LINES:
        if board[a] != "b" and board[a] == board[b] == board[c]:
            return board[a]
    return None


def tictactoe():
    boards = {}

    def play(board, to_move):
        w = winner(board)
        if w is not None or "b" not in board:
            boards[tuple(board)] = "positive" if w == "x" else "negative"
            return
        for i in range(9):
            if board[i] == "b":
                board[i] = to_move
                play(board, "o" if to_move == "x" else "x")
                board[i] = "b"

    play(["b"] * 9, "x")
    rows = sorted([list(b) + [cls] for b, cls in boards.items()])
    assert len(rows) == 958, len(rows)
    assert sum(r[-1] == "positive" for r in rows) == 626
    header = ["tl", "tm", "tr", "ml", "mm", "mr", "bl", "bm", "br", "class"]
    write_csv("tictactoe.csv", header, rows)


# --- LED display: 7 boolean segments, each flipped with given probability ---

DIGITS = [
    (1, 1, 1, 0, 1, 1, 1), (0, 0, 1, 0, 0, 1, 0), (1, 0, 1, 1, 1, 0, 1),
    (1, 0, 1, 1, 0, 1, 1), (0, 1, 1, 1, 0, 1, 0), (1, 1, 0, 1, 0, 1, 1),
    (1, 1, 0, 1, 1, 1, 1), (1, 0, 1, 0, 0, 1, 0), (1, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 0, 1, 1),
]


def led7(name, noise, n, seed):
    rng = np.random.RandomState(seed)
    rows = []
    for _ in range(n):
        d = rng.randint(10)
        segs = [s ^ (rng.rand() < noise) for s in DIGITS[d]]
        rows.append([f"{int(s)}" for s in segs] + [str(d)])
    write_csv(name, [f"s{i}" for i in range(1, 8)] + ["class"], rows)


# --- balance scale: class by comparing left/right torque ---

def balance():
    rows = []
    for lw in range(1, 6):
        for ld in range(1, 6):
            for rw in range(1, 6):
                for rd in range(1, 6):
                    t = lw * ld - rw * rd
                    cls = "L" if t > 0 else ("R" if t < 0 else "B")
                    rows.append([str(lw), str(ld), str(rw), str(rd), cls])
    write_csv("balance.csv", ["lw", "ld", "rw", "rd", "class"], rows)


# --- the two noiseless MONK's problems over their full attribute space ---

def monks():
    space = [(a1, a2, a3, a4, a5, a6)
             for a1 in (1, 2, 3) for a2 in (1, 2, 3) for a3 in (1, 2)
             for a4 in (1, 2, 3) for a5 in (1, 2, 3, 4) for a6 in (1, 2)]
    header = [f"a{i}" for i in range(1, 7)] + ["class"]
    rows1 = [[*map(str, a), "yes" if a[0] == a[1] or a[4] == 1 else "no"]
             for a in space]
    rows2 = [[*map(str, a), "yes" if sum(v == 1 for v in a) == 2 else "no"]
             for a in space]
    write_csv("monks1.csv", header, rows1)
    write_csv("monks2.csv", header, rows2)


# --- hand-built animal-taxonomy fixture used by the golden-value tests ---
#
# 101 rows whose joint distribution over (backbone, breathes, feathers,
# milk, type) matches the classic animal-classification table, plus nine
# independent uniform filler attributes of three values each, so a
# one-hot binarization yields exactly 4*2 + 9*3 = 35 items over 7 classes.

def menagerie():
    groups = [
        # type, count, backbone, breathes, feathers, milk
        ("mammal", 41, "yes", "yes", "no", "yes"),
        ("bird", 20, "yes", "yes", "yes", "no"),
        ("fish", 13, "yes", "no", "no", "no"),
        ("reptile", 4, "yes", "yes", "no", "no"),
        ("reptile", 1, "yes", "no", "no", "no"),   # the sea snake
        ("amphibian", 4, "yes", "yes", "no", "no"),
        ("bug", 8, "no", "yes", "no", "no"),
        ("invertebrate", 6, "no", "no", "no", "no"),
        ("invertebrate", 4, "no", "yes", "no", "no"),
    ]
    rng = np.random.RandomState(7)
    rows = []
    for cls, n, bb, br, fe, mi in groups:
        for _ in range(n):
            filler = [chr(ord("a") + rng.randint(3)) for _ in range(9)]
            rows.append([bb, br, fe, mi] + filler + [cls])
    rng.shuffle(rows)
    header = (["backbone", "breathes", "feathers", "milk"]
              + [f"f{i}" for i in range(1, 10)] + ["type"])
    for j in range(4, 13):  # every filler value must actually occur
        assert len({r[j] for r in rows}) == 3
    write_csv("menagerie.csv", header, rows)


# --- discretized versions of scikit-learn's bundled numeric datasets ---

def sklearn_sets():
    from sklearn.datasets import (load_iris, load_wine,
                                  load_breast_cancer, load_diabetes)

    iris = load_iris()
    names = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    rows = discretize(iris.data, names, 3)
    for i, t in enumerate(iris.target):
        rows[i].append(iris.target_names[t])
    write_csv("iris.csv", names + ["class"], rows)

    wine = load_wine()
    names = [n.replace("/", "_") for n in wine.feature_names]
    rows = discretize(wine.data, names, 3)
    for i, t in enumerate(wine.target):
        rows[i].append(f"cultivar{t + 1}")
    write_csv("wine.csv", names + ["class"], rows)

    wdbc = load_breast_cancer()
    names = [n.replace(" ", "_") for n in wdbc.feature_names]
    rows = discretize(wdbc.data, names, 3)
    for i, t in enumerate(wdbc.target):
        rows[i].append(wdbc.target_names[t])  # malignant / benign
    write_csv("wdbc.csv", names + ["class"], rows)

    diab = load_diabetes(scaled=False)
    rows = discretize(diab.data, diab.feature_names, 3)
    med = np.median(diab.target)
    for i, t in enumerate(diab.target):
        rows[i].append("high" if t > med else "low")
    write_csv("diabetes.csv", list(diab.feature_names) + ["class"], rows)


# --- pure label noise: attributes carry no information about the class ---

def noise2():
    rng = np.random.RandomState(11)
    rows = []
    for _ in range(400):
        attrs = [chr(ord("a") + rng.randint(4)) for _ in range(8)]
        rows.append(attrs + ["pos" if rng.rand() < 0.5 else "neg"])
    write_csv("noise2.csv", [f"x{i}" for i in range(1, 9)] + ["class"], rows)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    tictactoe()
    led7("led7.csv", 0.10, 3200, 1)
    led7("led7n20.csv", 0.20, 3200, 2)
    balance()
    monks()
    menagerie()
    sklearn_sets()
    noise2()
