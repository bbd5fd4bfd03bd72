#!/usr/bin/env python3
"""Writes the small synthetic datasets under data/ used by the `real` command.

standin_edges:    3 edge-list layers, 3 planted groups of 20 nodes.
standin_features: 2 feature views, 3 planted groups of 30 nodes.
"""
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write_truth(path, labels):
    path.write_text("".join(f"{int(c)}\n" for c in labels))


def edges_dataset(rng):
    out = ROOT / "standin_edges"
    out.mkdir(parents=True, exist_ok=True)
    labels = rng.permutation(np.repeat(np.arange(3), 20))
    n = labels.size
    lines = ["# layer src dst"]
    # Each layer is informative about a different pair of groups.
    for layer, (p_in, p_out) in enumerate([(0.35, 0.05), (0.3, 0.06), (0.25, 0.05)]):
        for i in range(n):
            for j in range(i + 1, n):
                p = p_in if labels[i] == labels[j] else p_out
                if rng.random() < p:
                    lines.append(f"{layer} {i} {j}")
    (out / "layers.txt").write_text("\n".join(lines) + "\n")
    write_truth(out / "truth.txt", labels)


def features_dataset(rng):
    out = ROOT / "standin_features"
    out.mkdir(parents=True, exist_ok=True)
    labels = rng.permutation(np.repeat(np.arange(3), 30))
    for view, (dim, noise) in enumerate([(20, 1.0), (12, 1.4)]):
        centres = rng.normal(0.0, 1.0, size=(3, dim))
        x = centres[labels] + rng.normal(0.0, noise, size=(labels.size, dim))
        header = ",".join(f"f{d}" for d in range(dim))
        np.savetxt(out / f"features_{view}.csv", x, delimiter=",", header=header, comments="",
                   fmt="%.6f")
    write_truth(out / "truth.txt", labels)


def main():
    rng = np.random.default_rng(20240601)
    edges_dataset(rng)
    features_dataset(rng)


if __name__ == "__main__":
    main()
