#!/usr/bin/env python3
"""Plot a sweep CSV produced by `sagin sweep` (one line per CSI type).

Usage: plot_sweep.py data.csv out.png
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

AXIS_CANDIDATES = ("ms", "kd", "n")


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    rows = list(csv.DictReader(open(sys.argv[1], newline="")))
    if not rows:
        print("empty sweep", file=sys.stderr)
        return 1

    axis = next(
        (c for c in AXIS_CANDIDATES if len({r[c] for r in rows}) > 1),
        "ms",
    )
    curves = defaultdict(list)
    for r in rows:
        dof = int(r["dof_num"]) / int(r["dof_den"])
        curves[r["csi"]].append((int(r[axis]), dof))

    fig, ax = plt.subplots(figsize=(6, 4))
    for csi, points in curves.items():
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points], marker=".", label=csi)
    ax.set_xlabel(axis)
    ax.set_ylabel("sum DoF")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)
    print(f"wrote {sys.argv[2]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
