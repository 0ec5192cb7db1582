"""Figure rendering for scan reports (written next to the delimited output)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_scan_figure(rows: list[dict], path: str) -> None:
    """Scatter of regulator against log10|k| for the non-degenerate rows.

    Rows with failed height computations are skipped; dependent instances
    (independent == False) are drawn with a distinct marker.
    """
    xs_ind, ys_ind, xs_dep, ys_dep = [], [], [], []
    for row in rows:
        if not row.get("regulator"):
            continue
        k = int(row["k"])
        if k == 0:
            continue
        x = math.log10(abs(k))
        y = float(row["regulator"])
        if row.get("independent"):
            xs_ind.append(x)
            ys_ind.append(y)
        else:
            xs_dep.append(x)
            ys_dep.append(y)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if xs_ind:
        ax.scatter(xs_ind, ys_ind, s=22, color="#1f6fb2", label="independent")
    if xs_dep:
        ax.scatter(xs_dep, ys_dep, s=30, color="#c23b22", marker="x", label="dependent")
    ax.set_xlabel(r"$\log_{10}|k|$")
    ax.set_ylabel("regulator")
    ax.set_title("regulator of the three constructed points per instance")
    if xs_ind or xs_dep:
        ax.legend(loc="best", frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None} if path.endswith(".png") else None)
    plt.close(fig)
