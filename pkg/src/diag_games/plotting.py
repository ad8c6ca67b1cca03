"""Figures for experiment tables."""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.5, 3.6),
    "savefig.dpi": 150,
}


def plot_table(rows, path, title: str = "") -> Path:
    """Queries against m, one series per n.

    Measured counts are solid with markers, the closed form dashed, and exact
    oracle values drawn as open circles where available.
    """
    path = Path(path)
    by_n = defaultdict(list)
    for r in rows:
        by_n[r.n].append(r)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
        for k, (n, series) in enumerate(sorted(by_n.items())):
            c = colors[k % len(colors)]
            series.sort(key=lambda r: r.m)
            measured = [(r.m, r.queries) for r in series if r.queries is not None]
            formula = [(r.m, r.formula) for r in series if r.formula is not None]
            exact = [(r.m, r.oracle) for r in series if r.oracle is not None]
            if measured:
                ax.plot(*zip(*measured), "-", marker=".", color=c, label=f"n={n} played")
            if formula:
                ax.plot(*zip(*formula), "--", color=c, alpha=0.6, label=f"n={n} formula")
            if exact:
                ax.plot(*zip(*exact), "o", mfc="none", color=c, label=f"n={n} exact")
        ax.set_xlabel("m (vectors)")
        ax.set_ylabel("queries")
        if title:
            ax.set_title(title)
        if by_n:
            ax.legend(frameon=False, ncol=2)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path
