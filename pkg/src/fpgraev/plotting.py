"""Figures written next to the delimited CLI output."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib
import matplotlib.ticker

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def figure_size(scale: float = 1.0) -> tuple[float, float]:
    width = 6.0 * scale
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    return width, width * golden


def plot_bench(rows: Sequence[tuple[int, float]], path, title: str = "") -> Path:
    """Wall time of the interval recurrence against word length."""
    lengths = [r[0] for r in rows]
    seconds = [r[1] for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size())
        ax.plot(lengths, seconds, marker="o", color="tab:blue", label="measured")
        if lengths and seconds[-1] > 0:
            # cubic reference through the last point
            ref = [seconds[-1] * (n / lengths[-1]) ** 3 for n in lengths]
            ax.plot(lengths, ref, ls="--", color="0.5", label="cubic reference")
        if lengths and min(seconds) > 0:
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xticks(lengths, [str(n) for n in lengths])
            ax.xaxis.set_minor_locator(matplotlib.ticker.NullLocator())
        ax.set_xlabel("reduced word length")
        ax.set_ylabel("seconds")
        ax.set_title(title or "prenorm by interval recurrence")
        ax.legend(frameon=False)
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out)
        plt.close(fig)
    return out


def plot_conditions(labels: Sequence[str], conditions: Sequence[str], values, path) -> Path:
    """Heat map of condition truth values, one row per space."""
    with plt.rc_context(STYLE):
        height = max(1.5, 0.35 * len(labels) + 1.0)
        fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(conditions) + 3.0), height))
        data = [[1 if v else 0 for v in row] for row in values]
        im = ax.imshow(data, cmap="RdYlGn", vmin=0, vmax=1, aspect="auto")
        bar = fig.colorbar(im, ax=ax, ticks=[0, 1], fraction=0.05)
        bar.ax.set_yticklabels(["false", "true"])
        ax.set_xticks(range(len(conditions)), [f"({c})" for c in conditions])
        ax.set_yticks(range(len(labels)), labels)
        ax.set_xlabel("condition")
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out)
        plt.close(fig)
    return out
