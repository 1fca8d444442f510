"""Matplotlib rendering for report and sweep artifacts.

Figures land next to the delimited output of the CLI run that produced them.
PNG metadata is pinned so reruns are byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_score_distributions", "plot_tradeoff"]

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}
_BINS = np.linspace(0.0, 1.0, 41)


def _bins_for(values: list[np.ndarray]) -> np.ndarray:
    lo = min(float(v.min()) for v in values if v.size)
    hi = max(float(v.max()) for v in values if v.size)
    if 0.0 <= lo and hi <= 1.0:
        return _BINS
    pad = 0.05 * (hi - lo or 1.0)
    return np.linspace(lo - pad, hi + pad, 41)


def plot_score_distributions(
    panels: dict[str, dict[str, np.ndarray]], path: str
) -> None:
    """One axes per panel; each panel holds per-group score histograms.

    panels maps a panel title (e.g. 'original', 'adjusted') to a mapping from
    group tag to a score array.
    """
    n = len(panels)
    fig, axes = plt.subplots(1, n, figsize=(4.5 * n, 3.2), squeeze=False)
    for ax, (title, groups) in zip(axes[0], panels.items()):
        bins = _bins_for(list(groups.values()))
        for tag, scores in sorted(groups.items()):
            ax.hist(scores, bins=bins, density=True, histtype="step", label=f"group {tag}")
        ax.set_title(title)
        ax.set_xlabel("score")
        ax.set_ylabel("density")
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_tradeoff(rows, metric: str, path: str) -> None:
    """Utility (AUC) against disparity, one line per split, weights annotated."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    splits = sorted({row.split for row in rows})
    for split in splits:
        pts = [r for r in rows if r.split == split]
        xs = [r.report.disparity(metric) for r in pts]
        ys = [r.report.auc for r in pts]
        ax.plot(xs, ys, marker="o", label=split)
        for r, x, y in zip(pts, xs, ys):
            if r.kind != "lambda":
                ax.annotate(r.lambda_label(), (x, y), fontsize=7,
                            textcoords="offset points", xytext=(3, 3))
    ax.set_xlabel(f"delta_{metric}")
    ax.set_ylabel("AUC")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
