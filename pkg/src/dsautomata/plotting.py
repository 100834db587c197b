"""State-count plots for benchmark runs."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_state_counts(rows: Sequence[dict], path: Union[str, Path], title: str = "") -> Path:
    """Created states (and the bound, where numeric) against the swept parameter."""
    labels = [r["params"] for r in rows]
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(xs, [r["states"] for r in rows], "o-", label="states created")
    bounds = [(i, r["bound"]) for i, r in enumerate(rows) if isinstance(r["bound"], int) and r["bound"] < 10**300]
    if bounds:
        ax.plot([i for i, _ in bounds], [b for _, b in bounds], "s--", label="bound")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("states")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
