"""Matplotlib rendering of the loss curves, written next to the CSV report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import DISPLAY_NAMES

_SERIES_STYLE = {"gd": "#1f77b4", "poswise": "#d62728"}


def render_loss_figure(report: dict, path) -> Path:
    """Plot each optimizer's loss against the epoch number, PNG output."""
    fig, ax = plt.subplots(figsize=(7.2, 4.5), dpi=150)
    for kind, entry in report["optimizers"].items():
        history = entry["loss_history"]
        ax.plot(
            range(1, len(history) + 1),
            history,
            label=DISPLAY_NAMES.get(kind, kind),
            color=_SERIES_STYLE.get(kind),
            linewidth=1.6,
        )
    ax.axhline(report["threshold"], color="#777777", linestyle="--", linewidth=1.0,
               label=f"threshold {report['threshold']:.4g}")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.set_title(f"{report['dataset']} (seed {report['seed']})")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
