"""Matplotlib figure rendering for the report-producing CLI paths."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .zones import ZONES


def plot_confusion(matrix, path):
    """Heatmap of the 8x8 confusion counts with annotated cells."""
    counts = matrix.counts
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(counts, cmap="Blues")
    codes = [z.value for z in ZONES]
    ax.set_xticks(range(len(codes)), codes)
    ax.set_yticks(range(len(codes)), codes)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    threshold = counts.max() / 2 if counts.max() else 0
    for i in range(len(codes)):
        for j in range(len(codes)):
            ax.text(j, i, str(counts[i, j]), ha="center", va="center",
                    color="white" if counts[i, j] > threshold else "black",
                    fontsize=8)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_history(history, path):
    """Train/validation loss curves over epochs."""
    epochs = [h["epoch"] for h in history]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(epochs, [h["train_loss"] for h in history], marker="o", label="train")
    ax.plot(epochs, [h["val_loss"] for h in history], marker="s", label="validation")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_stats(report, path):
    """Grouped bar chart of sentence counts per zone, one group per source."""
    codes = [z.value for z in ZONES]
    sources = report.sources
    width = 0.8 / max(len(sources), 1)
    x = np.arange(len(codes))
    fig, ax = plt.subplots(figsize=(8, 4))
    for k, source in enumerate(sources):
        values = [report.counts.get((source, z), 0) for z in ZONES]
        ax.bar(x + k * width, values, width, label=source or "(unknown)")
    ax.set_xticks(x + width * (len(sources) - 1) / 2, codes)
    ax.set_xlabel("zone")
    ax.set_ylabel("sentences")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
