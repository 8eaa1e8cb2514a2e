"""Figure rendering for the command-line reports.

Curves and fronts are drawn with matplotlib and written next to the CSV
output. SVG bytes are kept reproducible: fixed hash salt, no embedded date.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SVG_METADATA = {"Date": None}


def _new_axes(xlabel: str, ylabel: str, title: str):
    plt.rcParams["svg.hashsalt"] = "arslie"
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str) -> None:
    if str(path).endswith(".svg"):
        fig.savefig(path, metadata=_SVG_METADATA)
    else:
        fig.savefig(path)
    plt.close(fig)


def save_curve(path: str, xs, ys, xlabel: str, ylabel: str, title: str) -> None:
    fig, ax = _new_axes(xlabel, ylabel, title)
    ax.plot(np.asarray(xs), np.asarray(ys), lw=1.2)
    _save(fig, path)


def save_points(path: str, points, xlabel: str, ylabel: str, title: str) -> None:
    pts = np.asarray(points)
    fig, ax = _new_axes(xlabel, ylabel, title)
    if len(pts):
        ax.plot(pts[:, 0], pts[:, 1], "o", ms=3)
    _save(fig, path)
