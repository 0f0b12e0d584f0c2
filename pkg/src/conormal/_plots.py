"""Static SVG figures with byte-stable output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "conormal"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def action_profile(profile, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    x = np.linspace(0.0, 1.0, 801)
    ax.plot(x, profile.S(x), lw=1.2, label="interpolated primitive")
    ax.plot(np.mod(profile.xs, 1.0), profile.ys, ".", ms=2, label="seed actions")
    ax.set_xlabel("base point")
    ax.set_ylabel("action")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def persistence_bars(dgm, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 3))
    bars = list(dgm.bars)
    for i, (b, d) in enumerate(bars):
        ax.plot([b, d], [i, i], lw=2, color="C0")
    y = len(bars)
    ax.plot([dgm.essential0], [y], ">", color="C1", label="essential 0")
    if dgm.essential1 is not None:
        ax.plot([dgm.essential1], [y + 1], ">", color="C2", label="essential 1")
    ax.set_xlabel("filtration value")
    ax.set_yticks([])
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def ratios(n, series, path, title="", hlines=()):
    """``series`` maps a label to a ratio array aligned with ``n``."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for label, r in series.items():
        ax.plot(n, r, lw=1, label=label)
    for h in hlines:
        ax.axhline(h, color="0.6", lw=0.8, ls="--")
    ax.set_xlabel("n")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)
