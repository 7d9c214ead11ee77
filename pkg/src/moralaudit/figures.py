"""Matplotlib figure rendering for the report path.

Figures are presentation views of the structured report; every plotted value
comes straight from report fields.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import CorpusStats
from .labels import LABELS

_BAR_KW = {"edgecolor": "black", "linewidth": 0.5}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def _err(entries):
    """(values, yerr) arrays from a list of {point, lo, hi} dicts (None-safe)."""
    vals, lo, hi = [], [], []
    for e in entries:
        if e is None or e.get("point") is None:
            vals.append(np.nan)
            lo.append(0.0)
            hi.append(0.0)
        else:
            vals.append(e["point"])
            lo.append(0.0 if e["lo"] is None else max(e["point"] - e["lo"], 0.0))
            hi.append(0.0 if e["hi"] is None else max(e["hi"] - e["point"], 0.0))
    return np.array(vals), np.vstack([lo, hi])


def fairness_figure(report: dict, path) -> None:
    """Grouped bars: DP and EO difference per label with 95% CI."""
    per_label = report["fairness"]["per_label"]
    dp_vals, dp_err = _err([per_label[n]["dp_abs"] for n in LABELS])
    eo_vals, eo_err = _err([per_label[n]["eo"] for n in LABELS])
    x = np.arange(len(LABELS))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x - 0.2, dp_vals, 0.4, yerr=dp_err, capsize=3, label="DP difference", **_BAR_KW)
    ax.bar(x + 0.2, eo_vals, 0.4, yerr=eo_err, capsize=3, label="EO difference", **_BAR_KW)
    ax.set_xticks(x, LABELS, rotation=20)
    ax.set_ylabel("difference")
    ax.set_title("Cross-domain fairness gaps by label")
    ax.legend()
    _save(fig, path)


def mfc_figure(report: dict, path) -> None:
    """Per-label consistency scores with 95% CI and the aggregate line."""
    per_label = report["fairness"]["per_label"]
    vals, err = _err([per_label[n]["mfc"] for n in LABELS])
    agg = report["fairness"]["mfc_aggregate"]["point"]
    x = np.arange(len(LABELS))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x, vals, 0.6, yerr=err, capsize=3, color="tab:green", **_BAR_KW)
    ax.axhline(agg, color="black", linestyle="--", linewidth=1, label=f"aggregate = {agg:.3f}")
    ax.set_xticks(x, LABELS, rotation=20)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("MFC")
    ax.set_title("Moral Fairness Consistency by label (95% CI)")
    ax.legend()
    _save(fig, path)


def degradation_figure(report: dict, path) -> None:
    """In-domain vs cross-domain micro-F1 per scenario pairing."""
    scen = report["scenarios"]
    tags = [t for t in scen]
    vals = [scen[t]["micro_f1"]["point"] for t in tags]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(np.arange(len(tags)), vals, 0.6, color="tab:blue", **_BAR_KW)
    ax.set_xticks(np.arange(len(tags)), tags, rotation=15)
    ax.set_ylim(0, 1.0)
    ax.set_ylabel("micro-F1")
    ax.set_title("Micro-F1 by scenario")
    _save(fig, path)


def label_counts_figure(stats: CorpusStats, path, title: str = "Label distribution") -> None:
    counts = [stats.label_counts[n] for n in LABELS]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(np.arange(len(LABELS)), counts, 0.6, color="tab:orange", **_BAR_KW)
    ax.set_xticks(np.arange(len(LABELS)), LABELS, rotation=20)
    ax.set_ylabel("positive instances")
    ax.set_title(title)
    _save(fig, path)
