"""Static SVG plots: group-mean series with SE bands and topic panels."""
from __future__ import annotations

import math
from collections.abc import Mapping
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from ..network.panel import IS_COLUMNS, METRIC_COLUMNS

GROUP_COLORS = ("#1b6ca8", "#c2571a", "#3a7d44", "#7b4b94")


def _save_svg(fig, path: Path, config_hash: str) -> None:
    """Write an SVG with salted element ids and no embedded timestamp."""
    with matplotlib.rc_context({"svg.hashsalt": config_hash}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_group_means(
    frame: pd.DataFrame,
    groups: Mapping[str, str],
    path: str | Path,
    config_hash: str = "",
) -> Path:
    """One panel per panel variable: group means by month with +-1 SE bands.

    ``frame`` is the dense metrics table (one row per project-month,
    inactive months included as zeros).
    """
    path = Path(path)
    variables = list(METRIC_COLUMNS + IS_COLUMNS)
    labels = sorted(set(groups.values()))
    n_cols = 3
    n_rows = math.ceil(len(variables) / n_cols)
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(4.2 * n_cols, 2.8 * n_rows), squeeze=False
    )
    frame = frame.assign(group=frame["project"].map(groups))
    for i, variable in enumerate(variables):
        ax = axes[i // n_cols][i % n_cols]
        for j, label in enumerate(labels):
            sub = frame[frame["group"] == label]
            by_month = sub.groupby("month_index")[variable]
            months = np.asarray(sorted(by_month.groups))
            mean = by_month.mean().loc[months].to_numpy(dtype=float)
            std = by_month.std().loc[months].fillna(0.0).to_numpy(dtype=float)
            count = by_month.count().loc[months].to_numpy(dtype=float)
            se = np.where(count > 0, std / np.sqrt(count), 0.0)
            color = GROUP_COLORS[j % len(GROUP_COLORS)]
            ax.plot(months, mean, label=label, color=color, linewidth=1.4)
            ax.fill_between(months, mean - se, mean + se, color=color, alpha=0.25, linewidth=0)
        ax.set_title(variable, fontsize=9)
        ax.tick_params(labelsize=8)
        if i == 0:
            ax.legend(fontsize=8)
    for k in range(len(variables), n_rows * n_cols):
        axes[k // n_cols][k % n_cols].axis("off")
    fig.supxlabel("months since incubation start", fontsize=9)
    fig.tight_layout()
    _save_svg(fig, path, config_hash)
    return path


def plot_topic_volumes(
    volumes: pd.DataFrame, path: str | Path, config_hash: str = ""
) -> Path:
    """One panel per topic: centered monthly token volume per group."""
    path = Path(path)
    topics = sorted(volumes["topic_id"].unique())
    labels = sorted(volumes["group"].unique())
    n_cols = 3
    n_rows = max(1, math.ceil(len(topics) / n_cols))
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(4.2 * n_cols, 2.6 * n_rows), squeeze=False
    )
    for i, topic in enumerate(topics):
        ax = axes[i // n_cols][i % n_cols]
        for j, label in enumerate(labels):
            sub = volumes[(volumes["topic_id"] == topic) & (volumes["group"] == label)]
            sub = sub.sort_values("month_index")
            color = GROUP_COLORS[j % len(GROUP_COLORS)]
            ax.plot(
                sub["month_index"], sub["centered"], label=label,
                color=color, linewidth=1.3,
            )
        ax.axhline(0.0, color="#888888", linewidth=0.6)
        ax.set_title(f"topic {topic}", fontsize=9)
        ax.tick_params(labelsize=8)
        if i == 0:
            ax.legend(fontsize=8)
    for k in range(len(topics), n_rows * n_cols):
        axes[k // n_cols][k % n_cols].axis("off")
    fig.supxlabel("months since incubation start", fontsize=9)
    fig.supylabel("centered token volume", fontsize=9)
    fig.tight_layout()
    _save_svg(fig, path, config_hash)
    return path
