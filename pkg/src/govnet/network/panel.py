"""Dense per-project monthly panel assembly and metrics.csv output."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from .metrics import MetricRow

METRIC_COLUMNS = (
    "s_num_nodes",
    "s_graph_density",
    "s_avg_clustering_coef",
    "s_weighted_mean_degree",
    "t_graph_density",
    "t_num_dev_nodes",
    "t_num_file_nodes",
    "t_num_file_per_dev",
)
IS_COLUMNS = ("num_IS_mentor", "num_IS_committer", "num_IS_contributor")
CSV_HEADER = (
    "project,month_index,"
    + ",".join(METRIC_COLUMNS)
    + ","
    + ",".join(IS_COLUMNS)
    + ",inactive_flag"
)


@dataclass(frozen=True)
class PanelRow:
    project_id: str
    month_index: int
    s_num_nodes: float
    s_graph_density: float
    s_avg_clustering_coef: float
    s_weighted_mean_degree: float
    t_graph_density: float
    t_num_dev_nodes: float
    t_num_file_nodes: float
    t_num_file_per_dev: float
    num_IS_mentor: int
    num_IS_committer: int
    num_IS_contributor: int
    inactive_flag: int


@dataclass(frozen=True)
class PanelSeries:
    """Dense month-0-based series for one project."""

    project_id: str
    rows: list[PanelRow]

    def __len__(self) -> int:
        return len(self.rows)

    def values(self, column: str) -> list[float]:
        return [getattr(row, column) for row in self.rows]


def _count_for(
    counts: Mapping | None, project_id: str, month: int
) -> tuple[int, int, int]:
    if not counts:
        return 0, 0, 0
    entry = counts.get((project_id, month))
    if entry is None:
        return 0, 0, 0
    normalized = {str(k).lower().replace("role.", ""): int(v) for k, v in entry.items()}
    return (
        normalized.get("mentor", 0),
        normalized.get("committer", 0),
        normalized.get("contributor", 0),
    )


def assemble_panel(
    rows: list[MetricRow],
    is_counts: Mapping | None = None,
    last_month: Mapping[str, int] | None = None,
) -> dict[str, PanelSeries]:
    """Assemble dense per-project series from month 0 to the last active month.

    Months with no metric row and no IS activity are zero-filled and flagged
    inactive.  ``last_month`` can force a longer horizon per project (e.g. the
    incubation end month).  Duplicate (project, month) metric rows are fatal.
    """
    by_key: dict[tuple[str, int], MetricRow] = {}
    for row in rows:
        key = (row.project_id, row.month_index)
        if key in by_key:
            raise ValueError(f"duplicate metric row for {key}")
        by_key[key] = row

    horizons: dict[str, int] = dict(last_month or {})
    for project_id, month in by_key:
        horizons[project_id] = max(horizons.get(project_id, -1), month)
    for (project_id, month), entry in (is_counts or {}).items():
        if any(int(v) for v in entry.values()):
            horizons[project_id] = max(horizons.get(project_id, -1), month)

    panels: dict[str, PanelSeries] = {}
    for project_id in sorted(horizons):
        series: list[PanelRow] = []
        for month in range(horizons[project_id] + 1):
            metric = by_key.get((project_id, month))
            mentor, committer, contributor = _count_for(is_counts, project_id, month)
            active = metric is not None or (mentor or committer or contributor)
            if metric is None:
                metric = MetricRow(project_id, month, 0, 0, 0, 0, 0, 0, 0, 0)
            series.append(
                PanelRow(
                    project_id=project_id,
                    month_index=month,
                    **{c: getattr(metric, c) for c in METRIC_COLUMNS},
                    num_IS_mentor=mentor,
                    num_IS_committer=committer,
                    num_IS_contributor=contributor,
                    inactive_flag=0 if active else 1,
                )
            )
        panels[project_id] = PanelSeries(project_id=project_id, rows=series)
    return panels


def _format_value(value) -> str:
    if isinstance(value, int):
        return str(value)
    as_float = float(value)
    if as_float.is_integer():
        return str(int(as_float))
    return repr(as_float)


def write_metrics_csv(
    panels: Mapping[str, PanelSeries],
    path: str | Path,
    config_hash: str | None = None,
    seed: int | None = None,
) -> Path:
    """Write the fixed-header metrics CSV, one row per (project, month)."""
    path = Path(path)
    lines = [CSV_HEADER]
    for project_id in sorted(panels):
        for row in panels[project_id].rows:
            cells = [project_id, str(row.month_index)]
            cells += [_format_value(getattr(row, c)) for c in METRIC_COLUMNS]
            cells += [str(getattr(row, c)) for c in IS_COLUMNS]
            cells.append(str(row.inactive_flag))
            lines.append(",".join(cells))
    if config_hash is not None or seed is not None:
        lines.append(f"# config_hash={config_hash} seed={seed}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_metrics_csv(path: str | Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def panel_frame(panels: Mapping[str, PanelSeries]) -> pd.DataFrame:
    """All panel rows as one DataFrame in metrics.csv column order."""
    records = []
    for project_id in sorted(panels):
        for row in panels[project_id].rows:
            rec = {"project": project_id, "month_index": row.month_index}
            for column in METRIC_COLUMNS + IS_COLUMNS:
                rec[column] = getattr(row, column)
            rec["inactive_flag"] = row.inactive_flag
            records.append(rec)
    columns = ["project", "month_index", *METRIC_COLUMNS, *IS_COLUMNS, "inactive_flag"]
    return pd.DataFrame.from_records(records, columns=columns)


SUMMARY_COLUMNS = ("mean", "std", "min", "q25", "median", "q75", "max")


def summary_frame(frame: pd.DataFrame, include_inactive: bool = True) -> pd.DataFrame:
    """Per-variable summary over panel rows (NaN cells are skipped).

    Accepts any frame with the metrics.csv columns, e.g. the output of
    outlier trimming.
    """
    if not include_inactive and len(frame):
        frame = frame[frame["inactive_flag"] == 0]
    variables = list(METRIC_COLUMNS + IS_COLUMNS)
    if frame.empty:
        return pd.DataFrame(0.0, index=variables, columns=list(SUMMARY_COLUMNS))
    stats = {
        "mean": frame[variables].mean(),
        "std": frame[variables].std(),
        "min": frame[variables].min(),
        "q25": frame[variables].quantile(0.25),
        "median": frame[variables].median(),
        "q75": frame[variables].quantile(0.75),
        "max": frame[variables].max(),
    }
    return pd.DataFrame(stats).loc[variables]


def summary_stats(
    panels: Mapping[str, PanelSeries], include_inactive: bool = True
) -> pd.DataFrame:
    """Per-variable summary statistics across all panel rows."""
    return summary_frame(panel_frame(panels), include_inactive)
