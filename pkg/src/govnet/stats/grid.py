"""Granger test grid over the IS/socio-technical panel and group comparisons."""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..network.panel import IS_COLUMNS, METRIC_COLUMNS, PanelSeries
from .adf import adf_test, default_lags, min_length
from .adjust import SIGNIFICANCE_LEVEL, AdjustedTest, bh_adjust
from .granger import DEFAULT_LAG, GrangerResult, panel_test
from .mannwhitney import mann_whitney

log = logging.getLogger(__name__)

IS_VARIABLES = IS_COLUMNS
DEFAULT_ST_VARIABLES = (
    "s_graph_density",
    "s_weighted_mean_degree",
    "t_graph_density",
    "t_num_dev_nodes",
    "t_num_file_nodes",
    "t_num_file_per_dev",
)
ALL_PANEL_VARIABLES = METRIC_COLUMNS + IS_COLUMNS
DEFAULT_ADF_ALPHA = 0.05


@dataclass(frozen=True)
class StationarityRecord:
    group: str
    project_id: str
    variable: str
    n_obs: int
    lags: int
    statistic: float
    p_value: float
    testable: bool
    stationary: bool
    action: str


@dataclass(frozen=True)
class GridTest:
    group: str
    result: GrangerResult
    adjusted: AdjustedTest


@dataclass(frozen=True)
class GrangerEdge:
    group: str
    is_var: str
    st_var: str
    direction: str


@dataclass(frozen=True)
class GridResult:
    tests: list[GridTest]
    edges: list[GrangerEdge]
    stationarity: list[StationarityRecord]
    skipped_groups: tuple[str, ...]
    skipped_pairs: tuple[tuple[str, str, str], ...]


def active_span(series: PanelSeries, variable: str) -> np.ndarray:
    """Variable values from the first through the last active month.

    Leading and trailing inactive months are dropped; interior zero-activity
    months stay in the series.
    """
    active = [i for i, row in enumerate(series.rows) if row.inactive_flag == 0]
    if not active:
        return np.empty(0, dtype=float)
    window = series.values(variable)[active[0] : active[-1] + 1]
    return np.asarray(window, dtype=float)


def _screen_variable(
    group: str, project_id: str, variable: str, span: np.ndarray,
    adf_alpha: float, action: str,
) -> tuple[np.ndarray | None, StationarityRecord]:
    """ADF-screen one project-variable series, applying the chosen action.

    Series too short for the default-lag ADF regression (or with a singular
    design) are kept unchanged; at the default Granger lag those series fall
    below the 5K+2 usability floor anyway.
    """
    n = len(span)
    lags = default_lags(n) if n > 1 else 0
    statistic = float("nan")
    p_value = float("nan")
    testable = n >= min_length(lags)
    if testable:
        try:
            statistic, p_value = adf_test(span, lags)
        except ValueError:
            testable = False
    if not testable:
        log.info("stationarity %s/%s/%s: untestable (n=%d)", group, project_id, variable, n)
        record = StationarityRecord(
            group, project_id, variable, n, lags, statistic, p_value,
            testable=False, stationary=False, action="keep",
        )
        return span, record
    stationary = p_value < adf_alpha
    if stationary:
        applied = "keep"
        screened: np.ndarray | None = span
    elif action == "difference":
        applied = "difference"
        screened = np.diff(span)
    else:
        applied = "exclude"
        screened = None
        log.info("stationarity %s/%s/%s: nonstationary, excluded", group, project_id, variable)
    record = StationarityRecord(
        group, project_id, variable, n, lags, statistic, p_value,
        testable=True, stationary=stationary, action=applied,
    )
    return screened, record


def _pair_series(
    projects: Sequence[str],
    screened: Mapping[str, Mapping[str, np.ndarray | None]],
    x_var: str,
    y_var: str,
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Per-project (x, y) series with both variables present, end-aligned."""
    series: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for project_id in projects:
        x = screened[project_id].get(x_var)
        y = screened[project_id].get(y_var)
        if x is None or y is None:
            continue
        length = min(len(x), len(y))
        if length == 0:
            continue
        series[project_id] = (x[len(x) - length :], y[len(y) - length :])
    return series


def run_grid(
    panels: Mapping[str, PanelSeries],
    groups: Mapping[str, str],
    is_variables: Sequence[str] = IS_VARIABLES,
    st_variables: Sequence[str] = DEFAULT_ST_VARIABLES,
    lag: int = DEFAULT_LAG,
    adf_alpha: float = DEFAULT_ADF_ALPHA,
    nonstationary_action: str = "exclude",
    alpha: float = SIGNIFICANCE_LEVEL,
    small_sample: bool = False,
    jobs: int = 1,
) -> GridResult:
    """Run every directed IS-ST Granger pair per group, BH-adjusted jointly.

    Each group contributes len(is) * len(st) * 2 tests.  Nonstationary
    project-variables are excluded (or first-differenced) before testing.
    Groups with fewer than 2 projects, and pairs left with fewer than 2
    usable projects, are skipped with a log line.
    """
    for variable in (*is_variables, *st_variables):
        if variable not in ALL_PANEL_VARIABLES:
            raise ValueError(f"panel missing variable {variable!r}")
    if nonstationary_action not in ("exclude", "difference"):
        raise ValueError(f"unknown nonstationary_action {nonstationary_action!r}")

    by_group: dict[str, list[str]] = {}
    for project_id in sorted(groups):
        if project_id not in panels:
            raise ValueError(f"group mapping references unknown project {project_id!r}")
        by_group.setdefault(groups[project_id], []).append(project_id)

    variables = [*is_variables, *st_variables]
    skipped_groups: list[str] = []
    stationarity: list[StationarityRecord] = []
    screened: dict[str, dict[str, np.ndarray | None]] = {}
    usable_groups: list[str] = []
    for group in sorted(by_group):
        projects = by_group[group]
        if len(projects) < 2:
            log.info("run_grid: group %s skipped (%d project)", group, len(projects))
            skipped_groups.append(group)
            continue
        usable_groups.append(group)
        for project_id in projects:
            screened[project_id] = {}
            for variable in variables:
                span = active_span(panels[project_id], variable)
                kept, record = _screen_variable(
                    group, project_id, variable, span, adf_alpha, nonstationary_action
                )
                screened[project_id][variable] = kept
                stationarity.append(record)

    tasks: list[tuple[str, str, str, dict]] = []
    for group in usable_groups:
        projects = by_group[group]
        for is_var in is_variables:
            for st_var in st_variables:
                for x_var, y_var in ((is_var, st_var), (st_var, is_var)):
                    tasks.append(
                        (group, x_var, y_var, _pair_series(projects, screened, x_var, y_var))
                    )

    def run_task(task) -> GrangerResult | ValueError:
        group, x_var, y_var, series = task
        try:
            return panel_test(series, x_var, y_var, lag=lag, small_sample=small_sample)
        except ValueError as exc:
            return exc

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_task, tasks))
    else:
        outcomes = [run_task(task) for task in tasks]

    kept: list[tuple[str, GrangerResult]] = []
    skipped_pairs: list[tuple[str, str, str]] = []
    for (group, x_var, y_var, _), outcome in zip(tasks, outcomes):
        if isinstance(outcome, ValueError):
            log.info("run_grid: %s %s->%s skipped: %s", group, x_var, y_var, outcome)
            skipped_pairs.append((group, x_var, y_var))
        else:
            kept.append((group, outcome))

    tests: list[GridTest] = []
    if kept:
        adjusted = bh_adjust([result.p_value for _, result in kept], alpha=alpha)
        tests = [
            GridTest(group=group, result=result, adjusted=adj)
            for (group, result), adj in zip(kept, adjusted)
        ]

    significant = {
        (test.group, test.result.x_var, test.result.y_var)
        for test in tests
        if test.adjusted.significant
    }
    edges: list[GrangerEdge] = []
    for group in usable_groups:
        for is_var in is_variables:
            for st_var in st_variables:
                forward = (group, is_var, st_var) in significant
                reverse = (group, st_var, is_var) in significant
                if forward and reverse:
                    edges.append(GrangerEdge(group, is_var, st_var, "bidirectional"))
                elif forward:
                    edges.append(GrangerEdge(group, is_var, st_var, "is_to_st"))
                elif reverse:
                    edges.append(GrangerEdge(group, is_var, st_var, "st_to_is"))

    return GridResult(
        tests=tests,
        edges=edges,
        stationarity=stationarity,
        skipped_groups=tuple(skipped_groups),
        skipped_pairs=tuple(skipped_pairs),
    )


def granger_frame(grid: GridResult) -> pd.DataFrame:
    """Grid tests as a DataFrame in granger.csv column order."""
    records = [
        {
            "group": test.group,
            "x_var": test.result.x_var,
            "y_var": test.result.y_var,
            "lag": test.result.lag,
            "n_projects": test.result.n_projects_used,
            "W_bar": test.result.w_bar,
            "Z_bar": test.result.z_bar,
            "raw_p": test.adjusted.raw_p,
            "adjusted_p": test.adjusted.adjusted_p,
            "significant": test.adjusted.significant,
        }
        for test in grid.tests
    ]
    columns = [
        "group", "x_var", "y_var", "lag", "n_projects",
        "W_bar", "Z_bar", "raw_p", "adjusted_p", "significant",
    ]
    return pd.DataFrame.from_records(records, columns=columns)


def stationarity_frame(grid: GridResult) -> pd.DataFrame:
    records = [
        {
            "group": rec.group,
            "project": rec.project_id,
            "variable": rec.variable,
            "n_obs": rec.n_obs,
            "lags": rec.lags,
            "statistic": rec.statistic,
            "p_value": rec.p_value,
            "testable": rec.testable,
            "stationary": rec.stationary,
            "action": rec.action,
        }
        for rec in grid.stationarity
    ]
    columns = [
        "group", "project", "variable", "n_obs", "lags",
        "statistic", "p_value", "testable", "stationary", "action",
    ]
    return pd.DataFrame.from_records(records, columns=columns)


def edges_frame(grid: GridResult) -> pd.DataFrame:
    records = [
        {
            "group": edge.group,
            "is_var": edge.is_var,
            "st_var": edge.st_var,
            "direction": edge.direction,
        }
        for edge in grid.edges
    ]
    return pd.DataFrame.from_records(
        records, columns=["group", "is_var", "st_var", "direction"]
    )


def group_tests(
    panels: Mapping[str, PanelSeries],
    groups: Mapping[str, str],
    variables: Sequence[str] = ALL_PANEL_VARIABLES,
) -> pd.DataFrame:
    """Mann-Whitney comparison of per-project active-month means by group.

    One row per (variable, group pair); the test unit is each project's mean
    of the variable over its active months.
    """
    for variable in variables:
        if variable not in ALL_PANEL_VARIABLES:
            raise ValueError(f"panel missing variable {variable!r}")
    by_group: dict[str, list[str]] = {}
    for project_id in sorted(groups):
        if project_id not in panels:
            raise ValueError(f"group mapping references unknown project {project_id!r}")
        by_group.setdefault(groups[project_id], []).append(project_id)
    labels = sorted(by_group)
    records = []
    for variable in variables:
        means: dict[str, list[float]] = {}
        for group in labels:
            values = []
            for project_id in by_group[group]:
                span = active_span(panels[project_id], variable)
                if len(span) == 0:
                    log.info("group_tests: %s has no active months, skipped", project_id)
                    continue
                values.append(float(np.mean(span)))
            means[group] = values
        for i, group_a in enumerate(labels):
            for group_b in labels[i + 1 :]:
                a, b = means[group_a], means[group_b]
                if not a or not b:
                    log.info(
                        "group_tests: %s vs %s on %s skipped (empty group)",
                        group_a, group_b, variable,
                    )
                    continue
                outcome = mann_whitney(a, b)
                records.append(
                    {
                        "variable": variable,
                        "group_a": group_a,
                        "group_b": group_b,
                        "n_a": outcome.n_a,
                        "n_b": outcome.n_b,
                        "mean_a": float(np.mean(a)),
                        "mean_b": float(np.mean(b)),
                        "u_statistic": outcome.u_statistic,
                        "p_value": outcome.p_value,
                        "method": outcome.method,
                    }
                )
    columns = [
        "variable", "group_a", "group_b", "n_a", "n_b",
        "mean_a", "mean_b", "u_statistic", "p_value", "method",
    ]
    return pd.DataFrame.from_records(records, columns=columns)
