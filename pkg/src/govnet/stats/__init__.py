"""Outlier trimming, stationarity, panel Granger causality, and group tests."""
from .adf import adf_pvalue, adf_test, default_lags, min_length, table_path
from .adjust import SIGNIFICANCE_LEVEL, AdjustedTest, bh_adjust
from .granger import (
    DEFAULT_LAG,
    GrangerResult,
    granger_pair,
    min_series_length,
    panel_test,
)
from .grid import (
    ALL_PANEL_VARIABLES,
    DEFAULT_ADF_ALPHA,
    DEFAULT_ST_VARIABLES,
    IS_VARIABLES,
    GrangerEdge,
    GridResult,
    GridTest,
    StationarityRecord,
    active_span,
    edges_frame,
    granger_frame,
    group_tests,
    run_grid,
    stationarity_frame,
)
from .mannwhitney import MannWhitneyResult, mann_whitney, mann_whitney_u
from .trim import trim_outliers

__all__ = [
    "ALL_PANEL_VARIABLES",
    "DEFAULT_ADF_ALPHA",
    "DEFAULT_LAG",
    "DEFAULT_ST_VARIABLES",
    "IS_VARIABLES",
    "SIGNIFICANCE_LEVEL",
    "AdjustedTest",
    "GrangerEdge",
    "GrangerResult",
    "GridResult",
    "GridTest",
    "MannWhitneyResult",
    "StationarityRecord",
    "active_span",
    "adf_pvalue",
    "adf_test",
    "bh_adjust",
    "default_lags",
    "edges_frame",
    "granger_frame",
    "granger_pair",
    "group_tests",
    "mann_whitney",
    "mann_whitney_u",
    "min_length",
    "min_series_length",
    "panel_test",
    "run_grid",
    "stationarity_frame",
    "table_path",
    "trim_outliers",
]
