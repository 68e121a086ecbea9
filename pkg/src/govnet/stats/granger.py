"""Pairwise and panel Granger causality (Dumitrescu-Hurlin Z-bar)."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

log = logging.getLogger(__name__)

DEFAULT_LAG = 2


def min_series_length(lag: int) -> int:
    """Shortest usable series: 5K + 2 months."""
    return 5 * lag + 2


def _lag_matrix(values: np.ndarray, lag: int) -> np.ndarray:
    """Columns v_{t-1}..v_{t-K} for t = K..len-1."""
    return np.column_stack([values[lag - j : len(values) - j] for j in range(1, lag + 1)])


def _ols_rss(design: np.ndarray, target: np.ndarray) -> float:
    beta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise ValueError("collinear Granger design")
    resid = target - design @ beta
    return float(resid @ resid)


def granger_pair(x, y, lag: int = DEFAULT_LAG) -> float:
    """Wald statistic for "x Granger-causes y" at the given lag.

    Restricted model: y_t on (1, y_{t-1..t-K}); unrestricted adds
    x_{t-1..t-K}.  Statistic: (RSS_r - RSS_u)/RSS_u * (T - 2K - 1) with T the
    number of regression observations.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length vectors")
    if lag < 1:
        raise ValueError("lag must be >= 1")
    if len(y) < min_series_length(lag):
        raise ValueError(f"series length {len(y)} below minimum {min_series_length(lag)}")
    t_obs = len(y) - lag
    target = y[lag:]
    ones = np.ones(t_obs)
    restricted = np.column_stack([ones, _lag_matrix(y, lag)])
    unrestricted = np.column_stack([restricted, _lag_matrix(x, lag)])
    rss_r = _ols_rss(restricted, target)
    rss_u = _ols_rss(unrestricted, target)
    if rss_u <= 0.0:
        raise ValueError("degenerate Granger fit (zero residual variance)")
    dof = t_obs - 2 * lag - 1
    return float((rss_r - rss_u) / rss_u * dof)


@dataclass(frozen=True)
class GrangerResult:
    x_var: str
    y_var: str
    lag: int
    wald_stats: tuple[float, ...]
    n_projects_used: int
    n_projects_excluded: int
    w_bar: float
    z_bar: float
    p_value: float


def _wald_moments(t_obs: int, lag: int) -> tuple[float, float]:
    """Finite-sample mean and variance of the per-series Wald statistic.

    Under the null W/K follows F(K, T-2K-1), so the moments exist only for
    T > 2K + 5.
    """
    d2 = t_obs - 2 * lag - 1
    mean = lag * d2 / (d2 - 2)
    var = 2 * lag * d2**2 * (lag + d2 - 2) / ((d2 - 2) ** 2 * (d2 - 4))
    return mean, var


def panel_test(
    series: Mapping[str, tuple[np.ndarray, np.ndarray]],
    x_var: str = "x",
    y_var: str = "y",
    lag: int = DEFAULT_LAG,
    small_sample: bool = False,
) -> GrangerResult:
    """Dumitrescu-Hurlin panel test over per-project (x, y) series.

    Projects shorter than 5K+2 months, constant, or collinear are excluded
    with a log line; at least 2 usable projects are required.  The default
    statistic is the asymptotic Z_bar = sqrt(N/(2K)) * (W_bar - K); with
    ``small_sample`` the finite-sample moment-corrected variant is used.
    P-values are two-sided normal.
    """
    stats: list[float] = []
    t_values: list[int] = []
    excluded = 0
    for project in sorted(series):
        x, y = series[project]
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if len(y) < min_series_length(lag):
            log.info("panel_test %s->%s: %s too short (%d)", x_var, y_var, project, len(y))
            excluded += 1
            continue
        if small_sample and len(y) - lag <= 2 * lag + 5:
            log.info(
                "panel_test %s->%s: %s too short for corrected moments (%d)",
                x_var, y_var, project, len(y),
            )
            excluded += 1
            continue
        if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
            log.info("panel_test %s->%s: %s constant series", x_var, y_var, project)
            excluded += 1
            continue
        try:
            stats.append(granger_pair(x, y, lag))
        except ValueError as exc:
            log.info("panel_test %s->%s: %s skipped: %s", x_var, y_var, project, exc)
            excluded += 1
            continue
        t_values.append(len(y) - lag)
    n = len(stats)
    if n < 2:
        raise ValueError(
            f"panel Granger test needs >= 2 usable projects, got {n} "
            f"({excluded} excluded) for {x_var}->{y_var}"
        )
    w_bar = float(np.mean(stats))
    if small_sample:
        moments = [_wald_moments(t, lag) for t in t_values]
        mean_e = float(np.mean([m for m, _ in moments]))
        mean_v = float(np.mean([v for _, v in moments]))
        z_bar = float(np.sqrt(n) * (w_bar - mean_e) / np.sqrt(mean_v))
    else:
        z_bar = float(np.sqrt(n / (2.0 * lag)) * (w_bar - lag))
    p_value = float(min(1.0, 2.0 * norm.sf(abs(z_bar))))
    return GrangerResult(
        x_var=x_var,
        y_var=y_var,
        lag=lag,
        wald_stats=tuple(stats),
        n_projects_used=n,
        n_projects_excluded=excluded,
        w_bar=w_bar,
        z_bar=z_bar,
        p_value=p_value,
    )
