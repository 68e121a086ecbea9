"""Augmented Dickey-Fuller test, trend specification."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

P_MIN = 0.01
P_MAX = 0.99


def _load_table() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    text = (
        resources.files("govnet.stats").joinpath("data/df_trend_table.csv").read_text()
    )
    rows = [
        line.split(",")
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    ]
    probs = np.asarray([float(p) for p in rows[0][1:]])
    sizes = np.asarray([float(r[0]) for r in rows[1:]])
    crits = np.asarray([[float(v) for v in r[1:]] for r in rows[1:]])
    return sizes, probs, crits


_TABLE: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None


def _table() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    global _TABLE
    if _TABLE is None:
        _TABLE = _load_table()
    return _TABLE


def default_lags(n: int) -> int:
    """trunc((n - 1)^(1/3)) lagged differences."""
    return int(np.trunc((n - 1) ** (1.0 / 3.0)))


def min_length(lags: int) -> int:
    """Shortest series the ADF regression accepts for the given lag count."""
    return 3 * (lags + 1) + 3


def adf_pvalue(statistic: float, n: int) -> float:
    """Interpolate the trend-case table: over sample size, then statistic.

    The sample-size axis is entered with n - 1 (the differenced length);
    results clamp to [0.01, 0.99].
    """
    sizes, probs, crits = _table()
    effective = float(np.clip(n - 1, sizes[0], sizes[-1]))
    row = np.array([np.interp(effective, sizes, crits[:, j]) for j in range(len(probs))])
    # Critical values increase with probability, so np.interp applies directly
    # and its endpoint rule gives the clamping.
    return float(np.clip(np.interp(statistic, row, probs), P_MIN, P_MAX))


def adf_test(series, lags: int | None = None) -> tuple[float, float]:
    """(statistic, p_value) for H0: unit root, against trend stationarity.

    Regresses dy_t on (1, t, y_{t-1}, dy_{t-1..t-lags}); the statistic is the
    t-ratio of the y_{t-1} coefficient.
    """
    y = np.asarray(series, dtype=float)
    n = y.shape[0]
    if lags is None:
        lags = default_lags(n)
    if lags < 0:
        raise ValueError("lags must be >= 0")
    if n < 3 * (lags + 1) + 3:
        raise ValueError(f"series length {n} too short for {lags} lags")
    dy = np.diff(y)
    rows = n - 1 - lags
    target = dy[lags:]
    columns = [np.ones(rows), np.arange(1, rows + 1, dtype=float), y[lags:-1]]
    for j in range(1, lags + 1):
        columns.append(dy[lags - j : len(dy) - j])
    design = np.column_stack(columns)

    beta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise ValueError("singular ADF regression")
    resid = target - design @ beta
    dof = rows - design.shape[1]
    sigma2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.inv(design.T @ design)
    se = float(np.sqrt(sigma2 * xtx_inv[2, 2]))
    if se == 0.0:
        raise ValueError("degenerate ADF regression (zero standard error)")
    statistic = float(beta[2] / se)
    return statistic, adf_pvalue(statistic, n)


def table_path() -> Path:
    """Filesystem path of the bundled critical-value table."""
    return Path(str(resources.files("govnet.stats").joinpath("data/df_trend_table.csv")))
