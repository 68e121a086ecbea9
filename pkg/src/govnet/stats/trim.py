"""Pooled upper-tail outlier removal."""
from __future__ import annotations

import numpy as np
import pandas as pd


def trim_outliers(
    frame: pd.DataFrame, fraction: float = 0.02, variables: list[str] | None = None
) -> pd.DataFrame:
    """Mask (NaN) values strictly above each variable's (1 - fraction) quantile.

    The quantile pools all rows of the variable and uses linear interpolation;
    other columns of a masked row are untouched.
    """
    if not 0.0 < fraction < 0.5:
        raise ValueError("fraction must be in (0, 0.5)")
    out = frame.copy()
    if variables is None:
        variables = [c for c in frame.columns if frame[c].dtype.kind in "if"]
    for var in variables:
        values = out[var].to_numpy(dtype=float)
        finite = values[np.isfinite(values)]
        if finite.size == 0:
            continue
        cutoff = float(np.quantile(finite, 1.0 - fraction))
        mask = values > cutoff
        if mask.any():
            out[var] = out[var].astype(float)
            out.loc[mask, var] = np.nan
    return out
