"""Panel assembly, the metrics CSV, summaries, and outlier trimming."""
import numpy as np
import pandas as pd
import pytest

from govnet.network import (
    CSV_HEADER,
    assemble_panel,
    metric_row,
    panel_frame,
    read_metrics_csv,
    summary_frame,
    write_metrics_csv,
)
from govnet.network.metrics import MetricRow
from govnet.stats import trim_outliers


def row(project="proj", month=0, **overrides):
    values = dict(
        s_num_nodes=4.0,
        s_graph_density=0.25,
        s_avg_clustering_coef=0.5,
        s_weighted_mean_degree=2.0,
        t_graph_density=0.5,
        t_num_dev_nodes=2.0,
        t_num_file_nodes=3.0,
        t_num_file_per_dev=1.5,
    )
    values.update(overrides)
    return MetricRow(project_id=project, month_index=month, **values)


def test_assemble_panel_dense_with_inactive_gaps():
    rows = [row(month=0), row(month=3)]
    panels = assemble_panel(rows)
    series = panels["proj"]
    assert [r.month_index for r in series.rows] == [0, 1, 2, 3]
    assert [r.inactive_flag for r in series.rows] == [0, 1, 1, 0]
    assert series.rows[1].s_num_nodes == 0.0


def test_assemble_panel_is_counts_extend_horizon():
    panels = assemble_panel(
        [row(month=0)], is_counts={("proj", 2): {"Mentor": 3, "Contributor": 1}}
    )
    series = panels["proj"]
    assert len(series) == 3
    assert series.rows[2].num_IS_mentor == 3
    assert series.rows[2].num_IS_contributor == 1
    assert series.rows[2].inactive_flag == 0  # IS activity counts as active
    assert series.rows[1].inactive_flag == 1


def test_assemble_panel_last_month_forces_horizon():
    panels = assemble_panel([row(month=0)], last_month={"proj": 5})
    assert [r.month_index for r in panels["proj"].rows] == list(range(6))


def test_assemble_panel_duplicate_month_fatal():
    with pytest.raises(ValueError):
        assemble_panel([row(month=1), row(month=1)])


def test_metrics_csv_round_trip(tmp_path):
    panels = assemble_panel(
        [row(month=0), row(project="other", month=1)],
        is_counts={("proj", 0): {"Mentor": 2}},
    )
    path = tmp_path / "metrics.csv"
    write_metrics_csv(panels, path, config_hash="cafe", seed=9)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == CSV_HEADER
    assert text.rstrip().endswith("# config_hash=cafe seed=9")
    loaded = read_metrics_csv(path)
    assert list(loaded.columns) == CSV_HEADER.split(",")
    assert set(loaded["project"]) == {"proj", "other"}
    pd.testing.assert_frame_equal(loaded, panel_frame(panels), check_dtype=False)


def test_panel_frame_and_values():
    panels = assemble_panel([row(month=0), row(month=1, s_num_nodes=7.0)])
    frame = panel_frame(panels)
    assert list(frame["month_index"]) == [0, 1]
    assert panels["proj"].values("s_num_nodes") == [4.0, 7.0]


def test_summary_frame_quantiles_match_numpy():
    rows = [row(month=m, s_num_nodes=float(m)) for m in range(10)]
    frame = panel_frame(assemble_panel(rows))
    summary = summary_frame(frame)
    values = np.arange(10.0)
    line = summary.loc["s_num_nodes"]
    assert line["mean"] == pytest.approx(values.mean())
    assert line["std"] == pytest.approx(values.std(ddof=1))
    assert line["q25"] == pytest.approx(np.quantile(values, 0.25))
    assert line["median"] == pytest.approx(np.quantile(values, 0.5))
    assert line["q75"] == pytest.approx(np.quantile(values, 0.75))
    assert line["min"] == 0.0 and line["max"] == 9.0


def test_summary_frame_active_only_drops_inactive_months():
    rows = [row(month=0, s_num_nodes=10.0), row(month=2, s_num_nodes=20.0)]
    frame = panel_frame(assemble_panel(rows))
    active = summary_frame(frame, include_inactive=False)
    assert active.loc["s_num_nodes", "mean"] == pytest.approx(15.0)
    everything = summary_frame(frame, include_inactive=True)
    assert everything.loc["s_num_nodes", "mean"] == pytest.approx(10.0)


def test_trim_outliers_removes_top_fraction():
    frame = pd.DataFrame({"x": np.arange(1.0, 101.0)})
    trimmed = trim_outliers(frame, 0.02, ["x"])
    dropped = frame["x"][trimmed["x"].isna()]
    assert sorted(dropped) == [99.0, 100.0]
    assert trimmed["x"].max() == 98.0


def test_trim_outliers_leaves_other_columns():
    frame = pd.DataFrame({"x": np.arange(1.0, 101.0), "y": np.ones(100)})
    trimmed = trim_outliers(frame, 0.02, ["x"])
    assert trimmed["y"].notna().all()
