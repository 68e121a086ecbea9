"""Granger grid over panel series: screening, edges, group comparisons."""
import numpy as np
import pandas as pd
import pytest

from govnet.network.panel import PanelRow, PanelSeries
from govnet.stats import (
    edges_frame,
    granger_frame,
    group_tests,
    mann_whitney,
    run_grid,
    stationarity_frame,
)
from govnet.stats.grid import active_span

IS_VAR = "num_IS_committer"
ST_VAR = "s_graph_density"


def make_series(project_id, x_vals, y_vals, inactive=None):
    rows = []
    for month, (x, y) in enumerate(zip(x_vals, y_vals)):
        rows.append(
            PanelRow(
                project_id=project_id,
                month_index=month,
                s_num_nodes=5.0,
                s_graph_density=float(y),
                s_avg_clustering_coef=0.0,
                s_weighted_mean_degree=0.0,
                t_graph_density=0.0,
                t_num_dev_nodes=0.0,
                t_num_file_nodes=0.0,
                t_num_file_per_dev=0.0,
                num_IS_mentor=0,
                num_IS_committer=int(x),
                num_IS_contributor=0,
                inactive_flag=0 if inactive is None else inactive[month],
            )
        )
    return PanelSeries(project_id=project_id, rows=rows)


def coupled_project(rng, project_id, n=60, strength=0.8):
    """Poisson IS counts driving the density variable at lag 2."""
    x = rng.poisson(3.0, size=n).astype(float)
    y = np.zeros(n)
    for t in range(n):
        y[t] = 0.3 * y[t - 1] + strength * x[t - 2] + rng.normal()
    return make_series(project_id, x, y)


def test_active_span_trims_leading_and_trailing():
    series = make_series("p", [1, 2, 3, 4, 5, 6], [9, 8, 0, 6, 5, 4], inactive=[1, 0, 0, 1, 0, 1])
    span = active_span(series, ST_VAR)
    assert span.tolist() == [8.0, 0.0, 6.0, 5.0]  # interior inactive month kept
    all_inactive = make_series("q", [1], [1], inactive=[1])
    assert len(active_span(all_inactive, ST_VAR)) == 0


def test_run_grid_finds_planted_edge():
    rng = np.random.default_rng(0)
    panels = {f"p{i}": coupled_project(rng, f"p{i}") for i in range(8)}
    groups = {pid: "Graduated" for pid in panels}
    grid = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2
    )
    assert len(grid.tests) == 2  # forward and reverse
    by_dir = {(t.result.x_var, t.result.y_var): t for t in grid.tests}
    assert by_dir[(IS_VAR, ST_VAR)].adjusted.significant
    assert not by_dir[(ST_VAR, IS_VAR)].adjusted.significant
    assert [
        (e.group, e.is_var, e.st_var, e.direction) for e in grid.edges
    ] == [("Graduated", IS_VAR, ST_VAR, "is_to_st")]
    assert grid.skipped_groups == ()
    assert grid.skipped_pairs == ()


def test_run_grid_bidirectional_edge():
    rng = np.random.default_rng(3)
    panels = {}
    for i in range(8):
        n = 80
        x = np.zeros(n)
        y = np.zeros(n)
        for t in range(n):
            x[t] = rng.poisson(max(0.1, 3.0 + 0.8 * y[t - 1]))
            y[t] = 0.4 * x[t - 1] + rng.normal()
        panels[f"p{i}"] = make_series(f"p{i}", x, y)
    groups = {pid: "Retired" for pid in panels}
    grid = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2
    )
    assert [e.direction for e in grid.edges] == ["bidirectional"]


def test_run_grid_skips_single_project_group():
    rng = np.random.default_rng(1)
    panels = {
        "a": coupled_project(rng, "a"),
        "b": coupled_project(rng, "b"),
        "solo": coupled_project(rng, "solo"),
    }
    groups = {"a": "Graduated", "b": "Graduated", "solo": "Retired"}
    grid = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2,
        nonstationary_action="difference",
    )
    assert grid.skipped_groups == ("Retired",)
    assert {t.group for t in grid.tests} == {"Graduated"}
    assert all(rec.group == "Graduated" for rec in grid.stationarity)


def test_run_grid_skips_pair_without_usable_projects():
    rng = np.random.default_rng(3)
    panels = {
        "a": make_series("a", rng.poisson(3.0, 60), np.zeros(60)),
        "b": make_series("b", rng.poisson(3.0, 60), np.zeros(60)),
    }
    groups = {"a": "Graduated", "b": "Graduated"}
    grid = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2
    )
    # The density variable is constant everywhere, so both directions die.
    assert set(grid.skipped_pairs) == {
        ("Graduated", IS_VAR, ST_VAR),
        ("Graduated", ST_VAR, IS_VAR),
    }
    assert grid.tests == []
    assert grid.edges == []


def test_nonstationary_exclude_versus_difference():
    rng = np.random.default_rng(1)
    panels = {}
    for pid in ("a", "b"):
        x = rng.poisson(3.0, size=60).astype(float)
        y = np.cumsum(rng.normal(size=60))
        panels[pid] = make_series(pid, x, y)
    groups = {"a": "Graduated", "b": "Graduated"}

    excluded = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,),
        lag=2, nonstationary_action="exclude",
    )
    assert set(excluded.skipped_pairs) == {
        ("Graduated", IS_VAR, ST_VAR),
        ("Graduated", ST_VAR, IS_VAR),
    }
    density_actions = {
        rec.action for rec in excluded.stationarity if rec.variable == ST_VAR
    }
    assert density_actions == {"exclude"}

    differenced = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,),
        lag=2, nonstationary_action="difference",
    )
    assert differenced.skipped_pairs == ()
    assert len(differenced.tests) == 2
    actions = {rec.action for rec in differenced.stationarity if rec.variable == ST_VAR}
    assert actions == {"difference"}


def test_stationarity_untestable_short_series_kept():
    rng = np.random.default_rng(4)
    panels = {
        "a": make_series("a", rng.poisson(3.0, 8), rng.normal(size=8)),
        "b": make_series("b", rng.poisson(3.0, 8), rng.normal(size=8)),
    }
    groups = {"a": "Graduated", "b": "Graduated"}
    grid = run_grid(
        panels, groups, is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2
    )
    assert all(not rec.testable and rec.action == "keep" for rec in grid.stationarity)
    # Both directions are then skipped by the 5K + 2 length floor.
    assert len(grid.skipped_pairs) == 2


def test_run_grid_validation():
    rng = np.random.default_rng(5)
    panels = {"a": coupled_project(rng, "a"), "b": coupled_project(rng, "b")}
    groups = {"a": "G", "b": "G"}
    with pytest.raises(ValueError, match="missing variable"):
        run_grid(panels, groups, is_variables=("nope",), st_variables=(ST_VAR,))
    with pytest.raises(ValueError, match="unknown project"):
        run_grid(panels, {"a": "G", "ghost": "G"})
    with pytest.raises(ValueError, match="nonstationary_action"):
        run_grid(panels, groups, nonstationary_action="panic")


def test_grid_frames_shape_and_jobs_determinism():
    rng = np.random.default_rng(6)
    panels = {f"p{i}": coupled_project(rng, f"p{i}") for i in range(4)}
    groups = {pid: "Graduated" for pid in panels}
    kwargs = dict(is_variables=(IS_VAR,), st_variables=(ST_VAR,), lag=2)
    serial = run_grid(panels, groups, jobs=1, **kwargs)
    parallel = run_grid(panels, groups, jobs=4, **kwargs)

    g1, g2 = granger_frame(serial), granger_frame(parallel)
    pd.testing.assert_frame_equal(g1, g2)
    assert list(g1.columns) == [
        "group", "x_var", "y_var", "lag", "n_projects",
        "W_bar", "Z_bar", "raw_p", "adjusted_p", "significant",
    ]
    s1 = stationarity_frame(serial)
    assert len(s1) == len(panels) * 2
    assert list(s1.columns) == [
        "group", "project", "variable", "n_obs", "lags",
        "statistic", "p_value", "testable", "stationary", "action",
    ]
    e1 = edges_frame(serial)
    assert list(e1.columns) == ["group", "is_var", "st_var", "direction"]
    pd.testing.assert_frame_equal(e1, edges_frame(parallel))


def test_group_tests_means_and_pvalues():
    rng = np.random.default_rng(7)
    panels = {}
    groups = {}
    for i in range(4):
        pid = f"g{i}"
        panels[pid] = make_series(pid, rng.poisson(8.0, 30), rng.normal(5.0, 0.1, 30))
        groups[pid] = "Graduated"
    for i in range(3):
        pid = f"r{i}"
        panels[pid] = make_series(pid, rng.poisson(1.0, 30), rng.normal(1.0, 0.1, 30))
        groups[pid] = "Retired"
    frame = group_tests(panels, groups, variables=(ST_VAR, IS_VAR))
    assert list(frame.columns) == [
        "variable", "group_a", "group_b", "n_a", "n_b",
        "mean_a", "mean_b", "u_statistic", "p_value", "method",
    ]
    assert len(frame) == 2  # one group pair per variable
    row = frame[frame.variable == ST_VAR].iloc[0]
    assert (row.group_a, row.group_b) == ("Graduated", "Retired")
    assert (row.n_a, row.n_b) == (4, 3)
    means_a = [float(np.mean(active_span(panels[f"g{i}"], ST_VAR))) for i in range(4)]
    means_b = [float(np.mean(active_span(panels[f"r{i}"], ST_VAR))) for i in range(3)]
    assert row.mean_a == pytest.approx(float(np.mean(means_a)))
    assert row.mean_b == pytest.approx(float(np.mean(means_b)))
    expected = mann_whitney(means_a, means_b)
    assert row.u_statistic == expected.u_statistic
    assert row.p_value == pytest.approx(expected.p_value)
    assert row.method == expected.method


def test_group_tests_skips_inactive_project_and_empty_group():
    rng = np.random.default_rng(8)
    panels = {
        "a": make_series("a", rng.poisson(3.0, 10), rng.normal(size=10)),
        "b": make_series("b", rng.poisson(3.0, 10), rng.normal(size=10)),
        "dead": make_series("dead", [0] * 4, [0.0] * 4, inactive=[1, 1, 1, 1]),
    }
    frame = group_tests(
        panels,
        {"a": "Graduated", "b": "Graduated", "dead": "Retired"},
        variables=(ST_VAR,),
    )
    assert len(frame) == 0  # Retired collapses to an empty sample

    mixed = group_tests(
        panels,
        {"a": "Graduated", "b": "Retired", "dead": "Retired"},
        variables=(ST_VAR,),
    )
    assert len(mixed) == 1
    assert (mixed.iloc[0].n_a, mixed.iloc[0].n_b) == (1, 1)


def test_group_tests_validation():
    rng = np.random.default_rng(9)
    panels = {"a": coupled_project(rng, "a")}
    with pytest.raises(ValueError, match="missing variable"):
        group_tests(panels, {"a": "G"}, variables=("bogus",))
    with pytest.raises(ValueError, match="unknown project"):
        group_tests(panels, {"zzz": "G"})
