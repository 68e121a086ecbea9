"""Monthly socio-technical networks and their metrics."""
from .graphs import (
    MonthlySocialNet,
    MonthlyTechNet,
    bucket_by_month,
    build_social_net,
    build_tech_net,
    monthly_networks,
)
from .metrics import (
    MetricRow,
    avg_clustering,
    metric_row,
    social_metrics,
    tech_metrics,
    undirected_projection,
)
from .panel import (
    CSV_HEADER,
    IS_COLUMNS,
    METRIC_COLUMNS,
    PanelRow,
    PanelSeries,
    assemble_panel,
    panel_frame,
    read_metrics_csv,
    summary_frame,
    summary_stats,
    write_metrics_csv,
)

__all__ = [
    "CSV_HEADER",
    "IS_COLUMNS",
    "METRIC_COLUMNS",
    "MetricRow",
    "MonthlySocialNet",
    "MonthlyTechNet",
    "PanelRow",
    "PanelSeries",
    "assemble_panel",
    "avg_clustering",
    "bucket_by_month",
    "build_social_net",
    "build_tech_net",
    "metric_row",
    "monthly_networks",
    "panel_frame",
    "read_metrics_csv",
    "social_metrics",
    "summary_frame",
    "summary_stats",
    "tech_metrics",
    "undirected_projection",
    "write_metrics_csv",
]
