"""The eight monthly socio-technical metrics."""
from __future__ import annotations

from dataclasses import dataclass

from .graphs import MonthlySocialNet, MonthlyTechNet


@dataclass(frozen=True)
class MetricRow:
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

    def __post_init__(self):
        for name in ("s_graph_density", "s_avg_clustering_coef", "t_graph_density"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")


def undirected_projection(net: MonthlySocialNet) -> dict[str, set[str]]:
    """Unweighted undirected adjacency over the social net.

    Nodes are keyed in sorted order so float accumulations over the adjacency
    are reproducible across processes (set iteration is hash-seeded).
    """
    adjacency: dict[str, set[str]] = {node: set() for node in sorted(net.nodes)}
    for src, dst in net.edges:
        adjacency[src].add(dst)
        adjacency[dst].add(src)
    return adjacency


def avg_clustering(net: MonthlySocialNet) -> float:
    """Mean local clustering on the undirected unweighted projection.

    Nodes with fewer than two neighbours contribute 0.
    """
    adjacency = undirected_projection(net)
    if not adjacency:
        return 0.0
    total = 0.0
    for neighbours in adjacency.values():
        k = len(neighbours)
        if k < 2:
            continue
        links = 0
        members = sorted(neighbours)
        for i, u in enumerate(members):
            u_adj = adjacency[u]
            for w in members[i + 1 :]:
                if w in u_adj:
                    links += 1
        total += 2.0 * links / (k * (k - 1))
    return total / len(adjacency)


def social_metrics(net: MonthlySocialNet) -> tuple[float, float, float, float]:
    """(s_num_nodes, s_graph_density, s_avg_clustering_coef, s_weighted_mean_degree)."""
    n = len(net.nodes)
    density = len(net.edges) / (n * (n - 1)) if n >= 2 else 0.0
    clustering = avg_clustering(net)
    weighted = sum(net.edges.values())
    # Every edge contributes its weight once to the source's out-degree and
    # once to the destination's in-degree.
    mean_degree = 2.0 * weighted / n if n else 0.0
    return float(n), density, clustering, mean_degree


def tech_metrics(net: MonthlyTechNet) -> tuple[float, float, float, float]:
    """(t_graph_density, t_num_dev_nodes, t_num_file_nodes, t_num_file_per_dev)."""
    devs = len(net.dev_nodes)
    files = len(net.file_nodes)
    density = len(net.edges) / (devs * files) if devs and files else 0.0
    per_dev = files / devs if devs else 0.0
    return density, float(devs), float(files), per_dev


def metric_row(
    project_id: str,
    month_index: int,
    social: MonthlySocialNet | None,
    tech: MonthlyTechNet | None,
) -> MetricRow:
    """Combine one month's nets (either may be absent) into a MetricRow."""
    if social is not None:
        s_nodes, s_density, s_clust, s_degree = social_metrics(social)
    else:
        s_nodes = s_density = s_clust = s_degree = 0.0
    if tech is not None:
        t_density, t_devs, t_files, t_per_dev = tech_metrics(tech)
    else:
        t_density = t_devs = t_files = t_per_dev = 0.0
    return MetricRow(
        project_id=project_id,
        month_index=month_index,
        s_num_nodes=s_nodes,
        s_graph_density=s_density,
        s_avg_clustering_coef=s_clust,
        s_weighted_mean_degree=s_degree,
        t_graph_density=t_density,
        t_num_dev_nodes=t_devs,
        t_num_file_nodes=t_files,
        t_num_file_per_dev=t_per_dev,
    )
