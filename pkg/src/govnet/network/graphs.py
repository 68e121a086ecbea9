"""Monthly social and technical network construction."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..ingest.records import Commit, Email, ProjectManifest, month_index
from ..ingest.threads import resolve_parents


@dataclass(frozen=True)
class MonthlySocialNet:
    """Directed communication graph for one (project, month)."""

    project_id: str
    month_index: int
    nodes: frozenset[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        for (src, dst), weight in self.edges.items():
            if src == dst:
                raise ValueError(f"self-loop {src!r} in social net")
            if weight < 1:
                raise ValueError(f"non-positive weight on ({src!r}, {dst!r})")


@dataclass(frozen=True)
class MonthlyTechNet:
    """Bipartite developer-file graph for one (project, month)."""

    project_id: str
    month_index: int
    dev_nodes: frozenset[str]
    file_nodes: frozenset[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        for (dev, path), weight in self.edges.items():
            if dev not in self.dev_nodes or path not in self.file_nodes:
                raise ValueError(f"edge ({dev!r}, {path!r}) off the bipartition")
            if weight < 1:
                raise ValueError(f"non-positive weight on ({dev!r}, {path!r})")


def build_social_net(
    emails: list[Email],
    month_index: int,
    project_id: str = "",
    parents: dict[str, str] | None = None,
    sender_of: dict[str, str] | None = None,
) -> MonthlySocialNet:
    """Build the month's directed graph from already-bucketed emails.

    ``parents`` may come from corpus-wide thread resolution so replies to
    earlier months still form edges; by default threads are resolved within
    the given emails only.  Direct-address edges are added for recipients who
    themselves sent mail that month (list addresses never do).
    """
    retained = sorted(
        (e for e in emails if not e.is_bot), key=lambda e: (e.sent_at, e.message_id)
    )
    if parents is None:
        parents = resolve_parents(retained)
    if sender_of is None:
        sender_of = {e.message_id: e.sender for e in retained}
    if not project_id and retained:
        project_id = retained[0].project_id

    month_senders = {e.sender for e in retained}
    nodes = set(month_senders)
    edges: dict[tuple[str, str], int] = defaultdict(int)
    for email in retained:
        replier = email.sender
        parent_id = parents.get(email.message_id)
        if parent_id is not None:
            original = sender_of.get(parent_id)
            if original is not None and original != replier:
                edges[(original, replier)] += 1
                nodes.add(original)
        for recipient in sorted(set(email.recipients)):
            if recipient != replier and recipient in month_senders:
                edges[(replier, recipient)] += 1
    return MonthlySocialNet(
        project_id=project_id,
        month_index=month_index,
        nodes=frozenset(nodes),
        edges=dict(edges),
    )


def build_tech_net(
    commits: list[Commit], month_index: int, project_id: str = ""
) -> MonthlyTechNet:
    """Build the month's bipartite dev-file graph from bucketed commits."""
    retained = [c for c in commits if not c.is_bot]
    if not project_id and retained:
        project_id = retained[0].project_id
    edges: dict[tuple[str, str], int] = defaultdict(int)
    for commit in retained:
        for path in commit.files:
            edges[(commit.author, path)] += 1
    return MonthlyTechNet(
        project_id=project_id,
        month_index=month_index,
        dev_nodes=frozenset(dev for dev, _ in edges),
        file_nodes=frozenset(path for _, path in edges),
        edges=dict(edges),
    )


def bucket_by_month(
    emails: list[Email], commits: list[Commit], manifest: ProjectManifest
) -> tuple[dict[int, list[Email]], dict[int, list[Commit]]]:
    """Group retained records by months since incubation start.

    Bot records are dropped.  Grace-window records (one month either side of
    the incubation window) stay in the corpus for thread linkage but fall
    outside the [0, end] bucket range, so they are not bucketed here.
    """
    start = manifest.incubation_start
    last = manifest.end_month_index
    email_buckets: dict[int, list[Email]] = defaultdict(list)
    commit_buckets: dict[int, list[Commit]] = defaultdict(list)
    for email in emails:
        if email.is_bot:
            continue
        m = month_index(email.sent_at, start)
        if 0 <= m <= last:
            email_buckets[m].append(email)
    for commit in commits:
        if commit.is_bot:
            continue
        m = month_index(commit.authored_at, start)
        if 0 <= m <= last:
            commit_buckets[m].append(commit)
    return dict(email_buckets), dict(commit_buckets)


def monthly_networks(
    emails: list[Email], commits: list[Commit], manifest: ProjectManifest
) -> tuple[dict[int, MonthlySocialNet], dict[int, MonthlyTechNet]]:
    """Build all monthly nets for one project with corpus-wide thread links."""
    retained = sorted(
        (e for e in emails if not e.is_bot), key=lambda e: (e.sent_at, e.message_id)
    )
    parents = resolve_parents(retained)
    sender_of = {e.message_id: e.sender for e in retained}
    email_buckets, commit_buckets = bucket_by_month(emails, commits, manifest)
    social = {
        m: build_social_net(
            bucket, m, manifest.project_id, parents=parents, sender_of=sender_of
        )
        for m, bucket in email_buckets.items()
    }
    tech = {
        m: build_tech_net(bucket, m, manifest.project_id)
        for m, bucket in commit_buckets.items()
    }
    return social, tech
