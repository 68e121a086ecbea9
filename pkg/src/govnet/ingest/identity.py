"""Identity normalization: alias merging and per-project role lookup."""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, field
from email.utils import parseaddr
from pathlib import Path

from .records import Outcome, ProjectManifest, Role

UNKNOWN_IDENTITY = "unknown"


@dataclass
class RoleAssignment:
    role: Role
    from_month: int = 0


class IdentityMap:
    """Alias -> canonical identity mapping plus per-project role rosters.

    Canonical keys are lowercase email addresses. Roles may change over a
    project's lifetime: a roster row can carry a ``from_month`` (month index,
    default 0) and the assignment with the largest ``from_month <= month``
    wins. Identities absent from the roster are contributors.
    """

    def __init__(self) -> None:
        self.aliases: dict[str, str] = {}
        self.rosters: dict[str, dict[str, list[RoleAssignment]]] = {}

    def add_alias(self, alias: str, canonical: str) -> None:
        alias = alias.strip().lower()
        canonical = canonical.strip().lower()
        existing = self.aliases.get(alias)
        if existing is not None and existing != canonical:
            raise ValueError(f"alias {alias!r} maps to both {existing!r} and {canonical!r}")
        self.aliases[alias] = canonical

    def add_role(self, project_id: str, identity: str, role: Role | str, from_month: int = 0) -> None:
        role = Role(role)
        entry = self.rosters.setdefault(project_id, {}).setdefault(identity.strip().lower(), [])
        entry.append(RoleAssignment(role, from_month))
        entry.sort(key=lambda a: a.from_month)

    def canonical(self, address: str) -> str:
        address = address.strip().lower()
        return self.aliases.get(address, address)

    def role_of(self, project_id: str, identity: str, month: int = 0) -> Role:
        assignments = self.rosters.get(project_id, {}).get(identity, [])
        current = Role.CONTRIBUTOR
        for a in assignments:
            if a.from_month <= month:
                current = a.role
        return current

    def roster_identities(self, project_id: str) -> set[str]:
        return set(self.rosters.get(project_id, {}))


def resolve_identity(
    raw_from: str, idmap: IdentityMap, project_id: str = "", month: int = 0
) -> tuple[str, Role]:
    """Resolve an RFC-5322 From value to (canonical identity, role).

    Unparseable input resolves to the sentinel ``unknown`` identity with the
    Contributor role; callers count those occurrences.
    """
    _, address = parseaddr(raw_from or "")
    if not address or "@" not in address:
        return UNKNOWN_IDENTITY, Role.CONTRIBUTOR
    key = idmap.canonical(address)
    return key, idmap.role_of(project_id, key, month)


def load_aliases(path: str | Path, idmap: IdentityMap | None = None) -> IdentityMap:
    """Load an alias CSV (``alias,canonical``; header optional)."""
    idmap = idmap or IdentityMap()
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() == "alias":
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: alias row needs 2 columns: {row!r}")
            idmap.add_alias(row[0], row[1])
    return idmap


def load_roster(path: str | Path, idmap: IdentityMap | None = None) -> IdentityMap:
    """Load a roster CSV (``project_id,identity_key,role[,from_month]``)."""
    idmap = idmap or IdentityMap()
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() == "project_id":
                continue
            if len(row) < 3:
                raise ValueError(f"{path}: roster row needs 3+ columns: {row!r}")
            from_month = int(row[3]) if len(row) > 3 and row[3].strip() else 0
            idmap.add_role(row[0].strip(), row[1], row[2].strip(), from_month)
    return idmap


def load_manifests(path: str | Path) -> dict[str, ProjectManifest]:
    """Load the project manifest CSV.

    Columns: ``project_id,outcome,incubation_start,incubation_end`` with ISO
    dates; outcome is Graduated or Retired.
    """
    manifests: dict[str, ProjectManifest] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() == "project_id":
                continue
            if len(row) < 4:
                raise ValueError(f"{path}: manifest row needs 4 columns: {row!r}")
            pid = row[0].strip()
            manifests[pid] = ProjectManifest(
                project_id=pid,
                outcome=Outcome(row[1].strip()),
                incubation_start=dt.date.fromisoformat(row[2].strip()),
                incubation_end=dt.date.fromisoformat(row[3].strip()),
            )
    return manifests
