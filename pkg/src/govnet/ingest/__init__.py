"""Raw-source ingestion: mbox mail archives, commit logs, identity data."""
from .records import (
    Commit,
    Email,
    Outcome,
    ProjectManifest,
    Role,
    SentenceSpan,
    month_index,
)
from .sentences import split_sentences
from .bots import BotRules, default_rules, detect_bot
from .identity import (
    IdentityMap,
    RoleAssignment,
    load_aliases,
    load_manifests,
    load_roster,
    resolve_identity,
)
from .mbox import IngestError, parse_mbox, strip_quotes, synthetic_message_id
from .threads import normalize_subject, resolve_parents
from .commits import (
    ExtensionWhitelist,
    convert_gitlog,
    default_whitelist,
    normalize_path,
    parse_commits,
)
from .corpus import (
    read_commits,
    read_emails,
    write_commits,
    write_emails,
    write_stats,
)
from .stats import IngestStats

__all__ = [
    "BotRules",
    "Commit",
    "Email",
    "ExtensionWhitelist",
    "IdentityMap",
    "IngestError",
    "IngestStats",
    "Outcome",
    "ProjectManifest",
    "Role",
    "RoleAssignment",
    "SentenceSpan",
    "convert_gitlog",
    "default_rules",
    "default_whitelist",
    "detect_bot",
    "load_aliases",
    "load_manifests",
    "load_roster",
    "month_index",
    "normalize_path",
    "normalize_subject",
    "resolve_parents",
    "parse_commits",
    "parse_mbox",
    "read_commits",
    "read_emails",
    "resolve_identity",
    "split_sentences",
    "strip_quotes",
    "synthetic_message_id",
    "write_commits",
    "write_emails",
    "write_stats",
]
