"""Synthetic incubator-style corpus generator for tests and demos.

Produces a corpus tree (mbox archives, commit logs, manifests, roster,
aliases, gold sentence labels, policy statements, and a ready config.toml)
that exercises every ingest path: threads linked by In-Reply-To, References,
and subject fallback; quoted reply bodies; HTML parts; bot traffic; grace
window and out-of-window records; alias merging; a mid-incubation role
change; inactive months; and malformed commit-log lines.  Output is a pure
function of the seed.
"""
from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from email.utils import format_datetime
from pathlib import Path

import numpy as np

from ..ingest.mbox import html_to_text, strip_quotes
from ..ingest.sentences import split_sentences
from ..isdetect.io import write_gold

IS_TEMPLATES = (
    "You must sign the ICLA before we can merge your {module} patch.",
    "All committers should vote on the {version} release candidate within {hours} hours.",
    "The PPMC must approve every new committer nomination.",
    "Please vote on releasing {project} {version}.",
    "The vote is open for {hours} hours.",
    "We require a license header in every source file under {module}.",
    "Mentors shall review the podling report before the board meeting.",
    "Release artifacts must be signed with a key from the project KEYS file.",
    "You may not include category-x dependencies in the release.",
    "Contributors should file a ticket before sending large patches.",
    "Every release requires three binding +1 votes from the IPMC.",
    "The project must publish meeting notes to the public list.",
    "Binary packages may be distributed only after the source release is approved.",
    "New committers must be voted in on the private list.",
    "All code donations require a software grant on file.",
    "Trademark usage must follow the foundation branding policy.",
    "Security issues shall be reported to the security list, not the public tracker.",
    "The release manager must stage artifacts in the dist area before the vote.",
)

CHATTER_TEMPLATES = (
    "I pushed a fix for the flaky {module} test.",
    "The nightly build passed after the rebase.",
    "Thanks for the patch, merged as r{rev}.",
    "Has anyone seen the NPE in the {module} module?",
    "I will be offline next week.",
    "The demo at the meetup went well.",
    "Benchmarks show a {pct} percent speedup on the {module} path.",
    "I opened {ticket} to track the regression.",
    "The docs for {module} are out of date.",
    "Can someone review my change to {module}?",
    "Upgrading {dep} fixed the memory leak for me.",
    "The wiki page on setup needs screenshots.",
    "I refactored the {module} internals, no behavior change.",
    "My laptop died, so I am resending this from webmail.",
    "The tutorial from the conference is now on my blog.",
    "Can we schedule the sync for Thursday?",
    "I cannot reproduce the failure on my machine.",
    "The parser now handles nested comments.",
    "Test coverage for {module} is above eighty percent now.",
    "The {module} benchmark suite needs a warmup phase.",
)

POLICY_BLOCKS = (
    "Podlings must submit a report in each of their first three months. "
    "The report shall list all new committers and any license issues.",
    "A release vote requires at least three binding +1 votes and more +1 than -1. "
    "Votes must stay open for a minimum of 72 hours.",
    "All source files must carry the foundation license header. "
    "Dependencies under category-x licenses may not ship in any release.",
    "New committers must be elected by the PPMC on the private list.",
    "Mentors should review every podling report before submission to the board.",
    "The release manager must publish signed artifacts through the dist area.",
    "Projects may not announce releases before the IPMC vote has closed.",
    "Every code donation requires a software grant recorded by the secretary.",
)

ROOT_SUBJECTS = (
    "[VOTE] release {project} {version}",
    "[DISCUSS] {module} redesign",
    "release candidate {version}",
    "new committer nomination",
    "podling report draft",
    "license header cleanup in {module}",
    "CI failures on {module}",
    "roadmap for the next quarter",
    "graduation checklist",
    "website refresh",
    "upgrading {dep}",
    "flaky tests in {module}",
)

MODULES = ("parser", "scheduler", "router", "storage", "codec", "api", "metrics")
DEPS = ("guava", "netty", "jackson", "slf4j")

FIRST_NAMES = (
    "alice", "bruno", "carol", "dana", "elias", "fiona", "gavin", "hana",
    "ivan", "june", "karl", "lena", "marco", "nadia", "oscar", "petra",
    "quinn", "rosa", "stefan", "tara", "umar", "vera", "wendy", "yusuf",
)
LAST_NAMES = (
    "smith", "ortega", "novak", "fox", "weber", "lind", "okafor", "tanaka",
    "silva", "moreau", "jensen", "kaur", "ricci", "bauer", "aldana", "murphy",
    "blanc", "soto", "hughes", "ishida", "varga", "petrov", "young", "adeyemi",
)

SOURCE_FILES = (
    "src/main/java/org/apache/{project}/{module}/Engine.java",
    "src/main/java/org/apache/{project}/{module}/Context.java",
    "src/main/java/org/apache/{project}/{module}/Util.java",
    "src/test/java/org/apache/{project}/{module}/EngineTest.java",
    "python/{module}_client.py",
    "pom.xml",
    "README.md",
    "docs/{module}.md",
    "conf/{module}.xml",
)
NON_SOURCE_FILES = ("site/logo.png", "data/sample.bin", "notes.tmp")

CONFIG_TOML = """\
[run]
corpus_root = "."
output_dir = "out"
seed = 7
jobs = 2

[ingest]
gold = "gold.jsonl"
policy = "policy_statements.txt"

[classifier]
kind = "baseline"

[topics]
k_grid = [2, 3, 4, 5, 6]
seeds = [0, 1]
iterations = 300

[stats]
granger_lag = 2
difference_nonstationary = true
"""


@dataclass(frozen=True)
class Person:
    name: str
    address: str
    role: str


@dataclass
class ProjectSpec:
    project_id: str
    outcome: str
    start: dt.date
    end: dt.date
    lists: tuple[str, ...] = ("dev",)

    @property
    def n_months(self) -> int:
        return (self.end.year - self.start.year) * 12 + (self.end.month - self.start.month)


def default_projects() -> list[ProjectSpec]:
    return [
        ProjectSpec("aether", "Graduated", dt.date(2015, 1, 15), dt.date(2016, 7, 15),
                    lists=("dev", "user")),
        ProjectSpec("boreas", "Graduated", dt.date(2015, 3, 1), dt.date(2016, 9, 1)),
        ProjectSpec("chronos", "Retired", dt.date(2015, 2, 10), dt.date(2016, 4, 10)),
    ]


@dataclass
class _Msg:
    message_id: str
    list_name: str
    sent_at: dt.datetime
    sender: Person
    to: list[str]
    subject: str
    raw_body: str
    is_sentences: tuple[str, ...]
    in_reply_to: str | None = None
    references: list[str] = field(default_factory=list)
    html: bool = False
    is_bot: bool = False


def _month_start(start: dt.date, m: int) -> tuple[int, int]:
    total = start.year * 12 + (start.month - 1) + m
    return total // 12, total % 12 + 1


def _pick(rng: np.random.Generator, pool):
    return pool[int(rng.integers(len(pool)))]


def _fill(rng: np.random.Generator, template: str, project: str) -> str:
    return template.format(
        project=project,
        module=_pick(rng, MODULES),
        version=f"0.{int(rng.integers(1, 9))}.0",
        hours=_pick(rng, (24, 48, 72)),
        rev=int(rng.integers(1000, 9999)),
        pct=int(rng.integers(3, 40)),
        ticket=f"{project.upper()}-{int(rng.integers(1, 400))}",
        dep=_pick(rng, DEPS),
    )


def _people(rng: np.random.Generator, spec: ProjectSpec, shared_mentor: Person) -> list[Person]:
    order = rng.permutation(len(FIRST_NAMES))
    people = [shared_mentor]
    idx = 0

    def take(role: str, domain: str) -> Person:
        nonlocal idx
        while True:
            first = FIRST_NAMES[order[idx % len(order)]]
            last = LAST_NAMES[int(rng.integers(len(LAST_NAMES)))]
            idx += 1
            address = f"{first}.{last}@{domain}"
            if all(p.address != address for p in people):
                name = f"{first.capitalize()} {last.capitalize()}"
                return Person(name, address, role)

    people.append(take("Mentor", "apache.org"))
    for _ in range(3 + int(rng.integers(2))):
        people.append(take("Committer", "apache.org"))
    for _ in range(4 + int(rng.integers(3))):
        domain = _pick(rng, ("example.org", "gmail.com", "fastmail.net"))
        people.append(take("Contributor", domain))
    return people


def _compose_body(
    rng: np.random.Generator,
    project: str,
    p_is: float,
    parent: _Msg | None,
) -> tuple[str, tuple[str, ...], bool]:
    """Raw body text, the IS sentence instances in it, and an HTML flag."""
    n_sentences = 2 + int(rng.integers(6))
    sentences: list[str] = []
    positives: list[str] = []
    for _ in range(n_sentences):
        if rng.random() < p_is:
            text = _fill(rng, _pick(rng, IS_TEMPLATES), project)
            positives.append(text)
        else:
            text = _fill(rng, _pick(rng, CHATTER_TEMPLATES), project)
        sentences.append(text)
    html = rng.random() < 0.04
    if html:
        paragraphs = "".join(f"<p>{s}</p>" for s in sentences)
        return f"<html><body>{paragraphs}</body></html>", tuple(positives), True
    lines = [" ".join(sentences)]
    if parent is not None and not parent.html and rng.random() < 0.7:
        quoted = strip_quotes(parent.raw_body).splitlines()
        lines.append("")
        lines.append(f"On {format_datetime(parent.sent_at)}, {parent.sender.name} wrote:")
        for q in quoted[:2]:
            lines.append(f"> {q[:110]}")
    return "\n".join(lines), tuple(positives), False


def _bot_message(
    rng: np.random.Generator, project: str, seq: int, when: dt.datetime, list_name: str
) -> _Msg:
    kind = int(rng.integers(3))
    module = _pick(rng, MODULES)
    if kind == 0:
        sender = Person("Jenkins CI", "jenkins@builds.apache.org", "Contributor")
        subject = f"Build failed in Jenkins: {project} #{int(rng.integers(1, 900))}"
        body = f"See the console output for {module} at the build server."
    elif kind == 1:
        sender = Person("ASF JIRA", "jira@apache.org", "Contributor")
        ticket = f"{project.upper()}-{int(rng.integers(1, 400))}"
        subject = f"[jira] [Created] ({ticket}) NPE in {module}"
        body = f"Issue {ticket} was created by an anonymous reporter."
    else:
        sender = Person("GitBox", "gitbox@apache.org", "Contributor")
        subject = f"[GitBox] PR opened against {module}"
        body = "A new pull request notification from the mirror."
    return _Msg(
        message_id=f"<{project}-{list_name}-{seq:05d}@mail.example.org>",
        list_name=list_name,
        sent_at=when,
        sender=sender,
        to=[f"{list_name}@{project}.incubator.apache.org"],
        subject=subject,
        raw_body=body,
        is_sentences=(),
        is_bot=True,
    )


def _random_time(
    rng: np.random.Generator, year: int, month: int
) -> dt.datetime:
    return dt.datetime(
        year, month,
        int(rng.integers(1, 28)),
        int(rng.integers(24)),
        int(rng.integers(60)),
        int(rng.integers(60)),
        tzinfo=dt.timezone.utc,
    )


def _generate_project_emails(
    rng: np.random.Generator, spec: ProjectSpec, people: list[Person]
) -> list[_Msg]:
    project = spec.project_id
    n_months = spec.n_months
    messages: list[_Msg] = []
    recent: list[_Msg] = []
    is_count_by_month: dict[int, int] = {}
    z = 0.0
    seq = 0

    for m in range(-1, n_months + 2):
        year, month = _month_start(spec.start, m)
        z = 0.6 * z + 0.4 * float(rng.uniform(0.0, 0.3))
        p_is = float(np.clip(0.06 + 0.5 * z, 0.03, 0.3))
        if m < 0 or m > n_months:
            lam = 0.8
        elif spec.outcome == "Graduated":
            lam = 4.5 + 0.4 * min(m, 12) + 0.9 * is_count_by_month.get(m - 2, 0)
        else:
            lam = max(0.15, 7.0 - 0.65 * m)
        for list_name in spec.lists:
            share = 1.0 if list_name == "dev" else 0.25
            n_emails = int(rng.poisson(lam * share))
            times = sorted(_random_time(rng, year, month) for _ in range(n_emails))
            for when in times:
                sender = _pick(rng, people)
                parent = None
                if recent and rng.random() < 0.55:
                    parent = recent[-1 - int(rng.integers(min(len(recent), 30)))]
                body, positives, html = _compose_body(rng, project, p_is, parent)
                to = [f"{list_name}@{project}.incubator.apache.org"]
                if rng.random() < 0.5:
                    extra = _pick(rng, people)
                    if extra.address != sender.address:
                        to.append(f"{extra.name} <{extra.address}>")
                msg = _Msg(
                    message_id=f"<{project}-{list_name}-{seq:05d}@mail.example.org>",
                    list_name=list_name,
                    sent_at=when,
                    sender=sender,
                    to=to,
                    subject=_fill(rng, _pick(rng, ROOT_SUBJECTS), project),
                    raw_body=body,
                    is_sentences=positives,
                    html=html,
                )
                seq += 1
                if parent is not None:
                    subject = parent.subject
                    if not subject.lower().startswith("re:"):
                        subject = f"Re: {subject}"
                    msg.subject = subject
                    linkage = rng.random()
                    if linkage < 0.7:
                        msg.in_reply_to = parent.message_id
                        msg.references = (parent.references + [parent.message_id])[-4:]
                    elif linkage < 0.9:
                        msg.references = (parent.references + [parent.message_id])[-4:]
                    # else: subject-only linkage, no headers
                if 0 <= m <= n_months:
                    is_count_by_month[m] = is_count_by_month.get(m, 0) + len(positives)
                messages.append(msg)
                recent.append(msg)
            if n_emails and rng.random() < 0.35 and 0 <= m <= n_months:
                messages.append(_bot_message(rng, project, seq, times[-1], list_name))
                seq += 1
        recent = recent[-40:]

    # One message far outside the grace window, dropped and counted at ingest.
    year, month = _month_start(spec.start, n_months + 3)
    messages.append(
        _Msg(
            message_id=f"<{project}-dev-{seq:05d}@mail.example.org>",
            list_name="dev",
            sent_at=_random_time(rng, year, month),
            sender=_pick(rng, people),
            to=[f"dev@{project}.incubator.apache.org"],
            subject="late straggler",
            raw_body="This arrived long after retirement of the list.",
            is_sentences=(),
        )
    )
    return messages


def _write_mbox_tree(root: Path, spec: ProjectSpec, messages: list[_Msg]) -> None:
    by_file: dict[tuple[str, str], list[_Msg]] = {}
    for msg in messages:
        stamp = f"{msg.sent_at.year:04d}{msg.sent_at.month:02d}"
        by_file.setdefault((msg.list_name, stamp), []).append(msg)
    for (list_name, stamp), batch in sorted(by_file.items()):
        path = root / spec.project_id / list_name / f"{stamp}.mbox"
        path.parent.mkdir(parents=True, exist_ok=True)
        chunks = []
        for msg in sorted(batch, key=lambda m: (m.sent_at, m.message_id)):
            headers = [
                f"From {msg.sender.address} {msg.sent_at.ctime()}",
                f"Date: {format_datetime(msg.sent_at)}",
                f"From: {msg.sender.name} <{msg.sender.address}>",
                f"To: {', '.join(msg.to)}",
                f"Message-ID: {msg.message_id}",
            ]
            if msg.in_reply_to:
                headers.append(f"In-Reply-To: {msg.in_reply_to}")
            if msg.references:
                headers.append(f"References: {' '.join(msg.references)}")
            headers.append(f"Subject: {msg.subject}")
            headers.append("MIME-Version: 1.0")
            ctype = "text/html" if msg.html else "text/plain"
            headers.append(f"Content-Type: {ctype}; charset=utf-8")
            chunks.append("\n".join(headers) + "\n\n" + msg.raw_body + "\n")
        path.write_text("\n".join(chunks), encoding="utf-8")


def _generate_commits(
    rng: np.random.Generator, spec: ProjectSpec, people: list[Person]
) -> list[str]:
    committers = [p for p in people if p.role in ("Committer", "Mentor")]
    contributors = [p for p in people if p.role == "Contributor"]
    project = spec.project_id
    lines: list[str] = []
    seq = 0
    for m in range(spec.n_months + 1):
        year, month = _month_start(spec.start, m)
        if spec.outcome == "Graduated":
            lam = 2.5 + 0.25 * min(m, 12)
        else:
            lam = max(0.1, 4.0 - 0.35 * m)
        for _ in range(int(rng.poisson(lam))):
            pool = committers if rng.random() < 0.8 or not contributors else contributors
            author = _pick(rng, pool)
            when = _random_time(rng, year, month)
            is_bot = rng.random() < 0.08
            if is_bot:
                author = Person("Jenkins CI", "jenkins@builds.apache.org", "Contributor")
            n_files = 1 + int(rng.integers(4))
            files = []
            for _ in range(n_files):
                pool = SOURCE_FILES if rng.random() < 0.85 else NON_SOURCE_FILES
                template = _pick(rng, pool)
                path = template.format(project=project, module=_pick(rng, MODULES))
                if project == "boreas":
                    path = f"trunk/{path}"
                files.append(path)
            entry = {
                "id": f"{project}-c{seq:05d}",
                "author": author.name,
                "email": author.address,
                "date": when.isoformat(),
                "files": sorted(set(files)),
            }
            seq += 1
            lines.append(json.dumps(entry, sort_keys=True))
    return lines


def generate_corpus(
    dest: str | Path, seed: int = 7, projects: list[ProjectSpec] | None = None
) -> Path:
    """Write a complete synthetic corpus tree under ``dest``."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    specs = projects if projects is not None else default_projects()

    shared_mentor = Person("Petra Novak", "petra.novak@apache.org", "Mentor")
    manifest_rows = ["project_id,outcome,incubation_start,incubation_end"]
    roster_rows = ["project_id,identity_key,role"]
    alias_rows = ["alias,canonical"]
    gold: dict[tuple[str, int], bool] = {}

    for spec in specs:
        manifest_rows.append(
            f"{spec.project_id},{spec.outcome},{spec.start.isoformat()},{spec.end.isoformat()}"
        )
        people = _people(rng, spec, shared_mentor)
        on_roster = [p for p in people if p.role != "Contributor"]
        contributors = [p for p in people if p.role == "Contributor"]
        # List most contributors explicitly; leave the rest to the default role.
        on_roster += contributors[: max(1, len(contributors) - 2)]
        for person in on_roster:
            roster_rows.append(f"{spec.project_id},{person.address},{person.role}")
        if spec.project_id == "aether" and contributors:
            promoted = contributors[0]
            roster_rows.append(f"{spec.project_id},{promoted.address},Committer,6")
        if spec.project_id == "boreas":
            karl = next((p for p in people if p.role == "Committer"), None)
            if karl is not None:
                local = karl.address.split("@")[0]
                alias_rows.append(f"{local}@gmail.com,{karl.address}")
                people.append(Person(karl.name, f"{local}@gmail.com", karl.role))

        messages = _generate_project_emails(rng, spec, people)
        _write_mbox_tree(dest, spec, messages)

        for msg in messages:
            if msg.is_bot:
                continue
            m = (msg.sent_at.year - spec.start.year) * 12 + (msg.sent_at.month - spec.start.month)
            if not -1 <= m <= spec.n_months + 1:
                continue
            body = html_to_text(msg.raw_body) if msg.html else msg.raw_body
            spans = split_sentences(strip_quotes(body))
            for span in spans:
                label = any(t in span.text for t in msg.is_sentences)
                gold[(msg.message_id, span.index)] = label

        commit_lines = _generate_commits(rng, spec, people)
        if spec.project_id == "chronos":
            commit_lines.append('{"id": "chronos-broken", "date": "not-a-date", "files": []}')
            commit_lines.append("this line is not json")
        (dest / spec.project_id / "commits.jsonl").parent.mkdir(parents=True, exist_ok=True)
        (dest / spec.project_id / "commits.jsonl").write_text(
            "\n".join(commit_lines) + "\n", encoding="utf-8"
        )

    (dest / "manifests.csv").write_text("\n".join(manifest_rows) + "\n", encoding="utf-8")
    (dest / "roster.csv").write_text("\n".join(roster_rows) + "\n", encoding="utf-8")
    (dest / "aliases.csv").write_text("\n".join(alias_rows) + "\n", encoding="utf-8")
    write_gold(gold, dest / "gold.jsonl")
    (dest / "policy_statements.txt").write_text(
        "\n\n".join(POLICY_BLOCKS) + "\n", encoding="utf-8"
    )
    (dest / "config.toml").write_text(CONFIG_TOML, encoding="utf-8")
    return dest
