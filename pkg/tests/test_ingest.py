"""Raw-source ingestion: mbox parsing, identities, commits, persistence."""
import datetime as dt
import json

import pytest

from govnet.ingest import (
    BotRules,
    Commit,
    IdentityMap,
    IngestError,
    IngestStats,
    Outcome,
    Role,
    convert_gitlog,
    default_whitelist,
    detect_bot,
    load_aliases,
    load_manifests,
    load_roster,
    month_index,
    normalize_path,
    parse_commits,
    parse_mbox,
    resolve_identity,
    split_sentences,
)
from govnet.ingest.corpus import read_commits, read_emails, write_commits, write_emails
from govnet.ingest.mbox import html_to_text, strip_quotes, synthetic_message_id

from conftest import make_email, make_manifest, ts

MBOX = """\
From alice@example.org Thu Jan 15 12:00:00 2015
Date: Thu, 15 Jan 2015 12:00:00 +0000
From: Alice Adams <alice@example.org>
To: dev@proj.example.org
Cc: Bob <bob@example.org>
Message-ID: <m1@example>
Subject: Release plan

We must vote on the release. I think it is ready.

From bob@example.org Fri Jan 16 09:30:00 2015
Date: Fri, 16 Jan 2015 10:30:00 +0100
From: Bob <bob@example.org>
To: dev@proj.example.org
Message-ID: <m2@example>
In-Reply-To: <m1@example>
References: <m0@example> <m1@example>
Subject: Re: Release plan

On Thu, Jan 15, Alice Adams wrote:
> We must vote on the release.
Agreed, let us start the vote.

From jenkins@builds.apache.org Fri Jan 16 11:00:00 2015
Date: Fri, 16 Jan 2015 11:00:00 +0000
From: jenkins@builds.apache.org
To: dev@proj.example.org
Message-ID: <m3@example>
Subject: Build failed in Jenkins: proj #12

See <https://builds.apache.org/job/proj/12/>

From carol@example.org Sat Jan 17 08:00:00 2015
From: Carol <carol@example.org>
To: dev@proj.example.org
Message-ID: <m4@example>
Subject: No date header

This one has no Date header and is skipped.

From dan@example.org Sun Jan 18 08:00:00 2015
Date: Sun, 18 Jan 2015 08:00:00 +0000
From: Dan <dan@example.org>
To: dev@proj.example.org
Subject: Missing message id

No identifier on this one.
"""


@pytest.fixture()
def mbox_path(tmp_path):
    path = tmp_path / "201501.mbox"
    path.write_text(MBOX, encoding="utf-8")
    return path


def test_parse_mbox_basics(mbox_path):
    stats = IngestStats()
    emails = parse_mbox(mbox_path, "proj", "dev", stats=stats)
    assert [e.message_id for e in emails[:2]] == ["<m1@example>", "<m2@example>"]
    first = emails[0]
    assert first.sender == "alice adams <alice@example.org>"
    assert first.sender_raw == "Alice Adams <alice@example.org>"
    assert first.recipients == ["dev@proj.example.org", "bob@example.org"]
    assert first.sent_at == ts(2015, 1, 15, 12)
    assert [s.text for s in first.sentences] == [
        "We must vote on the release.",
        "I think it is ready.",
    ]
    assert stats.emails_parsed == 4
    assert stats.emails_skipped == 1  # the message without a Date header
    assert stats.emails_bot == 1


def test_parse_mbox_reply_linkage_and_quote_stripping(mbox_path):
    emails = parse_mbox(mbox_path, "proj", "dev")
    reply = emails[1]
    assert reply.in_reply_to == "<m1@example>"
    assert reply.references == ["<m0@example>", "<m1@example>"]
    assert reply.sent_at == ts(2015, 1, 16, 9, 30)  # normalized to UTC
    assert reply.body == "Agreed, let us start the vote."


def test_parse_mbox_bot_detected_and_sentences_suppressed(mbox_path):
    emails = parse_mbox(mbox_path, "proj", "dev")
    bot = [e for e in emails if e.message_id == "<m3@example>"]
    assert bot and bot[0].is_bot and bot[0].sentences == []


def test_parse_mbox_synthetic_message_id(mbox_path):
    emails = parse_mbox(mbox_path, "proj", "dev")
    last = emails[-1]
    assert last.message_id.startswith("<synthetic-")
    assert last.message_id == synthetic_message_id(
        "Dan <dan@example.org>", last.sent_at, "Missing message id"
    )


def test_parse_mbox_missing_file_fatal(tmp_path):
    with pytest.raises(IngestError):
        parse_mbox(tmp_path / "absent.mbox", "proj")


def test_parse_mbox_deterministic(mbox_path):
    assert parse_mbox(mbox_path, "proj", "dev") == parse_mbox(mbox_path, "proj", "dev")


def test_html_to_text_drops_markup():
    text = html_to_text("<p>We must vote.</p><style>x{}</style><p>It is ready.</p>")
    assert "We must vote." in text and "It is ready." in text
    assert "x{}" not in text and "<p>" not in text


def test_strip_quotes_removes_quotes_attribution_signature():
    body = (
        "On Mon, Alice wrote:\n"
        "> old text\n"
        "New statement here.\n"
        "-- \n"
        "Bob\nSome Corp\n"
    )
    assert strip_quotes(body) == "New statement here."


def test_detect_bot_rules():
    assert detect_bot("jenkins@builds.apache.org")
    assert detect_bot("someone@example.org", subject="[jira] Created: (PROJ-1) bug")
    assert not detect_bot("alice@example.org", subject="Release plan")
    custom = BotRules.parse("sender: ^robot@\n")
    assert detect_bot("robot@example.org", rules=custom)
    assert not detect_bot("alice@example.org", rules=custom)


def test_bot_rules_rejects_bad_lines():
    with pytest.raises(ValueError):
        BotRules.parse("nonsense line without field\n")


def test_split_sentences_spans_tile_body():
    body = "We must vote on it. Dr. Smith agrees!\nNew paragraph here."
    spans = split_sentences(body)
    assert [s.text for s in spans] == [
        "We must vote on it.",
        "Dr. Smith agrees!",
        "New paragraph here.",
    ]
    assert spans[0].start == 0
    assert all(
        spans[i].end == spans[i + 1].start for i in range(len(spans) - 1)
    )
    assert spans[-1].end == len(body)
    assert split_sentences("") == []


def test_month_index_and_window():
    start = dt.date(2015, 1, 20)
    assert month_index(ts(2015, 1, 1), start) == 0
    assert month_index(ts(2015, 12, 31), start) == 11
    assert month_index(ts(2014, 12, 31), start) == -1
    manifest = make_manifest(start=start, end=dt.date(2015, 6, 10))
    assert manifest.end_month_index == 5
    assert manifest.in_window(ts(2014, 12, 1))  # grace month before
    assert manifest.in_window(ts(2015, 7, 1))  # grace month after
    assert not manifest.in_window(ts(2014, 11, 30))
    assert not manifest.in_window(ts(2015, 8, 1))


def test_load_manifests_and_outcomes(tmp_path):
    path = tmp_path / "manifests.csv"
    path.write_text(
        "project_id,outcome,incubation_start,incubation_end\n"
        "alpha,Graduated,2015-01-15,2016-07-15\n"
        "beta,Retired,2015-02-01,2016-02-01\n",
        encoding="utf-8",
    )
    manifests = load_manifests(path)
    assert set(manifests) == {"alpha", "beta"}
    assert manifests["alpha"].outcome is Outcome.GRADUATED
    assert manifests["beta"].outcome is Outcome.RETIRED
    assert manifests["alpha"].end_month_index == 18


def test_manifest_rejects_inverted_window():
    with pytest.raises(ValueError):
        make_manifest(start=dt.date(2016, 1, 1), end=dt.date(2015, 1, 1))


def test_identity_aliases_and_roles(tmp_path):
    aliases = tmp_path / "aliases.csv"
    aliases.write_text(
        "alias,canonical\nbob@gmail.com,bob@example.org\n", encoding="utf-8"
    )
    roster = tmp_path / "roster.csv"
    roster.write_text(
        "project_id,identity,role,from_month\n"
        "proj,alice@example.org,Mentor,\n"
        "proj,bob@example.org,Contributor,\n"
        "proj,bob@example.org,Committer,6\n",
        encoding="utf-8",
    )
    idmap = load_roster(roster, load_aliases(aliases))
    assert idmap.canonical("BOB@gmail.com") == "bob@example.org"
    key, role = resolve_identity("Alice <alice@example.org>", idmap, "proj", 0)
    assert (key, role) == ("alice@example.org", Role.MENTOR)
    _, early = resolve_identity("Bob <bob@gmail.com>", idmap, "proj", 5)
    _, late = resolve_identity("Bob <bob@gmail.com>", idmap, "proj", 6)
    assert early is Role.CONTRIBUTOR and late is Role.COMMITTER
    key, role = resolve_identity("not an address", idmap, "proj", 0)
    assert key == "unknown" and role is Role.CONTRIBUTOR
    key, role = resolve_identity("Eve <eve@other.org>", idmap, "proj", 0)
    assert key == "eve@other.org" and role is Role.CONTRIBUTOR


COMMITS = """\
{"id": "c1", "author": "Alice", "email": "alice@example.org", "date": "2015-03-02T10:00:00+00:00", "files": ["src/Main.java", "docs/guide.png"]}
{"id": "c2", "author": "bob@example.org", "date": "2015-03-03T11:00:00+00:00", "files": ["trunk/src/Util.java"]}
{"id": "c3", "author": "Bot", "email": "jenkins@builds.apache.org", "date": "2015-03-04T09:00:00+00:00", "files": ["pom.xml"]}
not json at all
{"id": "c5", "email": "alice@example.org", "date": "not-a-date", "files": []}
"""


def test_parse_commits_filters_and_normalizes(tmp_path):
    path = tmp_path / "commits.jsonl"
    path.write_text(COMMITS, encoding="utf-8")
    stats = IngestStats()
    commits = parse_commits(path, "proj", stats=stats)
    assert [c.commit_id for c in commits] == ["c1", "c2", "c3"]
    first = commits[0]
    assert first.author == "alice@example.org"
    assert first.files == ["src/Main.java"]  # .png is not whitelisted source
    assert commits[1].files == ["src/Util.java"]  # trunk/ prefix stripped
    assert commits[2].is_bot
    assert stats.commits_parsed == 3
    assert stats.commits_skipped == 2
    assert stats.commits_bot == 1


def test_normalize_path_and_whitelist():
    assert normalize_path("trunk/src/A.java") == "src/A.java"
    assert normalize_path("branches/feature-x/src/A.java") == "src/A.java"
    assert normalize_path("tags/v1/src/A.java") == "src/A.java"
    assert normalize_path("src/A.java") == "src/A.java"
    wl = default_whitelist()
    assert "src/main.py" in wl and "lib/core.java" in wl
    assert "logo.png" not in wl and "NOTICE" not in wl


def test_convert_gitlog_round_trip(tmp_path):
    source = tmp_path / "git.log"
    source.write_text(
        "commit abc1230\n"
        "Author: Alice <alice@example.org>\n"
        "Date: 2015-03-02T10:00:00+00:00\n"
        "\n"
        "    fix the build\n"
        "\n"
        "src/Main.java\n"
        "README.md\n"
        "\n"
        "commit def4560\n"
        "Author: Bob <bob@example.org>\n"
        "Date: 2015-03-03T11:00:00+00:00\n"
        "\n"
        "    add util\n"
        "\n"
        "src/Util.java\n",
        encoding="utf-8",
    )
    dest = tmp_path / "commits.jsonl"
    assert convert_gitlog(source, dest) == 2
    rows = [json.loads(line) for line in dest.read_text().splitlines()]
    assert rows[0]["id"] == "abc1230"
    assert rows[0]["email"] == "alice@example.org"
    assert rows[0]["files"] == ["src/Main.java", "README.md"]
    parsed = parse_commits(dest, "proj")
    assert [c.commit_id for c in parsed] == ["abc1230", "def4560"]


def test_corpus_round_trip(tmp_path):
    emails = [
        make_email("<a@x>", body="We must vote. It passes."),
        make_email("<b@x>", sender="bob@example.org", in_reply_to="<a@x>"),
    ]
    commits = [
        Commit(
            commit_id="c1",
            project_id="proj",
            author="alice@example.org",
            authored_at=ts(2015, 2, 1),
            files=["src/A.java"],
        )
    ]
    write_emails(emails, tmp_path)
    write_commits(commits, tmp_path)
    assert read_emails(tmp_path) == emails
    assert read_commits(tmp_path) == commits
