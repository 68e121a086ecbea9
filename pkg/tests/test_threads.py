"""Reply-thread reconstruction order and fallbacks."""
import datetime as dt

from govnet.ingest import normalize_subject, resolve_parents

from conftest import make_email, ts


def test_normalize_subject_strips_reply_prefixes():
    assert normalize_subject("Re: Release plan") == ("release plan", True)
    assert normalize_subject("RE: re: Fwd: Release plan") == ("release plan", True)
    assert normalize_subject("Re[2]: Release  plan") == ("release plan", True)
    assert normalize_subject("Release plan") == ("release plan", False)
    assert normalize_subject("") == ("", False)


def test_in_reply_to_takes_precedence():
    root = make_email("<a@x>", subject="Plan", sent_at=ts(2015, 1, 10))
    other = make_email("<b@x>", subject="Other", sent_at=ts(2015, 1, 11))
    reply = make_email(
        "<c@x>",
        subject="Re: Plan",
        sent_at=ts(2015, 1, 12),
        in_reply_to="<b@x>",
        references=["<a@x>"],
    )
    parents = resolve_parents([root, other, reply])
    assert parents["<c@x>"] == "<b@x>"


def test_references_fallback_uses_last_entry():
    root = make_email("<a@x>", subject="Plan", sent_at=ts(2015, 1, 10))
    mid = make_email("<b@x>", subject="Re: Plan", sent_at=ts(2015, 1, 11))
    reply = make_email(
        "<c@x>",
        subject="Re: Plan",
        sent_at=ts(2015, 1, 12),
        in_reply_to="<missing@x>",
        references=["<a@x>", "<b@x>"],
    )
    parents = resolve_parents([root, mid, reply])
    assert parents["<c@x>"] == "<b@x>"


def test_subject_fallback_needs_reply_prefix():
    root = make_email("<a@x>", subject="Plan", sent_at=ts(2015, 1, 10))
    repost = make_email("<b@x>", subject="Plan", sent_at=ts(2015, 1, 12))
    reply = make_email("<c@x>", subject="Re: Plan", sent_at=ts(2015, 1, 14))
    parents = resolve_parents([root, repost, reply])
    assert "<b@x>" not in parents  # identical fresh subject is not a reply
    assert parents["<c@x>"] == "<b@x>"  # nearest earlier same-subject message


def test_subject_fallback_30_day_window():
    root = make_email("<a@x>", subject="Plan", sent_at=ts(2015, 1, 1))
    late = make_email("<b@x>", subject="Re: Plan", sent_at=ts(2015, 1, 31))
    too_late = make_email("<c@x>", subject="Re: Plan", sent_at=ts(2015, 4, 1))
    parents = resolve_parents([root, late, too_late])
    assert parents["<b@x>"] == "<a@x>"
    assert "<c@x>" not in parents  # 60 days after the nearest same subject
    lone = make_email("<d@x>", subject="Re: Plan", sent_at=ts(2015, 1, 1))
    only_late = make_email(
        "<e@x>", subject="Re: Plan", sent_at=ts(2015, 1, 1) + dt.timedelta(days=31)
    )
    parents = resolve_parents([lone, only_late])
    assert "<e@x>" not in parents


def test_unresolvable_reply_stays_root():
    reply = make_email(
        "<a@x>", subject="Re: Gone", in_reply_to="<missing@x>", sent_at=ts()
    )
    assert resolve_parents([reply]) == {}


def test_self_reference_ignored():
    email = make_email("<a@x>", subject="Plan", in_reply_to="<a@x>", sent_at=ts())
    assert resolve_parents([email]) == {}
