"""RFC-4155 mbox parsing into normalized Email records."""
from __future__ import annotations

import datetime as dt
import hashlib
import logging
import mailbox
import re
from email.header import decode_header, make_header
from email.message import Message
from email.utils import getaddresses, parsedate_to_datetime
from html.parser import HTMLParser
from pathlib import Path

from .bots import BotRules, detect_bot
from .records import Email
from .sentences import split_sentences
from .stats import IngestStats

log = logging.getLogger(__name__)


class IngestError(Exception):
    """Fatal ingest failure (unreadable archive, missing manifest, ...)."""


class _TextExtractor(HTMLParser):
    _SKIP = {"script", "style", "head"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1
        elif tag in ("br", "p", "div", "tr", "li"):
            self.chunks.append("\n")

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data):
        if not self._skip_depth:
            self.chunks.append(data)


def html_to_text(html: str) -> str:
    parser = _TextExtractor()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        # Pathological markup: fall back to a crude tag strip.
        return re.sub(r"<[^>]+>", " ", html)
    return "".join(parser.chunks)


_QUOTE_LINE = re.compile(r"^\s*>")
_ATTRIBUTION = re.compile(
    r"^\s*(on\s.{0,120}\bwrote:\s*$|-{2,}\s*original message\s*-{2,}|"
    r".{0,120}\bwrote:\s*$|from:\s.*$)",
    re.IGNORECASE,
)
_SIGNATURE_MARK = re.compile(r"^--\s*$")


def strip_quotes(body: str) -> str:
    """Remove quoted reply lines, attribution lines, and trailing signatures.

    Prevents statements quoted back in replies from being counted twice.
    """
    kept: list[str] = []
    for line in body.splitlines():
        if _SIGNATURE_MARK.match(line):
            break
        if _QUOTE_LINE.match(line) or _ATTRIBUTION.match(line):
            continue
        kept.append(line)
    text = "\n".join(kept)
    text = re.sub(r"\n{3,}", "\n\n", text)
    return text.strip()


def _decode(value) -> str:
    if value is None:
        return ""
    try:
        return str(make_header(decode_header(str(value))))
    except Exception:
        return str(value)


def _payload_text(part: Message) -> str:
    payload = part.get_payload(decode=True)
    if payload is None:
        raw = part.get_payload()
        return raw if isinstance(raw, str) else ""
    charset = part.get_content_charset() or "utf-8"
    for cs in (charset, "utf-8", "latin-1"):
        try:
            return payload.decode(cs, errors="strict")
        except (LookupError, UnicodeDecodeError):
            continue
    return payload.decode("utf-8", errors="replace")


def extract_body(msg: Message) -> str:
    """Best text rendering of a message: prefer text/plain, fall back to HTML."""
    plain: list[str] = []
    html: list[str] = []
    stack = [msg]
    while stack:
        part = stack.pop(0)
        if part.is_multipart():
            stack = list(part.get_payload()) + stack
            continue
        ctype = part.get_content_type()
        if ctype == "text/plain":
            plain.append(_payload_text(part))
        elif ctype == "text/html":
            html.append(_payload_text(part))
    if plain:
        return "\n".join(plain)
    if html:
        return html_to_text("\n".join(html))
    return ""


_MSGID = re.compile(r"<[^<>\s]+>")


def _message_ids(value: str | None) -> list[str]:
    return _MSGID.findall(value or "")


def synthetic_message_id(sender: str, sent_at: dt.datetime, subject: str) -> str:
    digest = hashlib.sha1(
        "|".join((sender, sent_at.isoformat(), subject)).encode("utf-8", "replace")
    ).hexdigest()[:16]
    return f"<synthetic-{digest}@govnet>"


def _to_utc(value: str | None) -> dt.datetime | None:
    if not value:
        return None
    try:
        parsed = parsedate_to_datetime(value)
    except (TypeError, ValueError):
        return None
    if parsed is None:
        return None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=dt.timezone.utc)
    return parsed.astimezone(dt.timezone.utc)


def message_to_email(
    msg: Message, project_id: str, list_name: str = "", bot_rules: BotRules | None = None
) -> Email | None:
    """Convert one parsed message; None when essential headers are unusable."""
    sent_at = _to_utc(msg.get("Date"))
    sender_raw = _decode(msg.get("From"))
    if sent_at is None or not sender_raw:
        return None
    subject = _decode(msg.get("Subject"))
    body_raw = extract_body(msg)
    body = strip_quotes(body_raw)
    mids = _message_ids(msg.get("Message-ID"))
    message_id = mids[0] if mids else synthetic_message_id(sender_raw, sent_at, subject)
    in_reply_to = _message_ids(msg.get("In-Reply-To"))
    references = _message_ids(msg.get("References"))
    recipients = [
        addr.lower()
        for _, addr in getaddresses(msg.get_all("To", []) + msg.get_all("Cc", []))
        if addr and "@" in addr
    ]
    is_bot = detect_bot(sender_raw, subject, body, rules=bot_rules)
    return Email(
        message_id=message_id,
        project_id=project_id,
        list_name=list_name,
        sent_at=sent_at,
        sender=sender_raw.lower(),  # canonicalized later via the identity map
        sender_raw=sender_raw,
        recipients=recipients,
        in_reply_to=in_reply_to[0] if in_reply_to else None,
        references=references,
        subject=subject,
        body=body,
        is_bot=is_bot,
        sentences=[] if is_bot else split_sentences(body),
    )


def parse_mbox(
    path: str | Path,
    project_id: str,
    list_name: str = "",
    bot_rules: BotRules | None = None,
    stats: IngestStats | None = None,
) -> list[Email]:
    """Parse one mbox archive into Email records, in file order.

    Unreadable files raise IngestError; individually unparseable messages are
    skipped with a logged warning and counted in ``stats``.
    """
    path = Path(path)
    stats = stats if stats is not None else IngestStats()
    if not path.is_file():
        raise IngestError(f"mbox not readable: {path}")
    try:
        box = mailbox.mbox(str(path), create=False)
    except Exception as exc:  # pragma: no cover - mailbox rarely fails to open
        raise IngestError(f"mbox not readable: {path}: {exc}") from exc
    emails: list[Email] = []
    try:
        for key in box.iterkeys():
            try:
                msg = box.get_message(key)
                email = message_to_email(msg, project_id, list_name, bot_rules)
            except Exception as exc:
                log.warning("%s: skipping unparseable message %s: %s", path, key, exc)
                stats.emails_skipped += 1
                stats.bump(project_id, "emails_skipped")
                continue
            if email is None:
                log.warning("%s: skipping message %s with unusable headers", path, key)
                stats.emails_skipped += 1
                stats.bump(project_id, "emails_skipped")
                continue
            stats.emails_parsed += 1
            stats.bump(project_id, "emails_parsed")
            if email.is_bot:
                stats.emails_bot += 1
                stats.bump(project_id, "emails_bot")
            emails.append(email)
    finally:
        box.close()
    return emails
