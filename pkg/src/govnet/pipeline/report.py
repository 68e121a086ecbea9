"""Markdown report rendered from analyze artifacts, byte-stable given them."""
from __future__ import annotations

import json
import math
from pathlib import Path

import pandas as pd

from .config import RunConfig


def _fmt(value, digits: int = 4) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (int,)) or (isinstance(value, float) and value.is_integer() and abs(value) < 1e15):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.{digits}f}"
    return str(value)


def _table(frame: pd.DataFrame, digits: int = 4) -> list[str]:
    columns = [str(c) for c in frame.columns]
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(_fmt(v, digits) for v in row) + " |")
    return lines


def _read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def _summary_section(title: str, path: Path) -> list[str]:
    frame = _read_csv(path)
    return [f"### {title}", ""] + _table(frame) + [""]


def _corpus_section(path: Path | None) -> list[str]:
    if path is None:
        return []
    stats = json.loads(path.read_text(encoding="utf-8"))
    lines = ["## Corpus", ""]
    lines.append(
        "Parsed {emails} emails ({bots} from bots, {skipped} unparseable, "
        "{window} outside the incubation window) and {commits} commits.".format(
            emails=stats.get("emails_parsed", 0),
            bots=stats.get("emails_bot", 0),
            skipped=stats.get("emails_skipped", 0),
            window=stats.get("emails_out_of_window", 0),
            commits=stats.get("commits_parsed", 0),
        )
    )
    per_project = stats.get("per_project", {})
    if per_project:
        rows = [
            {
                "project": pid,
                "emails": counts.get("emails_parsed", 0),
                "commits": counts.get("commits_parsed", 0),
                "bot_emails": counts.get("emails_bot", 0),
            }
            for pid, counts in sorted(per_project.items())
        ]
        lines += [""] + _table(pd.DataFrame(rows))
    lines.append("")
    return lines


def _classifier_section(path: Path | None) -> list[str]:
    if path is None:
        return []
    report = json.loads(path.read_text(encoding="utf-8"))
    lines = ["## Institutional-statement classifier", ""]
    lines.append(
        "Holdout precision {p}, recall {r}, F1 {f}, accuracy {a} "
        "(tp={tp}, fp={fp}, fn={fn}, tn={tn}; classifier: {kind}).".format(
            p=_fmt(report.get("precision")),
            r=_fmt(report.get("recall")),
            f=_fmt(report.get("f1")),
            a=_fmt(report.get("accuracy")),
            tp=report.get("tp", 0),
            fp=report.get("fp", 0),
            fn=report.get("fn", 0),
            tn=report.get("tn", 0),
            kind=report.get("classifier", "baseline"),
        )
    )
    lines.append("")
    return lines


def _group_section(path: Path) -> list[str]:
    frame = _read_csv(path)
    lines = ["## Group comparisons", ""]
    lines.append(
        "Mann-Whitney U per panel variable; the unit is each project's mean "
        "over its active months."
    )
    lines.append("")
    lines += _table(frame)
    lines.append("")
    return lines


def _granger_section(granger_path: Path, edges_path: Path) -> list[str]:
    granger = _read_csv(granger_path)
    edges = _read_csv(edges_path)
    lines = ["## Granger causality", ""]
    if granger.empty:
        lines += ["No testable pairs.", ""]
        return lines
    sig = granger[granger["significant"]]
    lines.append(
        f"{len(granger)} panel tests; {len(sig)} significant after "
        "Benjamini-Hochberg adjustment."
    )
    lines.append("")
    if not sig.empty:
        lines += _table(sig.reset_index(drop=True))
        lines.append("")
    for group in sorted(edges["group"].unique()) if not edges.empty else []:
        sub = edges[edges["group"] == group]
        lines.append(f"### Directed edges ({group})")
        lines.append("")
        for row in sub.itertuples(index=False):
            if row.direction == "is_to_st":
                arrow = f"{row.is_var} -> {row.st_var}"
            elif row.direction == "st_to_is":
                arrow = f"{row.st_var} -> {row.is_var}"
            else:
                arrow = f"{row.is_var} <-> {row.st_var}"
            lines.append(f"- {arrow}")
        lines.append("")
    if edges.empty:
        lines += ["No directed edges survive adjustment.", ""]
    return lines


def _topics_section(path: Path) -> list[str]:
    payload = json.loads(path.read_text(encoding="utf-8"))
    lines = ["## Discussion topics", ""]
    k_star = payload["k_star"]
    coherence = payload.get("coherence", {})
    score = coherence.get(str(k_star))
    lines.append(
        f"Selected K = {k_star} topics over {payload.get('n_documents', 0)} "
        f"documents (mean UMass coherence {_fmt(score)})."
    )
    lines.append("")
    for topic in payload.get("topics", []):
        words = ", ".join(topic["top_words"])
        lines.append(f"- Topic {topic['topic_id']}: {words}")
    lines.append("")
    return lines


def render_report(config: RunConfig, artifacts: dict[str, Path]) -> str:
    lines = ["# Incubation governance and structure report", ""]
    lines.append(
        f"Run `config_hash={config.config_hash}` with seed {config.seed}."
    )
    lines.append("")
    lines += _corpus_section(artifacts.get("ingest_stats"))
    lines += _classifier_section(artifacts.get("classifier_eval"))
    lines += ["## Panel summaries", ""]
    lines += _summary_section("All project months", artifacts["summary_all"])
    lines += _summary_section("Active project months", artifacts["summary_active"])
    lines += _group_section(artifacts["group_tests"])
    lines += _granger_section(artifacts["granger"], artifacts["edges"])
    lines += _topics_section(artifacts["topics"])
    return "\n".join(lines).rstrip() + "\n"
