"""Pipeline stages: ingest, analyze, report, and classifier evaluation."""
from __future__ import annotations

import dataclasses
import json
import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pandas as pd

from ..ingest import (
    BotRules,
    IngestError,
    load_aliases,
    load_manifests,
    load_roster,
    parse_commits,
    parse_mbox,
    resolve_identity,
)
from ..ingest.corpus import read_commits, read_emails, write_commits, write_emails, write_stats
from ..ingest.identity import UNKNOWN_IDENTITY, IdentityMap
from ..ingest.records import Commit, Email, ProjectManifest, month_index
from ..ingest.stats import IngestStats
from ..isdetect import (
    ClassifierHandle,
    ClassifierKind,
    ExternalClient,
    aggregate_predictions,
    classify,
    count_is_by_role,
    default_tokenizer,
    evaluate,
    load_gold,
    load_policy_segments,
    oversample_training,
    segment_email,
    sentence_records,
    thread_split,
    train_baseline,
    write_predictions,
    write_training_segments,
)
from ..network import metric_row, monthly_networks
from ..network.panel import (
    IS_COLUMNS,
    METRIC_COLUMNS,
    assemble_panel,
    panel_frame,
    summary_frame,
    write_metrics_csv,
)
from ..stats import (
    IS_VARIABLES,
    edges_frame,
    granger_frame,
    group_tests,
    run_grid,
    stationarity_frame,
    trim_outliers,
)
from ..topics import (
    IsSentence,
    fit_lda,
    preprocess_is_corpus,
    select_k,
    topic_volumes,
    volumes_frame,
    write_volumes_csv,
)
from .config import RunConfig
from .plots import plot_group_means, plot_topic_volumes
from .runmanifest import RunManifest, digest_paths

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    """A pipeline stage failed; partial outputs have been removed."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


def _comment_line(config: RunConfig) -> str:
    return f"# config_hash={config.config_hash} seed={config.seed}"


def _write_frame(frame: pd.DataFrame, path: Path, config: RunConfig, index: bool = False) -> Path:
    text = frame.to_csv(index=index)
    path.write_text(text + _comment_line(config) + "\n", encoding="utf-8")
    return path


def _corpus_dir(config: RunConfig) -> Path:
    return config.output_dir / "corpus"


def _analysis_dir(config: RunConfig) -> Path:
    return config.output_dir / "analysis"


def _load_inputs(config: RunConfig) -> tuple[dict[str, ProjectManifest], IdentityMap]:
    manifests_path = config.corpus_root / config.manifests_file
    if not manifests_path.is_file():
        raise IngestError(f"missing manifest file: {manifests_path}")
    manifests = load_manifests(manifests_path)
    idmap = IdentityMap()
    aliases_path = config.corpus_root / config.aliases_file
    if aliases_path.is_file():
        idmap = load_aliases(aliases_path, idmap)
    roster_path = config.corpus_root / config.roster_file
    if roster_path.is_file():
        idmap = load_roster(roster_path, idmap)
    else:
        log.warning("no roster at %s; all senders default to Contributor", roster_path)
    return manifests, idmap


def _ingest_project(
    config: RunConfig,
    manifest: ProjectManifest,
    idmap: IdentityMap,
    rules: BotRules,
) -> tuple[list[Email], list[Commit], IngestStats, list[Path]]:
    pid = manifest.project_id
    stats = IngestStats()
    inputs: list[Path] = []
    emails: list[Email] = []
    for mbox_path in sorted((config.corpus_root / pid).glob("*/*.mbox")):
        inputs.append(mbox_path)
        emails.extend(
            parse_mbox(mbox_path, pid, mbox_path.parent.name, bot_rules=rules, stats=stats)
        )
    kept: list[Email] = []
    for email in emails:
        if not manifest.in_window(email.sent_at):
            stats.emails_out_of_window += 1
            stats.bump(pid, "emails_out_of_window")
            continue
        sender, _ = resolve_identity(email.sender_raw, idmap, pid)
        if sender == UNKNOWN_IDENTITY:
            stats.emails_unknown_sender += 1
            stats.bump(pid, "emails_unknown_sender")
        kept.append(
            dataclasses.replace(
                email,
                sender=sender,
                recipients=[idmap.canonical(r) for r in email.recipients],
            )
        )
    kept.sort(key=lambda e: (e.sent_at, e.message_id))

    commits: list[Commit] = []
    commit_path = config.corpus_root / pid / "commits.jsonl"
    if commit_path.is_file():
        inputs.append(commit_path)
        parsed = parse_commits(commit_path, pid, bot_rules=rules, stats=stats)
        for commit in parsed:
            if not manifest.in_window(commit.authored_at):
                stats.commits_out_of_window += 1
                stats.bump(pid, "commits_out_of_window")
                continue
            commits.append(dataclasses.replace(commit, author=idmap.canonical(commit.author)))
        commits.sort(key=lambda c: (c.authored_at, c.commit_id))
    return kept, commits, stats, inputs


def cmd_ingest(config: RunConfig) -> IngestStats:
    """Parse the raw corpus into normalized per-project JSONL plus stats."""
    if not config.corpus_root.is_dir():
        raise IngestError(f"corpus_root does not exist: {config.corpus_root}")
    manifests, idmap = _load_inputs(config)
    rules = BotRules.load(config.bot_rules or None)
    corpus_dir = _corpus_dir(config)
    corpus_dir.mkdir(parents=True, exist_ok=True)

    run = _load_run_manifest(config)
    record = run.start_stage("ingest")
    pids = sorted(manifests)
    worker = lambda pid: _ingest_project(config, manifests[pid], idmap, rules)
    try:
        if config.effective_jobs > 1 and len(pids) > 1:
            with ThreadPoolExecutor(max_workers=config.effective_jobs) as pool:
                results = list(pool.map(worker, pids))
        else:
            results = [worker(pid) for pid in pids]
    except Exception as exc:
        raise StageError("ingest", exc) from exc

    totals = IngestStats()
    outputs: list[Path] = []
    inputs: list[Path] = [config.corpus_root / config.manifests_file]
    for pid, (emails, commits, stats, in_paths) in zip(pids, results):
        project_dir = corpus_dir / pid
        project_dir.mkdir(parents=True, exist_ok=True)
        outputs.append(write_emails(emails, project_dir))
        outputs.append(write_commits(commits, project_dir))
        totals.merge(stats)
        inputs.extend(in_paths)
    outputs.append(write_stats(totals, corpus_dir))

    run.finish_stage(
        record,
        inputs=digest_paths((str(p.relative_to(config.corpus_root)), p) for p in inputs),
        outputs=digest_paths((str(p.relative_to(config.output_dir)), p) for p in outputs),
        counts={
            "emails_parsed": totals.emails_parsed,
            "emails_bot": totals.emails_bot,
            "emails_skipped": totals.emails_skipped,
            "emails_out_of_window": totals.emails_out_of_window,
            "commits_parsed": totals.commits_parsed,
            "commits_bot": totals.commits_bot,
            "commits_skipped": totals.commits_skipped,
            "commits_out_of_window": totals.commits_out_of_window,
        },
    )
    run.write(config.output_dir / "run_manifest.json")
    return totals


def _load_run_manifest(config: RunConfig) -> RunManifest:
    path = config.output_dir / "run_manifest.json"
    config.output_dir.mkdir(parents=True, exist_ok=True)
    if path.is_file():
        try:
            run = RunManifest.load(path)
            run.config_hash = config.config_hash
            run.seed = config.seed
            return run
        except (ValueError, KeyError):
            log.warning("unreadable run manifest at %s; starting fresh", path)
    return RunManifest(config_hash=config.config_hash, seed=config.seed)


def _read_corpus(
    config: RunConfig, manifests: dict[str, ProjectManifest]
) -> tuple[dict[str, list[Email]], dict[str, list[Commit]]]:
    corpus_dir = _corpus_dir(config)
    emails: dict[str, list[Email]] = {}
    commits: dict[str, list[Commit]] = {}
    for pid in sorted(manifests):
        project_dir = corpus_dir / pid
        if not (project_dir / "emails.jsonl").is_file():
            raise FileNotFoundError(
                f"missing ingest output {project_dir / 'emails.jsonl'}; run ingest first"
            )
        emails[pid] = read_emails(project_dir)
        commits[pid] = read_commits(project_dir) if (project_dir / "commits.jsonl").is_file() else []
    return emails, commits


def _stage(
    run: RunManifest,
    manifest_path: Path,
    name: str,
    outputs: list[Path],
    body: Callable[[], dict],
) -> dict:
    record = run.start_stage(name)
    try:
        info = body()
    except Exception as exc:
        for path in outputs:
            if path.exists():
                path.unlink()
        raise StageError(name, exc) from exc
    run.finish_stage(
        record,
        inputs=info.get("inputs", {}),
        outputs=digest_paths((p.name, p) for p in outputs),
        counts=info.get("counts", {}),
    )
    run.write(manifest_path)
    return info


def _build_segments(
    emails_by_project: dict[str, list[Email]],
    gold: dict[tuple[str, int], bool],
    token_budget: int,
):
    """Per-email sentence records and sliding-window segments."""
    tokenizer = default_tokenizer()
    nonbot: list[Email] = []
    segments_by_email: dict[str, list] = {}
    counts: dict[str, int] = {}
    for pid in sorted(emails_by_project):
        for email in emails_by_project[pid]:
            if email.is_bot or not email.sentences:
                continue
            nonbot.append(email)
            records = sentence_records(email, tokenizer)
            for record in records:
                record.gold_label = gold.get((record.email_id, record.index))
            segments_by_email[email.message_id] = segment_email(records, token_budget)
            counts[email.message_id] = len(records)
    return nonbot, segments_by_email, counts


def _train_handle(config: RunConfig, train_segments: list) -> ClassifierHandle:
    if config.classifier_kind == "external":
        client = ExternalClient(config.classifier_endpoint)
        client.health()
        return ClassifierHandle(kind=ClassifierKind.EXTERNAL, client=client)
    if not train_segments:
        raise ValueError("baseline classifier needs labeled training segments")
    balanced = oversample_training(train_segments, seed=config.seed)
    return train_baseline(
        balanced,
        seed=config.seed,
        ngram_max=config.ngram_max,
        l2=config.l2,
        max_epochs=config.max_epochs,
        threshold=config.threshold,
    )


def _classify_corpus(
    config: RunConfig,
    manifests: dict[str, ProjectManifest],
    idmap: IdentityMap,
    emails_by_project: dict[str, list[Email]],
):
    """Train/apply the configured classifier; returns labels, counts, report."""
    gold_path = config.corpus_root / config.gold_file
    gold = load_gold(gold_path) if gold_path.is_file() else {}
    nonbot, segments_by_email, n_sentences = _build_segments(
        emails_by_project, gold, config.token_budget
    )
    if not nonbot:
        raise ValueError("corpus has no non-bot emails with sentences")

    train_emails, test_emails = thread_split(
        nonbot, config.holdout_fraction, seed=config.seed
    )
    train_segments = [
        seg
        for email in train_emails
        for seg in segments_by_email[email.message_id]
        if all(r.gold_label is not None for r in seg.records)
    ]
    if config.policy_file:
        policy_path = config.corpus_root / config.policy_file
        if policy_path.is_file():
            train_segments += load_policy_segments(
                policy_path, token_budget=config.token_budget
            )
    handle = _train_handle(config, train_segments)

    all_segments = [
        seg for email in nonbot for seg in segments_by_email[email.message_id]
    ]
    classify(handle, all_segments)
    sentence_labels = aggregate_predictions(all_segments, n_sentences)

    report = None
    test_gold = {
        (e.message_id, span.index): gold[(e.message_id, span.index)]
        for e in test_emails
        for span in e.sentences
        if (e.message_id, span.index) in gold
    }
    if test_gold:
        predicted = {key: sentence_labels[key] for key in test_gold}
        report = evaluate(test_gold, predicted)

    all_emails = [e for pid in sorted(emails_by_project) for e in emails_by_project[pid]]
    is_counts = count_is_by_role(all_emails, sentence_labels, idmap, manifests)
    counts = {
        "emails_classified": len(nonbot),
        "segments": len(all_segments),
        "train_segments": len(train_segments),
        "test_emails": len(test_emails),
        "positive_sentences": int(sum(sentence_labels.values())),
        "sentences": len(sentence_labels),
    }
    return sentence_labels, is_counts, report, counts


def cmd_analyze(config: RunConfig) -> Path:
    """Run networks, classification, panel, topics, stats, and plots."""
    manifests, idmap = _load_inputs(config)
    emails_by_project, commits_by_project = _read_corpus(config, manifests)
    analysis = _analysis_dir(config)
    plots_dir = config.output_dir / "plots"
    analysis.mkdir(parents=True, exist_ok=True)
    plots_dir.mkdir(parents=True, exist_ok=True)
    run = _load_run_manifest(config)
    manifest_path = config.output_dir / "run_manifest.json"
    groups = {pid: manifests[pid].outcome.value for pid in manifests}

    # networks
    metric_rows: list = []

    def networks_body() -> dict:
        def one_project(pid: str):
            social, tech = monthly_networks(
                emails_by_project[pid], commits_by_project[pid], manifests[pid]
            )
            return [
                metric_row(pid, m, social.get(m), tech.get(m))
                for m in sorted(set(social) | set(tech))
            ]

        pids = sorted(manifests)
        if config.effective_jobs > 1 and len(pids) > 1:
            with ThreadPoolExecutor(max_workers=config.effective_jobs) as pool:
                for rows in pool.map(one_project, pids):
                    metric_rows.extend(rows)
        else:
            for pid in pids:
                metric_rows.extend(one_project(pid))
        return {"counts": {"metric_rows": len(metric_rows)}}

    _stage(run, manifest_path, "networks", [], networks_body)

    # classify
    predictions_path = analysis / "predictions.jsonl"
    eval_path = analysis / "classifier_eval.json"
    classify_state: dict = {}

    def classify_body() -> dict:
        labels, is_counts, report, counts = _classify_corpus(
            config, manifests, idmap, emails_by_project
        )
        classify_state["labels"] = labels
        classify_state["is_counts"] = is_counts
        write_predictions(labels, predictions_path)
        if report is not None:
            payload = report.to_dict()
            payload["config_hash"] = config.config_hash
            payload["seed"] = config.seed
            payload["classifier"] = config.classifier_kind
            eval_path.write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            counts["holdout_f1"] = round(report.f1, 6)
        return {"counts": counts}

    _stage(run, manifest_path, "classify", [predictions_path, eval_path], classify_body)

    # panel
    metrics_path = analysis / "metrics.csv"
    summary_all_path = analysis / "summary_all.csv"
    summary_active_path = analysis / "summary_active.csv"
    panel_state: dict = {}

    def panel_body() -> dict:
        panels = assemble_panel(
            metric_rows,
            classify_state["is_counts"],
            last_month={pid: manifests[pid].end_month_index for pid in manifests},
        )
        panel_state["panels"] = panels
        write_metrics_csv(panels, metrics_path, config.config_hash, config.seed)
        frame = panel_frame(panels)
        panel_state["frame"] = frame
        trimmed = trim_outliers(
            frame, config.trim_fraction, list(METRIC_COLUMNS + IS_COLUMNS)
        )
        for include, path in ((True, summary_all_path), (False, summary_active_path)):
            summary = summary_frame(trimmed, include_inactive=include)
            summary.index.name = "variable"
            _write_frame(summary, path, config, index=True)
        return {
            "counts": {
                "projects": len(panels),
                "project_months": int(sum(len(p) for p in panels.values())),
            }
        }

    _stage(
        run, manifest_path, "panel",
        [metrics_path, summary_all_path, summary_active_path], panel_body,
    )

    # topics
    topics_path = analysis / "topics.json"
    volumes_path = analysis / "topic_volumes.csv"
    topics_state: dict = {}

    def topics_body() -> dict:
        sentences = _is_sentences(
            config, manifests, emails_by_project, classify_state["labels"]
        )
        corpus = preprocess_is_corpus(sentences)
        k_star, scores = select_k(
            corpus,
            k_grid=config.k_grid,
            seeds=config.lda_seeds,
            iterations=config.lda_iterations,
            jobs=config.effective_jobs,
        )
        model = fit_lda(
            corpus, k_star, iterations=config.lda_iterations, seed=config.seed
        )
        payload = {
            "config_hash": config.config_hash,
            "seed": config.seed,
            "k_star": k_star,
            "coherence": {str(k): scores[k] for k in sorted(scores)},
            "alpha": model.alpha_,
            "beta": model.beta_,
            "iterations": config.lda_iterations,
            "document_unit": config.document_unit,
            "n_documents": corpus.n_docs,
            "n_terms": corpus.n_terms,
            "topics": [
                {
                    "topic_id": k,
                    "top_words": [
                        corpus.vocabulary[i] for i in model.top_word_ids(k, 10)
                    ],
                }
                for k in range(k_star)
            ],
        }
        topics_path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        volumes = topic_volumes(model, corpus, config.horizon_months)
        topics_state["volumes"] = volumes_frame(volumes)
        write_volumes_csv(volumes, volumes_path, config.config_hash, config.seed)
        return {"counts": {"k_star": k_star, "documents": corpus.n_docs}}

    _stage(run, manifest_path, "topics", [topics_path, volumes_path], topics_body)

    # stats
    granger_path = analysis / "granger.csv"
    stationarity_path = analysis / "stationarity.csv"
    edges_path = analysis / "edges.csv"
    group_tests_path = analysis / "group_tests.csv"

    def stats_body() -> dict:
        action = "difference" if config.difference_nonstationary else "exclude"
        grid = run_grid(
            panel_state["panels"],
            groups,
            is_variables=IS_VARIABLES,
            st_variables=config.st_variables,
            lag=config.granger_lag,
            adf_alpha=config.adf_alpha,
            nonstationary_action=action,
            alpha=config.significance,
            small_sample=config.small_sample_zbar,
            jobs=config.effective_jobs,
        )
        _write_frame(granger_frame(grid), granger_path, config)
        _write_frame(stationarity_frame(grid), stationarity_path, config)
        _write_frame(edges_frame(grid), edges_path, config)
        _write_frame(group_tests(panel_state["panels"], groups), group_tests_path, config)
        return {
            "counts": {
                "granger_tests": len(grid.tests),
                "significant": sum(t.adjusted.significant for t in grid.tests),
                "edges": len(grid.edges),
                "skipped_groups": len(grid.skipped_groups),
                "skipped_pairs": len(grid.skipped_pairs),
            }
        }

    _stage(
        run, manifest_path, "stats",
        [granger_path, stationarity_path, edges_path, group_tests_path], stats_body,
    )

    # plots
    means_path = plots_dir / "group_means.svg"
    volumes_svg_path = plots_dir / "topic_volumes.svg"

    def plots_body() -> dict:
        plot_group_means(panel_state["frame"], groups, means_path, config.config_hash)
        plot_topic_volumes(topics_state["volumes"], volumes_svg_path, config.config_hash)
        return {"counts": {"plots": 2}}

    _stage(run, manifest_path, "plots", [means_path, volumes_svg_path], plots_body)
    return config.output_dir


def _is_sentences(
    config: RunConfig,
    manifests: dict[str, ProjectManifest],
    emails_by_project: dict[str, list[Email]],
    labels: dict[tuple[str, int], bool],
) -> list[IsSentence]:
    """Positive sentences as topic-model documents (sentence or email unit)."""
    sentences: list[IsSentence] = []
    for pid in sorted(emails_by_project):
        manifest = manifests[pid]
        group = manifest.outcome.value
        for email in emails_by_project[pid]:
            if email.is_bot or not email.sentences:
                continue
            month = month_index(email.sent_at, manifest.incubation_start)
            positive = [
                span.text
                for span in email.sentences
                if labels.get((email.message_id, span.index))
            ]
            if not positive:
                continue
            if config.document_unit == "email":
                sentences.append(IsSentence(" ".join(positive), pid, month, group))
            else:
                sentences.extend(
                    IsSentence(text, pid, month, group) for text in positive
                )
    return sentences


def evaluate_classifier(config: RunConfig) -> dict:
    """Train on the thread-split training side, evaluate on the holdout."""
    manifests, idmap = _load_inputs(config)
    emails_by_project, _ = _read_corpus(config, manifests)
    _, _, report, counts = _classify_corpus(config, manifests, idmap, emails_by_project)
    if report is None:
        raise ValueError("no gold labels on the holdout side; nothing to evaluate")
    payload = report.to_dict()
    payload.update(counts)
    payload["classifier"] = config.classifier_kind
    payload["config_hash"] = config.config_hash
    payload["seed"] = config.seed
    return payload


def export_training(config: RunConfig, out_path: str | Path) -> dict:
    """Write the oversampled thread-split training segments as JSON lines.

    Produces the format an external classifier service trains on: the same
    training side (plus policy segments) the in-process baseline would see,
    after 1:1 oversampling.
    """
    manifests, _ = _load_inputs(config)
    emails_by_project, _ = _read_corpus(config, manifests)
    gold_path = config.corpus_root / config.gold_file
    gold = load_gold(gold_path) if gold_path.is_file() else {}
    nonbot, segments_by_email, _ = _build_segments(
        emails_by_project, gold, config.token_budget
    )
    if not nonbot:
        raise ValueError("corpus has no non-bot emails with sentences")
    train_emails, _ = thread_split(nonbot, config.holdout_fraction, seed=config.seed)
    train_segments = [
        seg
        for email in train_emails
        for seg in segments_by_email[email.message_id]
        if all(r.gold_label is not None for r in seg.records)
    ]
    if config.policy_file:
        policy_path = config.corpus_root / config.policy_file
        if policy_path.is_file():
            train_segments += load_policy_segments(
                policy_path, token_budget=config.token_budget
            )
    if not train_segments:
        raise ValueError("no fully labeled training segments to export")
    balanced = oversample_training(train_segments, seed=config.seed)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_training_segments(balanced, out_path)
    return {
        "path": str(out_path),
        "train_emails": len(train_emails),
        "segments": len(train_segments),
        "segments_oversampled": len(balanced),
        "positive_segments": sum(1 for s in balanced if s.has_positive),
    }


def _require(path: Path) -> Path:
    if not path.is_file():
        raise FileNotFoundError(f"missing analysis artifact: {path}")
    return path


def cmd_report(config: RunConfig) -> Path:
    """Render report.md from the analyze artifacts; byte-stable given them."""
    from .report import render_report

    analysis = _analysis_dir(config)
    artifacts = {
        "metrics": _require(analysis / "metrics.csv"),
        "summary_all": _require(analysis / "summary_all.csv"),
        "summary_active": _require(analysis / "summary_active.csv"),
        "granger": _require(analysis / "granger.csv"),
        "edges": _require(analysis / "edges.csv"),
        "group_tests": _require(analysis / "group_tests.csv"),
        "topics": _require(analysis / "topics.json"),
    }
    eval_path = analysis / "classifier_eval.json"
    if eval_path.is_file():
        artifacts["classifier_eval"] = eval_path
    stats_path = _corpus_dir(config) / "ingest_stats.json"
    if stats_path.is_file():
        artifacts["ingest_stats"] = stats_path
    report_path = config.output_dir / "report.md"
    text = render_report(config, artifacts)
    report_path.write_text(text, encoding="utf-8")
    run = _load_run_manifest(config)
    record = run.start_stage("report")
    run.finish_stage(
        record,
        inputs=digest_paths((p.name, p) for p in artifacts.values()),
        outputs=digest_paths([("report.md", report_path)]),
    )
    run.write(config.output_dir / "run_manifest.json")
    return report_path
