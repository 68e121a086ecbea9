"""End-to-end pipeline stages on the bundled simulated corpus."""
import dataclasses
import json

import pytest

from govnet.ingest import IngestError
from govnet.pipeline import (
    RunManifest,
    StageError,
    cmd_analyze,
    cmd_ingest,
    cmd_report,
    evaluate_classifier,
    load_config,
)

from conftest import FIXTURE_DIR

PROJECTS = ("aether", "boreas", "chronos")
ANALYSIS_FILES = (
    "metrics.csv",
    "summary_all.csv",
    "summary_active.csv",
    "predictions.jsonl",
    "classifier_eval.json",
    "topics.json",
    "topic_volumes.csv",
    "granger.csv",
    "stationarity.csv",
    "edges.csv",
    "group_tests.csv",
)


def fixture_config(output_dir, jobs=2):
    base = load_config(FIXTURE_DIR / "config.toml")
    return dataclasses.replace(base, output_dir=output_dir, jobs=jobs)


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    config = fixture_config(out)
    stats = cmd_ingest(config)
    cmd_analyze(config)
    return out, config, stats


def test_ingest_counts_and_outputs(run_dir):
    out, config, stats = run_dir
    assert stats.emails_parsed > 500
    assert stats.commits_parsed > 100
    assert stats.emails_bot > 0
    assert stats.emails_out_of_window > 0
    assert stats.commits_skipped > 0
    for pid in PROJECTS:
        assert (out / "corpus" / pid / "emails.jsonl").is_file()
        assert (out / "corpus" / pid / "commits.jsonl").is_file()
    stats_payload = json.loads((out / "corpus" / "ingest_stats.json").read_text())
    assert stats_payload["emails_parsed"] == stats.emails_parsed
    assert set(stats_payload["per_project"]) == set(PROJECTS)
    assert 0.0 < stats_payload["bot_email_ratio"] < 1.0


def test_analysis_artifacts_written(run_dir):
    out, config, _ = run_dir
    for name in ANALYSIS_FILES:
        assert (out / "analysis" / name).is_file(), name
    assert (out / "plots" / "group_means.svg").is_file()
    assert (out / "plots" / "topic_volumes.svg").is_file()


def test_csv_artifacts_carry_config_comment(run_dir):
    out, config, _ = run_dir
    tail = f"# config_hash={config.config_hash} seed={config.seed}"
    for name in ANALYSIS_FILES:
        if not name.endswith(".csv"):
            continue
        lines = (out / "analysis" / name).read_text().rstrip("\n").splitlines()
        assert lines[-1] == tail, name


def test_run_manifest_records_stages(run_dir):
    out, config, _ = run_dir
    manifest = RunManifest.load(out / "run_manifest.json")
    assert manifest.config_hash == config.config_hash
    assert manifest.seed == config.seed
    for stage in ("ingest", "networks", "classify", "panel", "topics", "stats", "plots"):
        record = manifest.stages[stage]
        assert record.finished_at, stage
    assert manifest.stages["ingest"].counts["emails_parsed"] > 0
    assert "metrics.csv" in manifest.stages["panel"].outputs


def test_classifier_eval_payload(run_dir):
    out, config, _ = run_dir
    payload = json.loads((out / "analysis" / "classifier_eval.json").read_text())
    for key in ("precision", "recall", "f1", "accuracy", "tp", "fp", "fn", "tn"):
        assert key in payload, key
    assert payload["f1"] > 0.8  # the simulated gold labels are learnable
    assert payload["config_hash"] == config.config_hash
    assert payload["classifier"] == "baseline"


def test_topics_payload(run_dir):
    out, config, _ = run_dir
    payload = json.loads((out / "analysis" / "topics.json").read_text())
    assert payload["k_star"] in config.k_grid
    assert payload["document_unit"] == "sentence"
    assert len(payload["topics"]) == payload["k_star"]
    for topic in payload["topics"]:
        assert len(topic["top_words"]) == 10


def test_report_rendered_and_stable(run_dir):
    out, config, _ = run_dir
    path = cmd_report(config)
    text = path.read_text()
    for heading in (
        "# Incubation governance and structure report",
        "## Corpus",
        "## Institutional-statement classifier",
        "## Panel summaries",
        "## Group comparisons",
        "## Granger causality",
        "## Discussion topics",
    ):
        assert heading in text, heading
    again = cmd_report(config).read_text()
    assert again == text


def test_evaluate_classifier_returns_metrics(run_dir):
    out, config, _ = run_dir
    payload = evaluate_classifier(config)
    for key in ("precision", "recall", "f1", "accuracy"):
        assert 0.0 <= payload[key] <= 1.0
    assert payload["classifier"] == "baseline"


def test_analyze_without_ingest_raises(tmp_path):
    config = fixture_config(tmp_path / "empty")
    with pytest.raises(FileNotFoundError, match="run ingest first"):
        cmd_analyze(config)


def test_report_without_analyze_raises(tmp_path):
    config = fixture_config(tmp_path / "empty")
    with pytest.raises(FileNotFoundError, match="missing analysis artifact"):
        cmd_report(config)


def test_ingest_missing_corpus_root_raises(tmp_path):
    config = dataclasses.replace(
        fixture_config(tmp_path / "out"), corpus_root=tmp_path / "nowhere"
    )
    with pytest.raises(IngestError, match="corpus_root does not exist"):
        cmd_ingest(config)


def test_stage_error_removes_partial_outputs(tmp_path, monkeypatch):
    import govnet.pipeline.stages as stages_mod

    config = fixture_config(tmp_path / "out", jobs=1)
    cmd_ingest(config)

    def explode(panels, path, config_hash, seed):
        path.write_text("partial garbage")
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(stages_mod, "write_metrics_csv", explode)
    with pytest.raises(StageError, match="stage 'panel' failed.*disk on fire") as info:
        cmd_analyze(config)
    assert info.value.stage == "panel"
    analysis = tmp_path / "out" / "analysis"
    assert not (analysis / "metrics.csv").exists()
    assert not (analysis / "summary_all.csv").exists()
    # Stages before the failure left their outputs in place.
    assert (analysis / "predictions.jsonl").is_file()
