"""Run configuration: TOML keys, validation, and the config hash."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

DEFAULT_K_GRID = tuple(range(2, 21))
DEFAULT_ST_VARIABLES = (
    "s_graph_density",
    "s_weighted_mean_degree",
    "t_graph_density",
    "t_num_dev_nodes",
    "t_num_file_nodes",
    "t_num_file_per_dev",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; every analysis constant is a config default."""

    corpus_root: Path = Path("corpus")
    output_dir: Path = Path("out")
    seed: int = 0
    jobs: int = 0

    bot_rules: str = ""
    manifests_file: str = "manifests.csv"
    roster_file: str = "roster.csv"
    aliases_file: str = "aliases.csv"
    gold_file: str = "gold.jsonl"
    policy_file: str = ""

    token_budget: int = 256

    classifier_kind: str = "baseline"
    classifier_endpoint: str = ""
    holdout_fraction: float = 0.125
    ngram_max: int = 2
    l2: float = 1e-3
    max_epochs: int = 200
    threshold: float = 0.5

    document_unit: str = "sentence"
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    lda_seeds: tuple[int, ...] = (0, 1, 2)
    lda_iterations: int = 1000
    horizon_months: int = 24

    trim_fraction: float = 0.02
    granger_lag: int = 2
    significance: float = 0.01
    adf_alpha: float = 0.05
    difference_nonstationary: bool = False
    small_sample_zbar: bool = False
    st_variables: tuple[str, ...] = DEFAULT_ST_VARIABLES

    def __post_init__(self) -> None:
        if self.token_budget < 1:
            raise ValueError("segment.token_budget must be >= 1")
        if self.classifier_kind not in ("baseline", "external"):
            raise ValueError(f"unknown classifier.kind {self.classifier_kind!r}")
        if self.classifier_kind == "external" and not self.classifier_endpoint:
            raise ValueError("classifier.endpoint required when kind is external")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ValueError("classifier.holdout_fraction must be in (0, 1)")
        if self.document_unit not in ("sentence", "email"):
            raise ValueError(f"unknown topics.document_unit {self.document_unit!r}")
        if not self.k_grid or min(self.k_grid) < 2:
            raise ValueError("topics.k_grid entries must be >= 2")
        if not self.lda_seeds:
            raise ValueError("topics.seeds must be non-empty")
        if self.lda_iterations < 1:
            raise ValueError("topics.iterations must be >= 1")
        if self.horizon_months < 1:
            raise ValueError("topics.horizon_months must be >= 1")
        if not 0.0 < self.trim_fraction < 0.5:
            raise ValueError("stats.trim_fraction must be in (0, 0.5)")
        if self.granger_lag < 1:
            raise ValueError("stats.granger_lag must be >= 1")
        if not 0.0 < self.significance < 1.0:
            raise ValueError("stats.significance must be in (0, 1)")
        if not 0.0 < self.adf_alpha < 1.0:
            raise ValueError("stats.adf_alpha must be in (0, 1)")

    @property
    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    @property
    def config_hash(self) -> str:
        """Hash of every analysis-relevant field; filesystem paths excluded."""
        payload = self.to_dict()
        payload.pop("corpus_root")
        payload.pop("output_dir")
        digest = hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode("utf-8")
        )
        return digest.hexdigest()[:16]


_SECTION_KEYS = {
    ("run", "corpus_root"): "corpus_root",
    ("run", "output_dir"): "output_dir",
    ("run", "seed"): "seed",
    ("run", "jobs"): "jobs",
    ("ingest", "bot_rules"): "bot_rules",
    ("ingest", "manifests"): "manifests_file",
    ("ingest", "roster"): "roster_file",
    ("ingest", "aliases"): "aliases_file",
    ("ingest", "gold"): "gold_file",
    ("ingest", "policy"): "policy_file",
    ("segment", "token_budget"): "token_budget",
    ("classifier", "kind"): "classifier_kind",
    ("classifier", "endpoint"): "classifier_endpoint",
    ("classifier", "holdout_fraction"): "holdout_fraction",
    ("classifier", "ngram_max"): "ngram_max",
    ("classifier", "l2"): "l2",
    ("classifier", "max_epochs"): "max_epochs",
    ("classifier", "threshold"): "threshold",
    ("topics", "document_unit"): "document_unit",
    ("topics", "k_grid"): "k_grid",
    ("topics", "seeds"): "lda_seeds",
    ("topics", "iterations"): "lda_iterations",
    ("topics", "horizon_months"): "horizon_months",
    ("stats", "trim_fraction"): "trim_fraction",
    ("stats", "granger_lag"): "granger_lag",
    ("stats", "significance"): "significance",
    ("stats", "adf_alpha"): "adf_alpha",
    ("stats", "difference_nonstationary"): "difference_nonstationary",
    ("stats", "small_sample_zbar"): "small_sample_zbar",
    ("stats", "st_variables"): "st_variables",
}


def load_config(
    path: str | Path | None = None,
    seed: int | None = None,
    jobs: int | None = None,
) -> RunConfig:
    """Build a RunConfig from an optional TOML file plus CLI overrides.

    Relative corpus_root/output_dir paths resolve against the config file's
    directory (or the working directory when no file is given).  Unknown keys
    are rejected.
    """
    kwargs: dict = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        base = path.resolve().parent
        for section, table in data.items():
            if not isinstance(table, dict):
                raise ValueError(f"{path}: top-level key {section!r} must be a table")
            for key, value in table.items():
                target = _SECTION_KEYS.get((section, key))
                if target is None:
                    raise ValueError(f"{path}: unknown config key {section}.{key}")
                if isinstance(value, list):
                    value = tuple(value)
                kwargs[target] = value
    if seed is not None:
        kwargs["seed"] = seed
    if jobs is not None:
        kwargs["jobs"] = jobs
    for name in ("corpus_root", "output_dir"):
        raw = Path(kwargs.get(name, RunConfig.__dataclass_fields__[name].default))
        kwargs[name] = raw if raw.is_absolute() else base / raw
    return RunConfig(**kwargs)
