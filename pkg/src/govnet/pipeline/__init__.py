"""Run configuration, stage orchestration, reporting, and the demo corpus."""
from .config import RunConfig, load_config
from .runmanifest import RunManifest, StageRecord, file_digest
from .simulate import generate_corpus
from .stages import (
    StageError,
    cmd_analyze,
    cmd_ingest,
    cmd_report,
    evaluate_classifier,
    export_training,
)

__all__ = [
    "RunConfig",
    "RunManifest",
    "StageError",
    "StageRecord",
    "cmd_analyze",
    "cmd_ingest",
    "cmd_report",
    "evaluate_classifier",
    "export_training",
    "file_digest",
    "generate_corpus",
    "load_config",
]
