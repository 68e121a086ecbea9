"""Sequential sentence classifier service: train and serve."""
from .data import DataError, TrainingSegment, load_segments
from .infer import ModelBundle
from .model import ModelConfig, SepEncoder, encode_segment
from .protocol import MAX_SENTENCES, handle_lines, parse_request
from .server import create_server, parse_listen, start_in_thread
from .tokenizer import WordpieceTokenizer
from .train import TrainingError, finetune, model_hash

__all__ = [
    "DataError",
    "MAX_SENTENCES",
    "ModelBundle",
    "ModelConfig",
    "SepEncoder",
    "TrainingError",
    "TrainingSegment",
    "WordpieceTokenizer",
    "create_server",
    "encode_segment",
    "finetune",
    "handle_lines",
    "load_segments",
    "model_hash",
    "parse_listen",
    "parse_request",
    "start_in_thread",
]
