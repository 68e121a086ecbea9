"""Wire protocol: newline-delimited JSON requests and responses.

Request:  {"request_id": str, "sentences": [str, ...]}   (1 to 64 sentences)
Response: {"request_id", "labels": [bool], "token_counts": [int]}
Errors:   {"request_id": <id or null>, "error": "..."}; a malformed line
          never takes down the connection, only its own response.
A line {"health": true} answers with the health payload (model hash).
"""
from __future__ import annotations

import json

from .infer import ModelBundle

MAX_SENTENCES = 64


def error_response(request_id, message: str) -> dict:
    return {"request_id": request_id, "error": message}


def parse_request(line: str, seen_ids: set[str]) -> dict:
    """Validated request dict, a health marker, or an error response."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        return error_response(None, f"malformed JSON: {exc}")
    if not isinstance(obj, dict):
        return error_response(None, "request must be a JSON object")
    if "health" in obj:
        return {"health": True}
    request_id = obj.get("request_id")
    if request_id is None:
        return error_response(None, "missing request_id")
    request_id = str(request_id)
    if request_id in seen_ids:
        return error_response(request_id, "duplicate request_id on this connection")
    sentences = obj.get("sentences")
    if not isinstance(sentences, list) or not all(
        isinstance(s, str) for s in sentences
    ):
        return error_response(request_id, "sentences must be a list of strings")
    if not 1 <= len(sentences) <= MAX_SENTENCES:
        return error_response(
            request_id,
            f"sentence count must be in [1, {MAX_SENTENCES}], got {len(sentences)}",
        )
    seen_ids.add(request_id)
    return {"request_id": request_id, "sentences": sentences}


def handle_lines(bundle: ModelBundle, lines: list[str], seen_ids: set[str]) -> list[str]:
    """One response line per input line, order preserved; valid requests in a
    payload are classified together in one model batch."""
    parsed = [parse_request(line, seen_ids) for line in lines]
    pending = [p for p in parsed if "sentences" in p]
    answers = bundle.classify([p["sentences"] for p in pending])
    by_id = {
        p["request_id"]: {
            "request_id": p["request_id"],
            "labels": labels,
            "token_counts": counts,
        }
        for p, (labels, counts) in zip(pending, answers)
    }
    out = []
    for p in parsed:
        if "health" in p:
            out.append(json.dumps(bundle.health(), sort_keys=True))
        elif "error" in p:
            out.append(json.dumps(p, sort_keys=True))
        else:
            out.append(json.dumps(by_id[p["request_id"]], sort_keys=True))
    return out
