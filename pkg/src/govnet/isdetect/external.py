"""Client adapter for the external sequence-classifier service.

Speaks newline-delimited JSON either to ``http(s)://...`` endpoints (POST
/classify) or to a plain TCP socket given as ``host:port``.  Requests carry
request_ids; responses may arrive out of order and are reassembled.  Failures
surface as typed errors, never as silent negatives.
"""
from __future__ import annotations

import json
import socket
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

from .segment import Segment

MAX_SENTENCES_PER_REQUEST = 64


class TransportError(RuntimeError):
    """The service could not be reached or the connection failed."""


class ProtocolError(RuntimeError):
    """The service answered with something other than the wire contract."""


class ExternalClient:
    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        concurrency: int = 4,
        batch_size: int = 16,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.concurrency = max(1, concurrency)
        self.batch_size = max(1, batch_size)
        self._http = endpoint.startswith(("http://", "https://"))

    # -- wire ---------------------------------------------------------------

    def _post_http(self, path: str, lines: list[str]) -> list[str]:
        body = ("\n".join(lines) + "\n").encode("utf-8")
        request = urllib.request.Request(
            self.endpoint + path,
            data=body,
            headers={"Content-Type": "application/x-ndjson"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                if response.status != 200:
                    raise TransportError(f"HTTP {response.status} from {self.endpoint}")
                payload = response.read().decode("utf-8")
        except urllib.error.HTTPError as exc:
            raise TransportError(f"HTTP {exc.code} from {self.endpoint}") from exc
        except (urllib.error.URLError, OSError) as exc:
            raise TransportError(f"cannot reach {self.endpoint}: {exc}") from exc
        return [line for line in payload.splitlines() if line.strip()]

    def _post_socket(self, lines: list[str]) -> list[str]:
        host, _, port = self.endpoint.rpartition(":")
        try:
            with socket.create_connection((host, int(port)), timeout=self.timeout) as conn:
                conn.sendall(("\n".join(lines) + "\n").encode("utf-8"))
                conn.shutdown(socket.SHUT_WR)
                chunks = []
                while True:
                    chunk = conn.recv(65536)
                    if not chunk:
                        break
                    chunks.append(chunk)
        except (OSError, ValueError) as exc:
            raise TransportError(f"cannot reach {self.endpoint}: {exc}") from exc
        text = b"".join(chunks).decode("utf-8")
        return [line for line in text.splitlines() if line.strip()]

    def _exchange(self, requests: list[dict]) -> dict[str, dict]:
        lines = [json.dumps(r, sort_keys=True) for r in requests]
        raw = self._post_http("/classify", lines) if self._http else self._post_socket(lines)
        responses: dict[str, dict] = {}
        for line in raw:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProtocolError(f"unparseable response line: {line[:200]!r}") from exc
            if obj.get("error") is not None:
                raise ProtocolError(f"service error for {obj.get('request_id')}: {obj['error']}")
            rid = obj.get("request_id")
            if rid is None:
                raise ProtocolError("response missing request_id")
            responses[str(rid)] = obj
        return responses

    # -- api ----------------------------------------------------------------

    def classify_sentences(self, batches: list[list[str]]) -> list[tuple[list[bool], list[int]]]:
        """(labels, token_counts) per sentence batch, order preserved."""
        requests = []
        for i, sentences in enumerate(batches):
            if not sentences:
                raise ProtocolError("empty sentence batch")
            requests.append({"request_id": str(i), "sentences": list(sentences)})
        groups = [
            requests[i : i + self.batch_size]
            for i in range(0, len(requests), self.batch_size)
        ]
        responses: dict[str, dict] = {}
        if len(groups) == 1:
            responses.update(self._exchange(groups[0]))
        elif groups:
            with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
                for result in pool.map(self._exchange, groups):
                    responses.update(result)
        results: list[tuple[list[bool], list[int]]] = []
        for i, sentences in enumerate(batches):
            obj = responses.get(str(i))
            if obj is None:
                raise ProtocolError(f"no response for request_id {i}")
            labels = obj.get("labels")
            counts = obj.get("token_counts")
            if not isinstance(labels, list) or len(labels) != len(sentences):
                raise ProtocolError(
                    f"label count {len(labels) if isinstance(labels, list) else 'missing'} "
                    f"!= {len(sentences)} sentences for request {i}"
                )
            if not isinstance(counts, list) or len(counts) != len(sentences):
                raise ProtocolError(f"token_counts malformed for request {i}")
            results.append(([bool(x) for x in labels], [int(c) for c in counts]))
        return results

    def classify_segments(self, segments: list[Segment]) -> list[list[bool]]:
        """Per-segment sentence predictions; long segments are chunked at the
        service's 64-sentence cap and reassembled in order."""
        batches: list[list[str]] = []
        spans: list[tuple[int, int]] = []
        for segment in segments:
            texts = segment.texts
            first = len(batches)
            for off in range(0, len(texts), MAX_SENTENCES_PER_REQUEST):
                batches.append(texts[off : off + MAX_SENTENCES_PER_REQUEST])
            spans.append((first, len(batches)))
        answers = self.classify_sentences(batches)
        out: list[list[bool]] = []
        for first, stop in spans:
            labels: list[bool] = []
            for labs, _ in answers[first:stop]:
                labels.extend(labs)
            out.append(labels)
        return out

    def token_counts(self, sentences: list[str]) -> list[int]:
        """Service-reported subword counts (overrides the built-in estimate)."""
        if not sentences:
            return []
        counts: list[int] = []
        for off in range(0, len(sentences), MAX_SENTENCES_PER_REQUEST):
            _, chunk_counts = self.classify_sentences(
                [sentences[off : off + MAX_SENTENCES_PER_REQUEST]]
            )[0]
            counts.extend(chunk_counts)
        return counts

    def health(self) -> dict:
        """Service health and model hash."""
        if self._http:
            try:
                with urllib.request.urlopen(
                    self.endpoint + "/health", timeout=self.timeout
                ) as response:
                    payload = response.read().decode("utf-8")
            except (urllib.error.URLError, OSError) as exc:
                raise TransportError(f"cannot reach {self.endpoint}: {exc}") from exc
        else:
            payload = "\n".join(self._post_socket([json.dumps({"health": True})]))
        try:
            return json.loads(payload)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"unparseable health payload: {payload[:200]!r}") from exc
