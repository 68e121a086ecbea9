"""Serve a trained model over a TCP socket or HTTP, newline-delimited JSON.

Socket mode: the client writes request lines, half-closes, and reads one
response line per request.  HTTP mode: ``POST /classify`` with an NDJSON
body returns an NDJSON body; ``GET /health`` returns the health payload.
Both servers are threading; each connection gets its own request_id scope.
"""
from __future__ import annotations

import json
import logging
import socketserver
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .infer import ModelBundle
from .protocol import handle_lines

log = logging.getLogger(__name__)


class SocketHandler(socketserver.StreamRequestHandler):
    def handle(self):
        seen_ids: set[str] = set()
        raw = self.rfile.read()
        lines = [
            line for line in raw.decode("utf-8", errors="replace").splitlines()
            if line.strip()
        ]
        responses = handle_lines(self.server.bundle, lines, seen_ids)
        self.wfile.write(("\n".join(responses) + "\n").encode("utf-8"))


class SocketService(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], bundle: ModelBundle):
        super().__init__(address, SocketHandler)
        self.bundle = bundle


class HttpHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):
        log.debug("http: " + format, *args)

    def _send(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path != "/health":
            self._send(404, b'{"error": "not found"}\n', "application/json")
            return
        body = json.dumps(self.server.bundle.health(), sort_keys=True) + "\n"
        self._send(200, body.encode("utf-8"), "application/json")

    def do_POST(self):
        if self.path != "/classify":
            self._send(404, b'{"error": "not found"}\n', "application/json")
            return
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length).decode("utf-8", errors="replace")
        lines = [line for line in raw.splitlines() if line.strip()]
        responses = handle_lines(self.server.bundle, lines, set())
        body = ("\n".join(responses) + "\n").encode("utf-8")
        self._send(200, body, "application/x-ndjson")


class HttpService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], bundle: ModelBundle):
        super().__init__(address, HttpHandler)
        self.bundle = bundle


def parse_listen(listen: str) -> tuple[str, tuple[str, int]]:
    """('http'|'socket', (host, port)) from an endpoint string."""
    mode = "socket"
    address = listen
    if listen.startswith(("http://", "https://")):
        mode = "http"
        address = listen.split("://", 1)[1].rstrip("/")
    host, _, port = address.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {listen!r}")
    return mode, (host, int(port))


def create_server(model_dir: str | Path, listen: str):
    """Bound, not yet serving; callers run serve_forever or a thread."""
    bundle = ModelBundle.load(model_dir)
    mode, address = parse_listen(listen)
    server = (
        HttpService(address, bundle) if mode == "http" else SocketService(address, bundle)
    )
    log.info(
        "serving model %s (%s) on %s:%d",
        bundle.meta["model_hash"],
        mode,
        *server.server_address,
    )
    return server


def start_in_thread(server) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
