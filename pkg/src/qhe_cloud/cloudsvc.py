"""Stateless addition service: ``POST /process`` and ``GET /health``.

The service never sees keys or plaintexts. For each request it decodes the
two ciphertexts, combines them (XOR for chen, entry-wise sum mod q for gsw,
transversal CNOT for qotp) and answers with the canonical response document.

Status codes: 200 ok, 400 malformed body or unknown scheme, 413 body larger
than the configured limit, 422 payload validation failure, 404 unknown
route, 405 wrong method on a known route.
"""
from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Tuple

import numpy as np

from . import HEError, __version__
from . import chen, gsw, qotp, wire

log = logging.getLogger(__name__)

BUILD_ID = f"qhe-cloud/{__version__}"
PORT_ENV = "QHE_CLOUD_PORT"
HOST_ENV = "QHE_CLOUD_HOST"
DRAIN_LIMIT = 64 * 1024 * 1024  # oversized bodies beyond this are cut off unread


class StartupError(HEError):
    pass


class ConfigError(StartupError, ValueError):
    """Service settings out of range."""


def _default_port():
    return int(os.environ.get(PORT_ENV, "8080"))


def _default_host():
    return os.environ.get(HOST_ENV, "127.0.0.1")


@dataclass(frozen=True)
class ServiceConfig:
    port: int = field(default_factory=_default_port)
    host: str = field(default_factory=_default_host)
    max_payload_bytes: int = 4 * 1024 * 1024
    request_timeout: float = 30.0

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must be in [1, 65535], got {self.port}")
        if self.max_payload_bytes < 1024:
            raise ConfigError("max payload must be at least 1 KiB")
        if self.request_timeout <= 0:
            raise ConfigError("request timeout must be positive")


def handle_process(scheme: str, payload: wire.Payload) -> wire.Result:
    """Combine two validated ciphertexts of ``scheme``."""
    if scheme == "chen":
        c1 = chen.ChenCiphertext([np.array(s, dtype=np.uint8) for s in payload.a])
        c2 = chen.ChenCiphertext([np.array(s, dtype=np.uint8) for s in payload.b])
        return wire.ChenResult([s.tolist() for s in chen.xor_add(c1, c2).segments])
    if scheme == "gsw":
        c1 = gsw.GswCiphertext(np.array(payload.c1, dtype=np.int64), payload.q)
        c2 = gsw.GswCiphertext(np.array(payload.c2, dtype=np.int64), payload.q)
        return wire.GswResult(gsw.add(c1, c2).c.tolist())
    pair = qotp.QotpCipherPair(payload.x, payload.y, payload.x_phase, payload.y_phase)
    reg = qotp.cloud_parity_add(pair)
    return wire.QotpResult(reg.bits, reg.phase)


def _error_body(message: str, path: str = None) -> str:
    doc = {"error": message}
    if path is not None:
        doc["path"] = path
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def process_document(body) -> Tuple[int, str]:
    """Full request cycle on a raw body: ``(status, response document)``."""
    try:
        scheme, payload = wire.decode_request(body)
        result = handle_process(scheme, payload)
        return 200, wire.encode_response(scheme, result, payload)
    except wire.ValidationError as exc:
        return 422, _error_body(str(exc), exc.path)
    except wire.WireError as exc:
        return 400, _error_body(str(exc))


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = BUILD_ID
    sys_version = ""

    def _send(self, status: int, body: str, close: bool = False):
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        if close:
            self.send_header("Connection", "close")
            self.close_connection = True
        self.end_headers()
        self.wfile.write(data)

    def do_POST(self):
        if self.path != "/process":
            return self._send(404 if self.path != "/health" else 405, _error_body("not found"), close=True)
        limit = self.server.config.max_payload_bytes
        raw = self.headers.get("Content-Length")
        try:
            length = int(raw)
            if length < 0:
                raise ValueError
        except (TypeError, ValueError):
            return self._send(400, _error_body("missing or invalid Content-Length"), close=True)
        if length > limit:
            self._discard(length)
            return self._send(413, _error_body(f"payload exceeds {limit} bytes"), close=True)
        status, body = process_document(self.rfile.read(length))
        self._send(status, body)

    def _discard(self, length: int):
        # Read (a bounded amount of) the rejected body so the client is not
        # cut off mid-upload before it can see the status line.
        remaining = min(length, DRAIN_LIMIT)
        while remaining > 0:
            chunk = self.rfile.read(min(remaining, 64 * 1024))
            if not chunk:
                break
            remaining -= len(chunk)

    def do_GET(self):
        if self.path == "/health":
            return self._send(200, json.dumps({"build": BUILD_ID, "status": "ok"}, sort_keys=True, separators=(",", ":")))
        if self.path == "/process":
            return self._send(405, _error_body("use POST"), close=True)
        self._send(404, _error_body("not found"), close=True)

    def _unsupported(self):
        known = self.path in ("/process", "/health")
        self._send(405 if known else 404, _error_body("unsupported"), close=True)

    do_PUT = do_DELETE = do_PATCH = _unsupported

    def setup(self):
        self.timeout = self.server.config.request_timeout
        super().setup()

    def log_message(self, fmt, *args):
        # request line and status only: bodies carry ciphertexts
        log.info("%s %s", self.address_string(), fmt % args)


class CloudServer(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 64

    def __init__(self, config: ServiceConfig):
        self.config = config
        try:
            super().__init__((config.host, config.port), _Handler)
        except OSError as exc:
            raise StartupError(f"cannot bind {config.host}:{config.port}: {exc}") from None

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def start_background(config: ServiceConfig) -> CloudServer:
    """Start a server on a daemon thread; call ``shutdown()`` to stop it."""
    server = CloudServer(config)
    threading.Thread(target=server.serve_forever, name="qhe-cloud", daemon=True).start()
    return server


def serve(config: ServiceConfig):
    server = CloudServer(config)
    log.info("serving %s on %s", BUILD_ID, server.url)
    try:
        server.serve_forever()
    finally:
        server.server_close()
