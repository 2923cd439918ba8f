"""Client-side handles to the addition service.

Both transports expose ``process(scheme, payload) -> result`` and go through
the canonical wire encoding, so an in-process run and an HTTP run exchange
byte-identical documents.
"""
from __future__ import annotations

import json
import os
import urllib.error
import urllib.request

from . import ProtocolError, wire
from .cloudsvc import handle_process, process_document

ENDPOINT_ENV = "QHE_CLOUD_ENDPOINT"
DEFAULT_ENDPOINT = "http://127.0.0.1:8080"
LOCAL = "local"
DIRECT = "direct"


def default_endpoint() -> str:
    return os.environ.get(ENDPOINT_ENV, DEFAULT_ENDPOINT)


def _error_message(status, body) -> str:
    try:
        detail = json.loads(body)["error"]
    except (ValueError, KeyError, TypeError):
        detail = body[:200] if isinstance(body, str) else ""
    return f"service answered {status}: {detail}"


class _Transport:
    def post(self, document: str) -> str:
        raise NotImplementedError

    def process(self, scheme: str, payload: wire.Payload) -> wire.Result:
        response = self.post(wire.encode_request(scheme, payload))
        _, result = wire.decode_response(response, request=payload)
        return result


class LocalCloud(_Transport):
    """Runs the service logic in-process; no sockets involved."""

    def post(self, document: str) -> str:
        status, body = process_document(document.encode("utf-8"))
        if status != 200:
            raise ProtocolError(_error_message(status, body), status)
        return body


class DirectCloud:
    """Calls the combine step directly, skipping serialisation (compute only)."""

    def process(self, scheme: str, payload: wire.Payload) -> wire.Result:
        return handle_process(scheme, payload)


class HttpCloud(_Transport):
    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout

    def post(self, document: str) -> str:
        req = urllib.request.Request(
            self.endpoint + "/process",
            data=document.encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read().decode("utf-8")
        except urllib.error.HTTPError as exc:
            raise ProtocolError(_error_message(exc.code, exc.read().decode("utf-8", "replace")), exc.code) from None
        except (urllib.error.URLError, OSError) as exc:
            raise ProtocolError(f"cannot reach {self.endpoint}: {exc}") from None


def connect(endpoint: str = None):
    """Resolve an endpoint string to a transport.

    ``"local"`` runs the service in-process (with serialisation), ``"direct"``
    calls the combine step only, anything else is an HTTP base URL.
    """
    endpoint = endpoint or default_endpoint()
    if endpoint == LOCAL:
        return LocalCloud()
    if endpoint == DIRECT:
        return DirectCloud()
    return HttpCloud(endpoint)
