"""Canonical JSON envelopes for the ``/process`` protocol.

Requests look like ``{"payload": {...}, "scheme": "chen"}`` and responses
like ``{"result": {...}, "scheme": "chen"}``. Documents are emitted with
sorted keys and no insignificant whitespace so they are byte-stable.

Per-scheme shapes (bit lists are least-significant first, Chen segment 0 is
the least significant segment)::

    chen  payload {"a": [[7 bits], ...], "b": [[7 bits], ...]}
          result  {"segments": [[7 bits], ...]}
    gsw   payload {"q": int, "n": int, "m": int, "c1": [[n x m]], "c2": [[n x m]]}
          result  {"c": [[n x m]]}
    qotp  payload {"x": [bits], "y": [bits], "x_phase": 1|-1, "y_phase": 1|-1}
          result  {"bits": [bits], "phase": 1|-1}

Decoding is strict: unknown fields, wrong types, out-of-range entries and
ragged rows raise :class:`ValidationError` with the offending field path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from . import SCHEMES, HEError

CHEN_CODEWORD_BITS = 7
MAX_WIRE_INT = 2**63 - 1


class WireError(HEError):
    status = 400


class ParseError(WireError):
    """Body is not a JSON object with the envelope fields."""


class SchemeError(WireError):
    """Envelope names a scheme this protocol does not know."""


class ValidationError(WireError, ValueError):
    status = 422

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class EncodeError(WireError, ValueError):
    """Refusing to serialise an invalid ciphertext."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ChenPayload:
    a: List[List[int]]
    b: List[List[int]]


@dataclass(frozen=True)
class GswPayload:
    q: int
    n: int
    m: int
    c1: List[List[int]]
    c2: List[List[int]]


@dataclass(frozen=True)
class QotpPayload:
    x: List[int]
    y: List[int]
    x_phase: int = 1
    y_phase: int = 1


@dataclass(frozen=True)
class ChenResult:
    segments: List[List[int]]


@dataclass(frozen=True)
class GswResult:
    c: List[List[int]]


@dataclass(frozen=True)
class QotpResult:
    bits: List[int]
    phase: int = 1


Payload = Union[ChenPayload, GswPayload, QotpPayload]
Result = Union[ChenResult, GswResult, QotpResult]

_PAYLOAD_TYPES = {"chen": ChenPayload, "gsw": GswPayload, "qotp": QotpPayload}
_RESULT_TYPES = {"chen": ChenResult, "gsw": GswResult, "qotp": QotpResult}


# -- validators -------------------------------------------------------------
# Each takes the raw decoded JSON value plus its path and returns clean data.

def _int(v, path, lo=0, hi=MAX_WIRE_INT):
    # bool is an int subclass; JSON true/false must not pass as 1/0
    if type(v) is not int:
        raise ValidationError(path, f"expected integer, got {type(v).__name__}")
    if not lo <= v <= hi:
        raise ValidationError(path, f"{v} outside [{lo}, {hi}]")
    return v


def _list(v, path, length=None):
    if type(v) is not list:
        raise ValidationError(path, f"expected array, got {type(v).__name__}")
    if length is not None and len(v) != length:
        raise ValidationError(path, f"expected {length} entries, got {len(v)}")
    if not v:
        raise ValidationError(path, "must not be empty")
    return v


def _bits(v, path, length=None):
    return [_int(b, f"{path}[{i}]", 0, 1) for i, b in enumerate(_list(v, path, length))]


def _phase(v, path):
    if type(v) is not int or v not in (1, -1):
        raise ValidationError(path, "phase must be 1 or -1")
    return v


def _matrix(v, path, rows, cols, hi):
    return [
        [_int(e, f"{path}[{i}][{j}]", 0, hi) for j, e in enumerate(_list(row, f"{path}[{i}]", cols))]
        for i, row in enumerate(_list(v, path, rows))
    ]


def _fields(obj, path, required):
    if type(obj) is not dict:
        raise ValidationError(path, f"expected object, got {type(obj).__name__}")
    for key in obj:
        if key not in required:
            raise ValidationError(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise ValidationError(f"{path}.{key}", "missing field")
    return obj


def _segments(v, path, count=None):
    return [_bits(seg, f"{path}[{i}]", CHEN_CODEWORD_BITS) for i, seg in enumerate(_list(v, path, count))]


def _check_payload(scheme, obj, path="payload") -> Payload:
    if scheme == "chen":
        _fields(obj, path, ("a", "b"))
        a = _segments(obj["a"], f"{path}.a")
        b = _segments(obj["b"], f"{path}.b", len(a))
        return ChenPayload(a, b)
    if scheme == "gsw":
        _fields(obj, path, ("q", "n", "m", "c1", "c2"))
        q = _int(obj["q"], f"{path}.q", 2)
        n = _int(obj["n"], f"{path}.n", 1)
        m = _int(obj["m"], f"{path}.m", 1)
        c1 = _matrix(obj["c1"], f"{path}.c1", n, m, q - 1)
        c2 = _matrix(obj["c2"], f"{path}.c2", n, m, q - 1)
        return GswPayload(q, n, m, c1, c2)
    _fields(obj, path, ("x", "y", "x_phase", "y_phase"))
    x = _bits(obj["x"], f"{path}.x")
    y = _bits(obj["y"], f"{path}.y", len(x))
    return QotpPayload(x, y, _phase(obj["x_phase"], f"{path}.x_phase"), _phase(obj["y_phase"], f"{path}.y_phase"))


def _check_result(scheme, obj, request: Optional[Payload], path="result") -> Result:
    if scheme == "chen":
        _fields(obj, path, ("segments",))
        count = len(request.a) if request is not None else None
        return ChenResult(_segments(obj["segments"], f"{path}.segments", count))
    if scheme == "gsw":
        _fields(obj, path, ("c",))
        if request is None:
            c = _list(obj["c"], f"{path}.c")
            cols = len(c[0]) if type(c[0]) is list else None
            return GswResult(_matrix(c, f"{path}.c", None, cols, MAX_WIRE_INT))
        return GswResult(_matrix(obj["c"], f"{path}.c", request.n, request.m, request.q - 1))
    _fields(obj, path, ("bits", "phase"))
    width = len(request.x) if request is not None else None
    return QotpResult(_bits(obj["bits"], f"{path}.bits", width), _phase(obj["phase"], f"{path}.phase"))


# -- envelopes --------------------------------------------------------------

def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _parse(document) -> dict:
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"body is not UTF-8: {exc}") from None
    try:
        doc = json.loads(document, parse_float=_reject_float, parse_constant=_reject_float)
    except ValueError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if type(doc) is not dict:
        raise ParseError("document must be a JSON object")
    return doc


def _reject_float(token):
    raise ValueError(f"non-integer number {token!r} is not allowed on the wire")


def _scheme(doc, body_key) -> str:
    if "scheme" not in doc:
        raise ParseError("missing 'scheme'")
    scheme = doc["scheme"]
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r}")
    if body_key not in doc:
        raise ParseError(f"missing {body_key!r}")
    for key in doc:
        if key not in ("scheme", body_key):
            raise ValidationError(key, "unknown field")
    return scheme


def _as_plain(obj):
    # dataclass -> dict of plain lists/ints (numpy scalars and arrays allowed in)
    out = {}
    for key, value in vars(obj).items():
        if hasattr(value, "tolist"):
            value = value.tolist()
        elif isinstance(value, list):
            value = [v.tolist() if hasattr(v, "tolist") else v for v in value]
        out[key] = value
    return out


def encode_request(scheme: str, payload: Payload) -> str:
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r}")
    if not isinstance(payload, _PAYLOAD_TYPES[scheme]):
        raise EncodeError("payload", f"expected {_PAYLOAD_TYPES[scheme].__name__}")
    plain = _as_plain(payload)
    try:
        _check_payload(scheme, plain)
    except ValidationError as exc:
        raise EncodeError(exc.path, str(exc)) from None
    return _dump({"scheme": scheme, "payload": plain})


def decode_request(document) -> Tuple[str, Payload]:
    doc = _parse(document)
    scheme = _scheme(doc, "payload")
    return scheme, _check_payload(scheme, doc["payload"])


def encode_response(scheme: str, result: Result, request: Optional[Payload] = None) -> str:
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r}")
    if not isinstance(result, _RESULT_TYPES[scheme]):
        raise EncodeError("result", f"expected {_RESULT_TYPES[scheme].__name__}")
    plain = _as_plain(result)
    try:
        _check_result(scheme, plain, request)
    except ValidationError as exc:
        raise EncodeError(exc.path, str(exc)) from None
    return _dump({"scheme": scheme, "result": plain})


def decode_response(document, request: Optional[Payload] = None) -> Tuple[str, Result]:
    """Decode a response; with ``request`` given, also check it answers that request."""
    doc = _parse(document)
    scheme = _scheme(doc, "result")
    if request is not None and not isinstance(request, _PAYLOAD_TYPES[scheme]):
        raise ValidationError("scheme", f"response scheme {scheme!r} does not match the request")
    return scheme, _check_result(scheme, doc["result"], request)
