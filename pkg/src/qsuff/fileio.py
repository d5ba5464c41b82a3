"""JSON documents for states and channels, and deterministic report output.

Matrices are row-major nested lists whose entries are ``[re, im]`` pairs::

    {"kind": "state", "dim": 2, "payload": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]]}
    {"kind": "channel", "dim_in": 2, "dim_out": 2, "payload": [K_1, K_2, ...]}
    {"kind": "channel", "representation": "choi", "dim_in": 2, "dim_out": 2, "payload": C}

Floats are written with 17 significant digits; infinities become the string
``"inf"`` (``"-inf"``) and NaN becomes ``null``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import fields, is_dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .quantum import ChoiMatrix, QuantumChannel, as_density_matrix, choi_to_channel


def format_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with fixed float formatting, so equal inputs give equal bytes."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, (bool, np.bool_)) or o is None:
            return json.dumps(bool(o) if o is not None else None)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return format_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(to_plain(obj), 0) + "\n"


def to_plain(obj):
    """Convert dataclasses, arrays and tuples into JSON-ready Python values."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_to_payload(obj)
        return to_plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def matrix_to_payload(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def payload_to_matrix(payload, shape: tuple[int, int]) -> np.ndarray:
    try:
        arr = np.array(payload, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix payload is not a rectangular numeric array: {exc}") from exc
    if arr.shape != (*shape, 2):
        raise ParseError(f"matrix payload has shape {arr.shape[:-1]} (pairs {arr.shape[-1:]}), expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError("matrix payload has non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def _load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError(f"{path}: expected an object with a 'kind' field")
    return doc


def _int_field(doc, name):
    v = doc.get(name)
    if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
        raise ParseError(f"field {name!r} must be a positive integer")
    return v


def state_from_doc(doc: dict) -> np.ndarray:
    if doc.get("kind") != "state":
        raise ParseError(f"expected kind 'state', got {doc.get('kind')!r}")
    d = _int_field(doc, "dim")
    return as_density_matrix(payload_to_matrix(doc.get("payload"), (d, d)))


def channel_from_doc(doc: dict) -> QuantumChannel:
    if doc.get("kind") != "channel":
        raise ParseError(f"expected kind 'channel', got {doc.get('kind')!r}")
    din, dout = _int_field(doc, "dim_in"), _int_field(doc, "dim_out")
    rep = doc.get("representation", "kraus")
    payload = doc.get("payload")
    if rep == "choi":
        n = din * dout
        return choi_to_channel(ChoiMatrix(din, dout, payload_to_matrix(payload, (n, n))))
    if rep != "kraus":
        raise ParseError(f"unknown channel representation {rep!r}")
    if not isinstance(payload, list) or not payload:
        raise ParseError("Kraus payload must be a non-empty list of matrices")
    return QuantumChannel(np.array([payload_to_matrix(K, (dout, din)) for K in payload]))


def load_state(path) -> np.ndarray:
    return state_from_doc(_load(path))


def load_channel(path) -> QuantumChannel:
    return channel_from_doc(_load(path))


def state_to_doc(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"kind": "state", "dim": rho.shape[0], "payload": matrix_to_payload(rho)}


def channel_to_doc(phi: QuantumChannel) -> dict:
    return {
        "kind": "channel",
        "representation": "kraus",
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "payload": [matrix_to_payload(K) for K in phi.kraus],
    }


def choi_to_doc(choi: ChoiMatrix) -> dict:
    return {
        "kind": "channel",
        "representation": "choi",
        "dim_in": choi.dim_in,
        "dim_out": choi.dim_out,
        "payload": matrix_to_payload(choi.matrix),
    }


def write_doc(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()

