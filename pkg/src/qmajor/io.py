"""JSON file formats: states, POVMs, multiparty states, vectors and protocols.

Complex scalars are ``[re, im]`` pairs; matrices are arrays of row arrays.
Any structural problem raises :class:`ParseError`, which the CLI keeps
separate from invariant failures.
"""
import json

import numpy as np

from .locc import MEASUREMENT, UNITARY, Protocol, ProtocolStep
from .multiparty import TensorSpace


class ParseError(ValueError):
    pass


def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _scalar(x):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(c, (int, float)) for c in x):
        return complex(x[0], x[1])
    raise ParseError(f"bad complex scalar {x!r}; expected [re, im]")


def decode_matrix(obj, dim=None):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("matrix must be a non-empty array of row arrays")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise ParseError("matrix rows have different lengths")
    m = np.array([[_scalar(x) for x in row] for row in obj], dtype=np.complex128)
    if dim is not None and m.shape != (dim, dim):
        raise ParseError(f"matrix shape {m.shape} does not match declared dim {dim}")
    return m


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _obj(doc, *keys):
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")
    return doc


def _factors(raw):
    if not isinstance(raw, list) or not raw or not all(isinstance(d, int) and d > 0 for d in raw):
        raise ParseError("factors must be a non-empty array of positive integers")
    return tuple(raw)


def parse_state(doc):
    """Return ``(matrix, factors)``; ``factors`` is None for a plain state file."""
    doc = _obj(doc, "matrix")
    if "factors" in doc:
        factors = _factors(doc["factors"])
        return decode_matrix(doc["matrix"], int(np.prod(factors))), factors
    _obj(doc, "dim")
    if not isinstance(doc["dim"], int) or doc["dim"] < 1:
        raise ParseError("dim must be a positive integer")
    return decode_matrix(doc["matrix"], doc["dim"]), None


def dump_state(m, factors=None):
    m = np.asarray(m)
    if factors is not None:
        return {"factors": list(factors), "matrix": encode_matrix(m)}
    return {"dim": int(m.shape[0]), "matrix": encode_matrix(m)}


def parse_povm(doc):
    doc = _obj(doc, "dim", "operators")
    if not isinstance(doc["operators"], list) or not doc["operators"]:
        raise ParseError("operators must be a non-empty array of matrices")
    return [decode_matrix(op, doc["dim"]) for op in doc["operators"]]


def dump_povm(ops):
    ops = [np.asarray(f) for f in ops]
    return {"dim": int(ops[0].shape[0]), "operators": [encode_matrix(f) for f in ops]}


def parse_vector_or_state(doc):
    """A bare number array, ``{"vector": [...]}``, or a state file.

    Returns ``("vector", array)`` or ``("state", matrix)``.
    """
    if isinstance(doc, dict) and "vector" in doc:
        doc = doc["vector"]
    if isinstance(doc, list) and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in doc):
        if not doc:
            raise ParseError("empty vector")
        return "vector", np.array(doc, dtype=float)
    m, _ = parse_state(doc)
    return "state", m


def _history_key(key):
    key = key.strip()
    if not key:
        return ()
    try:
        return tuple(int(x) for x in key.split(","))
    except ValueError as exc:
        raise ParseError(f"bad history key {key!r}; expected comma-separated outcome indices") from exc


def _payload(kind, raw, dim):
    if kind == UNITARY:
        return decode_matrix(raw, dim)
    if not isinstance(raw, list) or not raw:
        raise ParseError("measurement payload must be a non-empty array of matrices")
    return [decode_matrix(op, dim) for op in raw]


def parse_protocol(doc):
    doc = _obj(doc, "factors", "steps")
    space = TensorSpace(_factors(doc["factors"]))
    if not isinstance(doc["steps"], list):
        raise ParseError("steps must be an array")
    steps = []
    for i, raw in enumerate(doc["steps"]):
        raw = _obj(raw, "agent", "kind")
        kind, agent = raw["kind"], raw["agent"]
        if kind not in (UNITARY, MEASUREMENT):
            raise ParseError(f"step {i}: kind must be 'unitary' or 'measurement'")
        if not isinstance(agent, int) or not 1 <= agent <= space.n:
            raise ParseError(f"step {i}: agent must be an integer in 1..{space.n}")
        dim = space.agent_dim(agent)
        payload = _payload(kind, raw["payload"], dim) if raw.get("payload") is not None else None
        adaptive = {}
        for key, val in (raw.get("adaptive") or {}).items():
            adaptive[_history_key(key)] = _payload(kind, val, dim)
        if payload is None and not adaptive:
            raise ParseError(f"step {i}: needs a payload or an adaptive table")
        steps.append(ProtocolStep(agent, kind, payload, adaptive))
    return Protocol(space, tuple(steps))


def dump_protocol(protocol):
    def enc(kind, p):
        return encode_matrix(p) if kind == UNITARY else [encode_matrix(f) for f in p]

    steps = []
    for st in protocol.steps:
        d = {"agent": st.agent, "kind": st.kind}
        if st.payload is not None:
            d["payload"] = enc(st.kind, st.payload)
        if st.adaptive:
            d["adaptive"] = {",".join(map(str, h)): enc(st.kind, p) for h, p in st.adaptive.items()}
        steps.append(d)
    return {"factors": list(protocol.space.factor_dims), "steps": steps}
