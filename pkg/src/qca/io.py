"""JSON file formats.

Complex numbers are ``[re, im]`` pairs and a matrix is a list of rows of
such pairs. Documents:

system     ``{"n", "label", "drift", "controls": [...], "hermitian"?}``
density    ``{"n", "matrix"}``
state      ``{"n", "amplitudes": [[re, im], ...]}``
pulses     ``{"segments": [{"dt": float, "u": [float, ...]}, ...]}``

With ``"hermitian": true`` the system matrices are Hamiltonians ``H`` and are
multiplied by ``i`` on load.
"""

import hashlib
import json

import numpy as np

from .matcore import DensityMatrix, ValidationError
from .models import SystemModel
from .sim import PulseSequence

SYSTEM_KEYS = {"n", "label", "drift", "controls", "hermitian", "dim", "source"}


class SchemaError(ValueError):
    """A document does not match its schema; the message names the field."""


def _fail(where, msg):
    raise SchemaError(f"{where}: {msg}")


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(where, f"expected a number, got {type(x).__name__}")
    if not np.isfinite(x):
        _fail(where, "number is not finite")
    return float(x)


def _complex(x, where):
    if not isinstance(x, list) or len(x) != 2:
        _fail(where, "expected a [re, im] pair")
    return complex(_number(x[0], where + "[0]"), _number(x[1], where + "[1]"))


def decode_matrix(rows, where="matrix", n=None):
    if not isinstance(rows, list) or not rows:
        _fail(where, "expected a nonempty list of rows")
    size = len(rows) if n is None else n
    if len(rows) != size:
        _fail(where, f"expected {size} rows, got {len(rows)}")
    out = np.empty((size, size), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            got = len(row) if isinstance(row, list) else type(row).__name__
            _fail(f"{where}[{i}]", f"row length {got}, expected {size}")
        for j, x in enumerate(row):
            out[i, j] = _complex(x, f"{where}[{i}][{j}]")
    return out


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_vector(xs, where="amplitudes", n=None):
    if not isinstance(xs, list) or not xs:
        _fail(where, "expected a nonempty list")
    if n is not None and len(xs) != n:
        _fail(where, f"expected {n} entries, got {len(xs)}")
    return np.array([_complex(x, f"{where}[{i}]") for i, x in enumerate(xs)])


def encode_vector(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _dim(doc, where):
    if not isinstance(doc, dict):
        _fail(where, "expected a JSON object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        _fail(f"{where}.n", "expected a positive integer")
    return n


def system_from_dict(doc):
    n = _dim(doc, "system")
    extra = set(doc) - SYSTEM_KEYS
    if extra:
        _fail("system", f"unknown keys {sorted(extra)}")
    for key in ("drift", "controls"):
        if key not in doc:
            _fail("system", f"missing key {key!r}")
    label = doc.get("label", "")
    if not isinstance(label, str):
        _fail("system.label", "expected a string")
    hermitian = doc.get("hermitian", False)
    if not isinstance(hermitian, bool):
        _fail("system.hermitian", "expected true or false")
    drift = decode_matrix(doc["drift"], "system.drift", n)
    ctrl = doc["controls"]
    if not isinstance(ctrl, list) or not ctrl:
        _fail("system.controls", "expected a nonempty list of matrices")
    controls = [decode_matrix(c, f"system.controls[{k}]", n) for k, c in enumerate(ctrl)]
    if hermitian:
        drift, controls = 1j * drift, [1j * c for c in controls]
    try:
        return SystemModel(drift, tuple(controls), label)
    except ValidationError as exc:
        _fail("system", str(exc))


def system_to_dict(model, **extra):
    doc = {
        "n": model.n,
        "label": model.label,
        "drift": encode_matrix(model.drift),
        "controls": [encode_matrix(b) for b in model.controls],
    }
    doc.update(extra)
    return doc


def density_from_dict(doc):
    n = _dim(doc, "density")
    if "matrix" not in doc:
        _fail("density", "missing key 'matrix'")
    m = decode_matrix(doc["matrix"], "density.matrix", n)
    try:
        return DensityMatrix(m)
    except ValidationError as exc:
        _fail("density", str(exc))


def density_to_dict(d):
    return {"n": d.n, "matrix": encode_matrix(d.matrix)}


def state_from_dict(doc):
    n = _dim(doc, "state")
    if "amplitudes" not in doc:
        _fail("state", "missing key 'amplitudes'")
    psi = decode_vector(doc["amplitudes"], "state.amplitudes", n)
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        _fail("state.amplitudes", "vector is not normalized")
    return psi


def state_to_dict(psi):
    return {"n": len(psi), "amplitudes": encode_vector(psi)}


def pulses_from_dict(doc, m):
    if not isinstance(doc, dict) or not isinstance(doc.get("segments"), list):
        _fail("pulses", "expected an object with a 'segments' list")
    segments = []
    for k, seg in enumerate(doc["segments"]):
        where = f"pulses.segments[{k}]"
        if not isinstance(seg, dict) or "dt" not in seg or "u" not in seg:
            _fail(where, "expected {'dt': float, 'u': [...]}")
        dt = _number(seg["dt"], where + ".dt")
        if dt <= 0:
            _fail(where + ".dt", "duration must be positive")
        if not isinstance(seg["u"], list) or len(seg["u"]) != m:
            _fail(where + ".u", f"expected {m} amplitudes")
        segments.append((dt, [_number(u, f"{where}.u[{i}]") for i, u in enumerate(seg["u"])]))
    return PulseSequence.from_segments(segments, m)


def pulses_to_dict(pulses):
    return {
        "segments": [
            {"dt": float(dt), "u": [float(u) for u in amps]}
            for dt, amps in zip(pulses.durations, pulses.amplitudes)
        ]
    }


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def dumps(doc):
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def digest(doc):
    """SHA-256 of the canonical compact encoding of a parsed document."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
