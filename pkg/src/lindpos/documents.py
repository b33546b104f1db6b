"""Versioned JSON documents for generators, perturbations and reports.

Complex matrices are nested lists of ``[re, im]`` pairs. Unknown fields are
rejected. Output is serialised with sorted keys so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .config import TOL
from .generators import BASIS_TAG, GeneratorSpec, build_traceless_basis
from .models import C_DEPOLARIZING, C_SIGMA2_ONLY

VERSION = 1


class DocumentError(ValueError):
    """Malformed input document; the message names the offending field or line."""


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise DocumentError(f"{where}: expected a nested list of [re, im] pairs")
    rows = []
    for i, row in enumerate(data):
        if len(row) != len(data[0]):
            raise DocumentError(f"{where}[{i}]: ragged row (length {len(row)}, expected {len(data[0])})")
        vals = []
        for j, pair in enumerate(row):
            ok = (
                isinstance(pair, list)
                and len(pair) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in pair)
            )
            if not ok:
                raise DocumentError(f"{where}[{i}][{j}]: expected [re, im] pair of finite numbers, got {pair!r}")
            vals.append(complex(pair[0], pair[1]))
        rows.append(vals)
    return np.array(rows, dtype=np.complex128)


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def _check_fields(doc, kind: str, required: set, optional: set = frozenset()) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")
    if "version" not in doc:
        raise DocumentError("version: missing mandatory field")
    if doc["version"] != VERSION:
        raise DocumentError(f"version: unsupported value {doc['version']!r} (expected {VERSION})")
    if doc.get("kind") != kind:
        raise DocumentError(f"kind: expected {kind!r}, got {doc.get('kind')!r}")
    allowed = required | optional | {"version", "kind"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise DocumentError(f"unknown field(s): {', '.join(unknown)}")
    missing = sorted(required - set(doc))
    if missing:
        raise DocumentError(f"missing field(s): {', '.join(missing)}")


def generator_to_doc(g: GeneratorSpec) -> dict:
    return {
        "version": VERSION,
        "kind": "generator",
        "n": g.n,
        "basis": BASIS_TAG,
        "hamiltonian": encode_matrix(g.hamiltonian),
        "kossakowski": encode_matrix(g.kossakowski),
    }


def generator_from_doc(doc) -> GeneratorSpec:
    _check_fields(doc, "generator", {"n", "kossakowski"}, {"basis", "hamiltonian"})
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DocumentError(f"n: expected integer >= 2, got {n!r}")
    basis = doc.get("basis", BASIS_TAG)
    if basis != BASIS_TAG:
        raise DocumentError(f"basis: unsupported tag {basis!r} (only {BASIS_TAG!r})")
    parts = {"kossakowski": (decode_matrix(doc["kossakowski"], "kossakowski"), n * n - 1)}
    if "hamiltonian" in doc:
        parts["hamiltonian"] = (decode_matrix(doc["hamiltonian"], "hamiltonian"), n)
    for field, (m, size) in parts.items():
        if m.shape != (size, size):
            raise DocumentError(f"{field}: expected {size}x{size} for n={n}, got {m.shape[0]}x{m.shape[1]}")
        if np.max(np.abs(m - m.conj().T)) > TOL.hermitian * max(1.0, float(np.max(np.abs(m)))):
            raise DocumentError(f"{field}: matrix is not Hermitian")
    h = parts["hamiltonian"][0] if "hamiltonian" in parts else np.zeros((n, n), dtype=np.complex128)
    try:
        return GeneratorSpec(h, parts["kossakowski"][0], build_traceless_basis(n))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def perturbation_to_doc(gamma) -> dict:
    return {"version": VERSION, "kind": "perturbation", "gamma": encode_matrix(gamma)}


def perturbation_from_doc(doc) -> np.ndarray:
    _check_fields(doc, "perturbation", {"gamma"})
    g = decode_matrix(doc["gamma"], "gamma")
    if g.shape[0] != g.shape[1]:
        raise DocumentError(f"gamma: must be square, got {g.shape}")
    if np.max(np.abs(g - g.conj().T)) > 1e-12:
        raise DocumentError("gamma: perturbation must be Hermitian")
    return g


# named inputs usable wherever a document path is expected
PRESET_GENERATORS = {
    "paper:C1": lambda: GeneratorSpec.from_kossakowski(C_DEPOLARIZING),
    "paper:C2": lambda: GeneratorSpec.from_kossakowski(C_SIGMA2_ONLY),
    "paper:C1-rate4": lambda: GeneratorSpec.from_kossakowski(2 * C_DEPOLARIZING),
    "paper:C2-rate4": lambda: GeneratorSpec.from_kossakowski(2 * C_SIGMA2_ONLY),
}
PRESET_PERTURBATIONS = {
    "paper:gamma": lambda: np.diag([0.0, -2.0, 0.0]).astype(np.complex128),
}


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load(ref: str, presets: dict, parse):
    if ref in presets:
        return presets[ref]()
    doc = read_json(ref)
    try:
        return parse(doc)
    except DocumentError as exc:
        raise DocumentError(f"{ref}: {exc}") from exc


def load_generator(ref: str) -> GeneratorSpec:
    return _load(ref, PRESET_GENERATORS, generator_from_doc)


def load_perturbation(ref: str) -> np.ndarray:
    return _load(ref, PRESET_PERTURBATIONS, perturbation_from_doc)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    return x


def dumps(doc: dict) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
