"""Canonical JSON documents: sorted keys, floats with 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from spin2cv.circuit import LEVELS, Circuit, Gate
from spin2cv.errors import InputError
from spin2cv.terms import QuadFactor, QuadratureHamiltonian, QuadratureTerm


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite float {x}")
        if x == 0.0:
            x = 0.0  # fold -0.0
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _render(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return _render(doc, 2, 0) + "\n"


def load_json(path: str | Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


# -- circuits ---------------------------------------------------------------

def gate_to_dict(g: Gate) -> dict:
    return {"kind": g.kind, "modes": list(g.modes), "param": g.param, "dagger": g.dagger}


def circuit_to_dict(c: Circuit) -> dict:
    doc = {"modes": c.n_modes, "level": c.level, "gates": [gate_to_dict(g) for g in c.gates]}
    for key, value in c.metadata.items():
        doc[key] = value
    return doc


def circuit_from_dict(doc: dict) -> Circuit:
    if not isinstance(doc, dict):
        raise InputError("circuit document must be an object")
    try:
        n_modes = doc["modes"]
        level = doc["level"]
        raw_gates = doc["gates"]
    except KeyError as exc:
        raise InputError(f"circuit document missing key {exc}") from exc
    if level not in LEVELS:
        raise InputError(f"unknown circuit level {level!r}")
    gates = []
    for i, g in enumerate(raw_gates):
        kind = g.get("kind")
        dagger = bool(g.get("dagger", False))
        if kind == "FourierDag":
            kind, dagger = "Fourier", not dagger
        try:
            gates.append(Gate(kind, tuple(g["modes"]), float(g.get("param", 0.0)), dagger))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"gate #{i}: {exc}") from exc
    meta = {k: v for k, v in doc.items() if k not in ("modes", "level", "gates")}
    try:
        return Circuit(int(n_modes), tuple(gates), level, meta)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# -- Hamiltonians ------------------------------------------------------------------

def hamiltonian_to_dict(h: QuadratureHamiltonian) -> dict:
    return {
        "modes": h.n_modes,
        "offset": h.constant_offset,
        "terms": [
            {
                "coeff": t.coefficient,
                "factors": [{"mode": f.mode, "quad": f.quad, "power": f.power} for f in t.factors],
            }
            for t in h.terms
        ],
    }


def hamiltonian_from_dict(doc: dict) -> QuadratureHamiltonian:
    try:
        terms = [
            QuadratureTerm(
                float(t["coeff"]),
                tuple(QuadFactor(int(f["mode"]), f["quad"], int(f["power"])) for f in t["factors"]),
            )
            for t in doc["terms"]
        ]
        return QuadratureHamiltonian(int(doc["modes"]), tuple(terms), float(doc.get("offset", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid Hamiltonian document: {exc}") from exc


# -- covariance documents -----------------------------------------------------------

def matrix_from_doc(doc: dict) -> tuple[str, np.ndarray]:
    """Parse {"modes", "basis", "matrix"}; entries are re or [re, im]."""
    if not isinstance(doc, dict):
        raise InputError("matrix document must be an object")
    basis = doc.get("basis")
    if basis not in ("quadrature", "ladder"):
        raise InputError(f"basis must be 'quadrature' or 'ladder', got {basis!r}")
    rows = doc.get("matrix")
    if not isinstance(rows, list) or not rows:
        raise InputError("'matrix' must be a non-empty array of rows")
    try:
        mat = np.array(
            [[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in rows],
            dtype=complex,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad matrix entry: {exc}") from exc
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InputError(f"matrix must be square, got shape {mat.shape}")
    modes = doc.get("modes")
    expected = mat.shape[0] if basis == "quadrature" else mat.shape[0] // 2
    if modes is not None and modes != expected:
        raise InputError(f"'modes' is {modes} but the matrix implies {expected}")
    return basis, mat
