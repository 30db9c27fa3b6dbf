"""Spin-lattice problem definition and the dense Pauli-matrix oracle.

Spins use Pauli matrices (eigenvalues +1 and -1). Site 0 is the most
significant qubit of the 2**N basis, with up = |0> and down = |1>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from spin2cv.errors import GuardError, InputError

MAX_ORACLE_SITES = 12
HERMITIAN_ATOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class CouplingEntry:
    k: int
    l: int
    jx: float = 0.0
    jy: float = 0.0
    jz: float = 0.0

    def __post_init__(self):
        if self.k < 0:
            raise InputError(f"site index {self.k} is negative")
        if self.k >= self.l:
            raise InputError(f"coupling requires k < l, got k={self.k}, l={self.l}")


@dataclass(frozen=True)
class SpinModel:
    n_sites: int
    couplings: tuple[CouplingEntry, ...] = ()
    field_b0: float = 0.0

    def __post_init__(self):
        if self.n_sites < 1:
            raise InputError(f"n_sites must be >= 1, got {self.n_sites}")
        object.__setattr__(self, "couplings", tuple(self.couplings))
        seen = set()
        for c in self.couplings:
            if c.l >= self.n_sites:
                raise InputError(f"coupling ({c.k},{c.l}) out of range for {self.n_sites} sites")
            if (c.k, c.l) in seen:
                raise InputError(f"duplicate coupling ({c.k},{c.l})")
            seen.add((c.k, c.l))

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites

    def sorted_couplings(self) -> list[CouplingEntry]:
        return sorted(self.couplings, key=lambda c: (c.k, c.l))


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


_MODEL_KEYS = {"sites", "field", "couplings"}
_COUPLING_KEYS = {"k", "l", "jx", "jy", "jz"}


def _number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{what} must be a number, got {value!r}")
    if not np.isfinite(value):
        raise InputError(f"{what} must be finite")
    return float(value)


def _integer(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


def model_from_dict(doc: dict) -> SpinModel:
    if not isinstance(doc, dict):
        raise InputError("spin model document must be an object")
    unknown = set(doc) - _MODEL_KEYS
    if unknown:
        raise InputError(f"unknown keys in spin model: {sorted(unknown)}")
    if "sites" not in doc:
        raise InputError("missing required key 'sites'")
    n_sites = _integer(doc["sites"], "sites")
    b0 = _number(doc.get("field", 0.0), "field")
    raw = doc.get("couplings", [])
    if not isinstance(raw, list):
        raise InputError("'couplings' must be an array")
    couplings = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise InputError(f"coupling #{i} must be an object")
        unknown = set(entry) - _COUPLING_KEYS
        if unknown:
            raise InputError(f"unknown keys in coupling #{i}: {sorted(unknown)}")
        if "k" not in entry or "l" not in entry:
            raise InputError(f"coupling #{i} needs both 'k' and 'l'")
        couplings.append(
            CouplingEntry(
                k=_integer(entry["k"], "k"),
                l=_integer(entry["l"], "l"),
                jx=_number(entry.get("jx", 0.0), "jx"),
                jy=_number(entry.get("jy", 0.0), "jy"),
                jz=_number(entry.get("jz", 0.0), "jz"),
            )
        )
    return SpinModel(n_sites=n_sites, couplings=tuple(couplings), field_b0=b0)


def parse_spin_model(text: str) -> SpinModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return model_from_dict(doc)


def model_to_dict(model: SpinModel) -> dict:
    return {
        "sites": model.n_sites,
        "field": model.field_b0,
        "couplings": [
            {"k": c.k, "l": c.l, "jx": c.jx, "jy": c.jy, "jz": c.jz}
            for c in model.sorted_couplings()
        ],
    }


def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a 2x2 operator acting on `site` into the 2**n_sites space."""
    factors = [op if s == site else np.eye(2) for s in range(n_sites)]
    return reduce(np.kron, factors)


def spin_hamiltonian_matrix(model: SpinModel) -> HermitianMatrix:
    n = model.n_sites
    if n > MAX_ORACLE_SITES:
        raise GuardError(f"dense oracle limited to {MAX_ORACLE_SITES} sites, got {n}")
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for c in model.couplings:
        for coef, pauli in ((c.jx, PAULI_X), (c.jy, PAULI_Y), (c.jz, PAULI_Z)):
            if coef:
                h -= coef * site_operator(pauli, c.k, n) @ site_operator(pauli, c.l, n)
    if model.field_b0:
        for k in range(n):
            h -= model.field_b0 * site_operator(PAULI_Z, k, n)
    return HermitianMatrix(h)


DEMO_MODEL = SpinModel(
    n_sites=2,
    couplings=(CouplingEntry(0, 1, jx=1.0, jy=1.0, jz=1.0),),
    field_b0=0.3,
)
