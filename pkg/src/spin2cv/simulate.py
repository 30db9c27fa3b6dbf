"""Truncated Fock-space back end used as the verification oracle.

Conventions: a = X + iP, [X, P] = i/2, so X = (a + a^dag)/2 and the vacuum
has <X^2> = 1/4. Modes are ordered as Kronecker factors, mode 0 first.

Quadrature polynomials are built as compressions: the power is computed at a
cutoff padded by the degree and then sliced back to d levels. This makes
X^2 + P^2 equal n + 1/2 exactly and makes quadrature and ladder forms of the
same operator agree to machine precision at every cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from spin2cv.circuit import Circuit, Gate
from spin2cv.errors import GuardError
from spin2cv.terms import LadderTerm, QuadratureHamiltonian, QuadratureTerm

MAX_DIM = 20000


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes}")
        if self.dim > MAX_DIM:
            raise GuardError(
                f"Fock space {self.n_modes} modes x cutoff {self.cutoff} has dim {self.dim} > {MAX_DIM}"
            )

    @property
    def dim(self) -> int:
        return self.cutoff**self.n_modes


@dataclass(frozen=True)
class ModeOperators:
    x_matrix: np.ndarray
    p_matrix: np.ndarray
    a_matrix: np.ndarray
    adag_matrix: np.ndarray
    n_matrix: np.ndarray


def _lowering(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)


def mode_operators(d: int) -> ModeOperators:
    if d < 2:
        raise ValueError(f"cutoff must be >= 2, got {d}")
    a = _lowering(d)
    adag = a.conj().T
    return ModeOperators(
        x_matrix=(a + adag) / 2,
        p_matrix=(a - adag) / 2j,
        a_matrix=a,
        adag_matrix=adag,
        n_matrix=np.diag(np.arange(d)).astype(complex),
    )


@lru_cache(maxsize=None)
def _quadrature_power(quad: str, power: int, d: int) -> np.ndarray:
    ops = mode_operators(d + power)
    base = ops.x_matrix if quad == "X" else ops.p_matrix
    out = np.linalg.matrix_power(base, power)[:d, :d]
    out.setflags(write=False)
    return out


def quadrature_power(quad: str, power: int, d: int) -> np.ndarray:
    """Compression of quad**power onto the first d Fock levels."""
    if quad not in ("X", "P"):
        raise ValueError(f"unknown quadrature {quad!r}")
    return _quadrature_power(quad, power, d).copy()


def ladder_matrix(kind: str, d: int) -> np.ndarray:
    ops = mode_operators(d)
    if kind == "create":
        return ops.adag_matrix
    if kind == "annihilate":
        return ops.a_matrix
    if kind == "number":
        return ops.n_matrix
    raise ValueError(f"unknown ladder kind {kind!r}")


def embed_operator(local: dict[int, np.ndarray], space: FockSpace) -> np.ndarray:
    """Kronecker product with `local[m]` on mode m and identity elsewhere."""
    d = space.cutoff
    eye = np.eye(d, dtype=complex)
    for m in local:
        if not 0 <= m < space.n_modes:
            raise ValueError(f"mode {m} outside a {space.n_modes}-mode space")
    return reduce(np.kron, [local.get(m, eye) for m in range(space.n_modes)])


def term_matrix(term: QuadratureTerm | LadderTerm, space: FockSpace) -> np.ndarray:
    d = space.cutoff
    local: dict[int, np.ndarray] = {}
    if isinstance(term, QuadratureTerm):
        for f in term.factors:
            local[f.mode] = quadrature_power(f.quad, f.power, d)
    elif isinstance(term, LadderTerm):
        for f in term.factors:
            op = ladder_matrix(f.kind, d)
            local[f.mode] = local[f.mode] @ op if f.mode in local else op
    else:
        raise TypeError(f"unsupported term type {type(term).__name__}")
    return term.coefficient * embed_operator(local, space)


def hamiltonian_matrix(h: QuadratureHamiltonian, space: FockSpace) -> np.ndarray:
    out = h.constant_offset * np.eye(space.dim, dtype=complex)
    for term in h.terms:
        out += term_matrix(term, space)
    return out


def ladder_hamiltonian_matrix(terms: list[LadderTerm], space: FockSpace) -> np.ndarray:
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for term in terms:
        out += term_matrix(term, space)
    return out


def hermitian_expm(h: np.ndarray, angle: float) -> np.ndarray:
    """exp(i * angle * h) for Hermitian h, by eigendecomposition."""
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(1j * angle * w)) @ v.conj().T


def exact_evolution(h_matrix: np.ndarray, t: float) -> np.ndarray:
    """exp(i t H), the same sign convention as the gates."""
    h = np.asarray(h_matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if h.size and np.max(np.abs(h - h.conj().T)) > 1e-10 * scale:
        raise ValueError("exact_evolution requires a Hermitian matrix")
    return hermitian_expm(h, t)


# -- gates -----------------------------------------------------------------

_ONE_MODE_POWER = {"R": 1, "G": 2, "V": 3, "Q": 4}


def gate_generator(kind: str, d: int) -> np.ndarray:
    """Hermitian generator H of the gate exp(i * param * H) on its own modes."""
    if kind in _ONE_MODE_POWER:
        return quadrature_power("X", _ONE_MODE_POWER[kind], d)
    if kind == "Fourier":
        return (np.pi / 2) * np.diag(np.arange(d) + 0.5).astype(complex)
    if kind == "Cz":
        x = quadrature_power("X", 1, d)
        return np.kron(x, x)
    if kind == "Shift1":
        return np.kron(quadrature_power("P", 1, d), quadrature_power("X", 1, d))
    if kind == "Shift2":
        return np.kron(quadrature_power("P", 1, d), quadrature_power("X", 2, d))
    raise ValueError(f"unknown gate kind {kind!r}")


@lru_cache(maxsize=4096)
def _local_unitary(kind: str, angle: float, d: int) -> np.ndarray:
    if kind == "Fourier":
        u = np.diag(np.exp(1j * angle * (np.pi / 2) * (np.arange(d) + 0.5)))
    else:
        u = hermitian_expm(gate_generator(kind, d), angle)
    u.setflags(write=False)
    return u


def gate_angle(gate: Gate) -> float:
    """Signed multiplier of the generator, with the dagger folded in."""
    base = 1.0 if gate.kind == "Fourier" else gate.param
    return -base if gate.dagger else base


def local_gate_unitary(gate: Gate, d: int) -> np.ndarray:
    return _local_unitary(gate.kind, gate_angle(gate), d)


def gate_unitary(gate: Gate, space: FockSpace) -> np.ndarray:
    u = local_gate_unitary(gate, space.cutoff)
    if len(gate.modes) == 1:
        return embed_operator({gate.modes[0]: u}, space)
    return apply_gate(gate, np.eye(space.dim, dtype=complex), space)


def apply_local(u: np.ndarray, modes: tuple[int, ...], psi: np.ndarray, space: FockSpace) -> np.ndarray:
    """Apply a local operator on `modes` to the columns of psi (shape dim x k)."""
    d, m = space.cutoff, space.n_modes
    cols = psi.shape[1]
    tensor = psi.reshape((d,) * m + (cols,))
    nloc = len(modes)
    u_t = u.reshape((d,) * (2 * nloc))
    out = np.tensordot(u_t, tensor, axes=(list(range(nloc, 2 * nloc)), list(modes)))
    out = np.moveaxis(out, list(range(nloc)), list(modes))
    return out.reshape(space.dim, cols)


def apply_gate(gate: Gate, psi: np.ndarray, space: FockSpace) -> np.ndarray:
    for m in gate.modes:
        if m >= space.n_modes:
            raise ValueError(f"gate mode {m} outside a {space.n_modes}-mode space")
    return apply_local(local_gate_unitary(gate, space.cutoff), gate.modes, psi, space)


def apply_circuit(circuit: Circuit, psi: np.ndarray, space: FockSpace) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    vector = psi.ndim == 1
    out = psi.reshape(space.dim, -1)
    for gate in circuit.gates:
        out = apply_gate(gate, out, space)
    return out[:, 0] if vector else out


def circuit_unitary(circuit: Circuit, space: FockSpace, columns=None) -> np.ndarray:
    """Matrix of the circuit (first gate acts first), optionally only some columns."""
    if circuit.n_modes > space.n_modes:
        raise ValueError(f"circuit uses {circuit.n_modes} modes, space has {space.n_modes}")
    if columns is None:
        start = np.eye(space.dim, dtype=complex)
    else:
        idx = np.atleast_1d(columns)
        start = np.zeros((space.dim, len(idx)), dtype=complex)
        start[idx, np.arange(len(idx))] = 1.0
    return apply_circuit(circuit, start, space)


# -- reference evolutions ----------------------------------------------------

def sparse_generator(local: dict[int, np.ndarray], space: FockSpace) -> sp.csr_matrix:
    d = space.cutoff
    eye = sp.identity(d, dtype=complex, format="csr")
    mats = [sp.csr_matrix(local[m]) if m in local else eye for m in range(space.n_modes)]
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), mats)


def evolve(generator: sp.spmatrix | np.ndarray, angle: float, psi: np.ndarray) -> np.ndarray:
    """exp(i * angle * generator) @ psi without forming the dense exponential."""
    g = sp.csr_matrix(generator)
    return expm_multiply(1j * angle * g, np.asarray(psi, dtype=complex))


# -- spin embedding ------------------------------------------------------------

_UP = {"↑", "u", "U", "0", "+"}
_DOWN = {"↓", "d", "D", "1", "-"}


def fock_index(occupations: list[int], cutoff: int) -> int:
    idx = 0
    for n in occupations:
        if not 0 <= n < cutoff:
            raise ValueError(f"occupation {n} outside cutoff {cutoff}")
        idx = idx * cutoff + n
    return idx


def spin_occupations(bits: str) -> list[int]:
    occ = []
    for ch in bits:
        if ch in _UP:
            occ += [1, 0]
        elif ch in _DOWN:
            occ += [0, 1]
        else:
            raise ValueError(f"unrecognized spin symbol {ch!r}")
    return occ


def embed_spin_state(bits: str, cutoff: int) -> np.ndarray:
    """Fock vector with up -> |1,0> and down -> |0,1> on each site's mode pair."""
    if not bits:
        raise ValueError("empty spin string")
    space = FockSpace(2 * len(bits), cutoff)
    psi = np.zeros(space.dim, dtype=complex)
    psi[fock_index(spin_occupations(bits), cutoff)] = 1.0
    return psi


def spin_subspace_indices(n_sites: int, cutoff: int) -> np.ndarray:
    """Fock indices of the 2**N embedded spin states, in Pauli-oracle order."""
    out = []
    for s in range(2**n_sites):
        bits = format(s, f"0{n_sites}b")
        out.append(fock_index(spin_occupations(bits), cutoff))
    return np.array(out, dtype=int)


def restrict_to_spin_subspace(matrix: np.ndarray, n_sites: int, cutoff: int) -> np.ndarray:
    idx = spin_subspace_indices(n_sites, cutoff)
    return matrix[np.ix_(idx, idx)]
