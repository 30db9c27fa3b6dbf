"""First-order Trotter splitting of a quadrature Hamiltonian.

The split follows the Hamiltonian's natural blocks: each four-mode term is
its own factor, all two-mode terms of a bond form one factor (the z-z
coupling) and all quadratic terms of a site form one factor (the field).
The circuit splits those blocks further into single terms, because the gate
decompositions act on one monomial at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from spin2cv.bosonize import bond_of
from spin2cv.circuit import Circuit, decompose_term
from spin2cv.simulate import (
    FockSpace,
    exact_evolution,
    hamiltonian_matrix,
    hermitian_expm,
    spin_subspace_indices,
    term_matrix,
)
from spin2cv.terms import QuadratureHamiltonian


@dataclass(frozen=True)
class TrotterPlan:
    t: float
    steps: int
    term_order: tuple[int, ...]
    gamma: float = 0.0
    cutoff_for_gamma: int | None = None

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not math.isfinite(self.t):
            raise ValueError("evolution time must be finite")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")

    def to_dict(self) -> dict:
        return {"t": self.t, "steps": self.steps, "gamma": self.gamma, "cutoff_for_gamma": self.cutoff_for_gamma}


def error_bound(n_terms: int, t: float, steps: int, gamma: float) -> float:
    """n^2 t^2 gamma^2 / K, the first-order estimate with its constant set to 1."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    return n_terms**2 * t**2 * gamma**2 / steps


def choose_steps(n_terms: int, t: float, gamma: float, eps: float) -> int:
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = max(1, math.ceil(n_terms**2 * t**2 * gamma**2 / eps))
    while k > 1 and error_bound(n_terms, t, k - 1, gamma) <= eps:
        k -= 1
    while error_bound(n_terms, t, k, gamma) > eps:
        k += 1
    return k


def term_groups(h: QuadratureHamiltonian) -> list[tuple[int, ...]]:
    """Indices of h.terms grouped into Trotter factors, in canonical order."""
    groups: dict[tuple, list[int]] = {}
    for i, term in enumerate(h.terms):
        if term.shape == "four_mode":
            key = ("four_mode", i)
        else:
            key = (term.shape, bond_of(term))
        groups.setdefault(key, []).append(i)
    return [tuple(v) for v in groups.values()]


def max_group_norm(h: QuadratureHamiltonian, cutoff: int) -> float:
    """Largest spectral norm over Trotter factors at the given cutoff."""
    space = FockSpace(h.n_modes, cutoff)
    best = 0.0
    for group in term_groups(h):
        m = sum(term_matrix(h.terms[i], space) for i in group)
        best = max(best, float(np.linalg.norm(m, 2)))
    return best


def make_plan(h: QuadratureHamiltonian, t: float, steps: int, gamma_cutoff: int | None = None) -> TrotterPlan:
    gamma = max_group_norm(h, gamma_cutoff) if gamma_cutoff else 0.0
    return TrotterPlan(t, steps, tuple(range(len(h.terms))), gamma, gamma_cutoff)


def build_evolution_circuit(
    h: QuadratureHamiltonian,
    t: float,
    steps: int,
    identity: str = "eight_term",
    gamma_cutoff: int | None = None,
) -> Circuit:
    """Raw circuit for (prod_j exp(i t/K H_j))^K in canonical term order.

    The constant offset contributes a global phase exp(i t offset), recorded
    in metadata rather than emitted as a gate.
    """
    plan = make_plan(h, t, steps, gamma_cutoff)
    dt = t / steps
    gates = []
    for i in plan.term_order:
        gates += decompose_term(h.terms[i], identity, dt).gates
    one_step = Circuit(h.n_modes, tuple(gates), "raw")
    meta = {"trotter": plan.to_dict(), "global_phase": t * h.constant_offset, "identity": identity}
    return Circuit(h.n_modes, one_step.gates * steps, "raw", meta)


def trotter_unitary(h: QuadratureHamiltonian, t: float, steps: int, cutoff: int) -> np.ndarray:
    """Grouped product formula evaluated with exact factor exponentials."""
    space = FockSpace(h.n_modes, cutoff)
    dt = t / steps
    step = np.eye(space.dim, dtype=complex)
    for group in term_groups(h):
        m = sum(term_matrix(h.terms[i], space) for i in group)
        step = hermitian_expm(m, dt) @ step
    phase = np.exp(1j * t * h.constant_offset)
    return phase * np.linalg.matrix_power(step, steps)


def trotter_error(h: QuadratureHamiltonian, t: float, steps: int, cutoff: int, n_sites: int | None = None) -> float:
    """Spectral-norm error of the product formula on the embedded spin states."""
    space = FockSpace(h.n_modes, cutoff)
    exact = exact_evolution(hamiltonian_matrix(h, space), t)
    approx = trotter_unitary(h, t, steps, cutoff)
    diff = approx - exact
    if n_sites is not None:
        diff = diff[:, spin_subspace_indices(n_sites, cutoff)]
    return float(np.linalg.norm(diff, 2))


def fit_loglog_slope(ks, errors) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(ks, float)), np.log(np.asarray(errors, float)), 1)
    return float(slope)
