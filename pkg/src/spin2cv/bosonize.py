"""Jordan-Schwinger bosonization and the quadrature rewrite.

Site k owns modes 2k (up) and 2k + 1 (down). With Pauli spins,
    sigma^+ -> a_up^dag a_dn,   sigma^z -> n_up - n_dn,
which is exact on the one-boson-per-site subspace. Writing
u = X_up X_dn + P_up P_dn and v = X_up P_dn - P_up X_dn gives sigma^x = 2u
and sigma^y = 2v, so each XY bond becomes -4 (Jx u u' + Jy v v'). Every
surviving four-quadrature pattern then carries -4 g with
g = (C (Jx + Jy) + F (Jx - Jy)) / 2.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from spin2cv.model import SpinModel
from spin2cv.simulate import mode_operators
from spin2cv.terms import LadderFactor, LadderTerm, QuadFactor, QuadratureHamiltonian, QuadratureTerm

# Rows: (q_k_up, q_k_dn, q_l_up, q_l_dn) -> (C, F)
SIGN_TABLE: dict[tuple[str, str, str, str], tuple[int, int]] = {
    ("X", "X", "X", "X"): (+1, +1),
    ("P", "P", "X", "X"): (+1, +1),
    ("X", "X", "P", "P"): (+1, +1),
    ("P", "X", "P", "X"): (+1, -1),
    ("X", "P", "X", "P"): (+1, -1),
    ("X", "P", "P", "X"): (-1, +1),
    ("P", "X", "X", "P"): (-1, +1),
    ("P", "P", "P", "P"): (+1, +1),
}

ZERO_TOL = 1e-14  # relative to the largest collected coefficient


def up(site: int) -> int:
    return 2 * site


def down(site: int) -> int:
    return 2 * site + 1


def sign_table(pattern: tuple[str, str, str, str]) -> tuple[int, int] | None:
    pattern = tuple(pattern)
    if len(pattern) != 4 or any(q not in ("X", "P") for q in pattern):
        raise ValueError(f"pattern must be 4 labels from X/P, got {pattern}")
    return SIGN_TABLE.get(pattern)


def pattern_coupling(c: int, f: int, jx: float, jy: float) -> float:
    return 0.5 * (c * (jx + jy) + f * (jx - jy))


def jordan_schwinger_operators(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S+, S-, Sz) on one site's (up, down) mode pair, each d^2 x d^2."""
    ops = mode_operators(d)
    eye = np.eye(d)
    s_plus = np.kron(ops.adag_matrix, ops.a_matrix)
    s_minus = np.kron(ops.a_matrix, ops.adag_matrix)
    s_z = 0.5 * (np.kron(ops.n_matrix, eye) - np.kron(eye, ops.n_matrix))
    return s_plus, s_minus, s_z


def _flip(site: int, raise_spin: bool) -> tuple[LadderFactor, LadderFactor]:
    if raise_spin:
        return LadderFactor(up(site), "create"), LadderFactor(down(site), "annihilate")
    return LadderFactor(up(site), "annihilate"), LadderFactor(down(site), "create")


def bosonize(model: SpinModel) -> list[LadderTerm]:
    """Ladder-operator Hamiltonian, bonds in (k, l) order then field terms."""
    terms: list[LadderTerm] = []
    for c in model.sorted_couplings():
        k, l = c.k, c.l
        exchange = -(c.jx + c.jy)
        if exchange:
            terms.append(LadderTerm(exchange, _flip(k, True) + _flip(l, False)))
            terms.append(LadderTerm(exchange, _flip(k, False) + _flip(l, True)))
        double_flip = -(c.jx - c.jy)
        if double_flip:
            terms.append(LadderTerm(double_flip, _flip(k, True) + _flip(l, True)))
            terms.append(LadderTerm(double_flip, _flip(k, False) + _flip(l, False)))
        if c.jz:
            for mk, ml in product((up(k), down(k)), (up(l), down(l))):
                same = (mk % 2) == (ml % 2)
                terms.append(
                    LadderTerm(
                        -c.jz if same else c.jz,
                        (LadderFactor(mk, "number"), LadderFactor(ml, "number")),
                    )
                )
    if model.field_b0:
        for k in range(model.n_sites):
            terms.append(LadderTerm(-model.field_b0, (LadderFactor(up(k), "number"),)))
            terms.append(LadderTerm(model.field_b0, (LadderFactor(down(k), "number"),)))
    return terms


# a = X + iP, a^dag = X - iP, n = X^2 + P^2 - 1/2 as (coefficient, quadrature, power)
_SUBSTITUTION = {
    "annihilate": ((1.0, "X", 1), (1j, "P", 1)),
    "create": ((1.0, "X", 1), (-1j, "P", 1)),
    "number": ((1.0, "X", 2), (1.0, "P", 2), (-0.5, None, 0)),
}


def _expand(term: LadderTerm) -> dict[tuple, complex]:
    modes = [f.mode for f in term.factors]
    if len(set(modes)) != len(modes):
        raise ValueError("ladder term repeats a mode; expansion expects one factor per mode")
    out: dict[tuple, complex] = {}
    choices = [_SUBSTITUTION[f.kind] for f in term.factors]
    for combo in product(*choices):
        coef = complex(term.coefficient)
        factors = []
        for f, (c, quad, power) in zip(term.factors, combo):
            coef *= c
            if quad is not None:
                factors.append(QuadFactor(f.mode, quad, power))
        key = tuple(sorted(factors))
        out[key] = out.get(key, 0.0) + coef
    return out


def _sort_key(term: QuadratureTerm):
    shape = term.shape
    if shape == "four_mode":
        rows = list(SIGN_TABLE)
        return (0, bond_of(term), rows.index(term.pattern()), ())
    rank = {"two_mode": 1, "quadratic": 2}[shape]
    return (rank, bond_of(term), term.modes, term.pattern())


def to_quadrature(terms: list[LadderTerm], model: SpinModel) -> QuadratureHamiltonian:
    """Expand ladder terms in quadratures and collect identical monomials.

    Scalars go to constant_offset. Canonical order: four-mode terms by
    (bond, sign-table row), then two-mode terms, then quadratic terms.
    """
    collected: dict[tuple, complex] = {}
    for term in terms:
        if max(term.modes) >= model.n_modes:
            raise ValueError(f"ladder term touches mode {max(term.modes)} beyond {model.n_modes}")
        for key, coef in _expand(term).items():
            collected[key] = collected.get(key, 0.0) + coef
    scale = max((abs(c) for c in collected.values()), default=0.0)
    offset = 0.0
    out = []
    for key, coef in collected.items():
        if abs(coef.imag) > 1e-12 * max(1.0, scale):
            raise ValueError(f"non-Hermitian remainder {coef} on {key}")
        if abs(coef.real) <= ZERO_TOL * scale:
            continue
        if not key:
            offset += coef.real
            continue
        qt = QuadratureTerm(coef.real, key)
        if qt.shape == "other":
            raise ValueError(f"unexpected monomial {key} in expansion")
        if qt.shape == "four_mode" and sign_table(qt.pattern()) is None:
            raise ValueError(f"pattern {qt.pattern()} outside the sign table")
        out.append(qt)
    out.sort(key=_sort_key)
    return QuadratureHamiltonian(model.n_modes, tuple(out), offset)


def bond_of(term: QuadratureTerm) -> tuple[int, ...]:
    """Sites touched by a term, used to group terms for Trotter splitting."""
    return tuple(sorted({m // 2 for m in term.modes}))
