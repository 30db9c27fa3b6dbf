"""Oracle checks run by the `verify` command and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from spin2cv.bosonize import bosonize, to_quadrature
from spin2cv.circuit import (
    GATE_KINDS,
    TWO_MODE_KINDS,
    UNIVERSAL_KINDS,
    decompose_quartic_gate,
    decompose_shift1,
    decompose_shift2,
    lower,
)
from spin2cv.identities import check_identity
from spin2cv.model import SpinModel, spin_hamiltonian_matrix
from spin2cv.serialize import circuit_from_dict, circuit_to_dict, hamiltonian_from_dict
from spin2cv.simulate import (
    FockSpace,
    apply_circuit,
    evolve,
    hamiltonian_matrix,
    ladder_hamiltonian_matrix,
    quadrature_power,
    restrict_to_spin_subspace,
    sparse_generator,
    term_matrix,
)
from spin2cv.terms import LadderFactor, LadderTerm
from spin2cv.trotter import build_evolution_circuit, fit_loglog_slope, trotter_error

REFERENCE_CUTOFF = 60
MONOTONE_SLACK = 1.10


@dataclass
class Check:
    name: str
    passed: bool
    value: float | None = None
    tolerance: float | None = None
    required: bool = True
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "tolerance": self.tolerance,
            "required": self.required,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if c.required and not c.passed]

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": self.failures(),
            "checks": [c.to_dict() for c in self.checks],
            "tables": self.tables,
        }


# -- decomposition unitaries ------------------------------------------------------

_TARGET_GENERATOR = {
    "quartic": {0: ("X", 4)},
    "quartic_lowered": {0: ("X", 4)},
    "shift2": {0: ("P", 1), 1: ("X", 2)},
    "shift1": {0: ("P", 1), 1: ("X", 1)},
}


def decomposition_circuit(kind: str, alpha: float):
    if kind == "quartic":
        return decompose_quartic_gate(0, 1, alpha)
    if kind == "quartic_lowered":
        return lower(decompose_quartic_gate(0, 1, alpha), peephole=False)
    if kind == "shift2":
        return decompose_shift2(0, 1, alpha)
    if kind == "shift1":
        return decompose_shift1(0, 1, alpha)
    raise ValueError(f"unknown decomposition {kind!r}")


def decomposition_error(kind: str, alpha: float, cutoff: int, reference_cutoff: int = REFERENCE_CUTOFF) -> float:
    """Distance between circuit and exp(i alpha generator), both applied to the vacuum.

    The circuit runs at `cutoff`; the reference is evaluated at a much larger
    cutoff so that the number measures the decomposition's own truncation
    error, not the reference's.
    """
    circuit = decomposition_circuit(kind, alpha)
    space = FockSpace(2, cutoff)
    vac = np.zeros(space.dim, dtype=complex)
    vac[0] = 1.0
    out = apply_circuit(circuit, vac, space).reshape(cutoff, cutoff)

    big = FockSpace(2, reference_cutoff)
    local = {m: quadrature_power(q, p, reference_cutoff) for m, (q, p) in _TARGET_GENERATOR[kind].items()}
    ref_vac = np.zeros(big.dim, dtype=complex)
    ref_vac[0] = 1.0
    ref = evolve(sparse_generator(local, big), alpha, ref_vac).reshape(reference_cutoff, reference_cutoff)

    embedded = np.zeros_like(ref)
    embedded[:cutoff, :cutoff] = out
    return float(np.linalg.norm(embedded - ref))


def is_monotone(values, slack: float = MONOTONE_SLACK) -> bool:
    return all(b <= a * slack for a, b in zip(values, values[1:]))


# -- model-level checks ------------------------------------------------------------

def _number_conservation(terms, n_sites: int, space: FockSpace) -> float:
    h = ladder_hamiltonian_matrix(terms, space)
    worst = 0.0
    for k in range(n_sites):
        n_site = term_matrix(LadderTerm(1.0, (LadderFactor(2 * k, "number"),)), space)
        n_site = n_site + term_matrix(LadderTerm(1.0, (LadderFactor(2 * k + 1, "number"),)), space)
        worst = max(worst, float(np.linalg.norm(h @ n_site - n_site @ h)))
    return worst


def verify_model(
    model: SpinModel,
    cutoff: int = 3,
    t: float = 0.2,
    steps=(1, 2, 4, 8),
    tolerance: float = 1e-10,
    identity: str = "eight_term",
    sweep=(4, 6, 8),
) -> VerificationReport:
    report = VerificationReport()
    ladder = bosonize(model)
    quad = to_quadrature(ladder, model)
    space = FockSpace(model.n_modes, cutoff)

    l_mat = ladder_hamiltonian_matrix(ladder, space)
    q_mat = hamiltonian_matrix(quad, space)
    pauli = spin_hamiltonian_matrix(model).entries
    sub_err = float(np.max(np.abs(restrict_to_spin_subspace(l_mat, model.n_sites, cutoff) - pauli)))
    report.add(Check("bosonization_subspace", sub_err <= tolerance, sub_err, tolerance))
    eq_err = float(np.max(np.abs(l_mat - q_mat)))
    report.add(Check("quadrature_equivalence", eq_err <= tolerance, eq_err, tolerance))
    herm = float(np.max(np.abs(q_mat - q_mat.conj().T)))
    report.add(Check("hermiticity", herm <= tolerance, herm, tolerance))
    nc = _number_conservation(ladder, model.n_sites, space)
    report.add(Check("number_conservation", nc <= tolerance, nc, tolerance))

    errors = [trotter_error(quad, t, k, cutoff, model.n_sites) for k in steps]
    report.tables["trotter"] = {"cutoff": cutoff, "t": t, "steps": list(steps), "error": errors}
    if max(errors) <= 1e-9:
        report.add(Check("trotter_first_order", True, max(errors), 1e-9, detail="commuting factors"))
    else:
        slope = fit_loglog_slope(steps, errors)
        report.add(Check("trotter_first_order", abs(slope + 1) <= 0.2, slope, 0.2, detail="log-log slope"))
    mono = all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    report.add(Check("trotter_monotone", mono, None, None))

    for name, required in (
        ("eight_term", True),
        ("printed_eight_term", False),
        ("fifteen_term", True),
        ("two_mode", True),
        ("printed_two_mode", False),
    ):
        err = check_identity(name)
        report.add(Check(f"identity_{name}", err <= 1e-9, err, 1e-9, required=required))

    # shift2 at 3 * 0.1^2, i.e. the second-order shift produced by a 0.1 cubic strength
    for kind, alpha in (("shift2", 0.03), ("quartic", 0.05)):
        errs = [decomposition_error(kind, alpha, d) for d in sweep]
        report.tables[f"{kind}_sweep"] = {"alpha": alpha, "cutoff": list(sweep), "error": errs}
        report.add(Check(f"{kind}_cutoff_sweep", is_monotone(errs), errs[-1], None, detail="monotone in cutoff"))

    circuit = lower(build_evolution_circuit(quad, t, 1, identity))
    ok = all(g.kind in UNIVERSAL_KINDS for g in circuit.gates)
    report.add(Check("lowered_universal", ok, None, None))
    return report


# -- circuit documents ----------------------------------------------------------------

def verify_circuit_document(doc: dict, tolerance: float = 1e-12) -> VerificationReport:
    """Structural checks on a circuit file, plus a recompile when the source is embedded."""
    report = VerificationReport()
    gates = doc.get("gates") if isinstance(doc, dict) else None
    if not isinstance(gates, list):
        report.add(Check("document_structure", False, detail="missing 'gates' array"))
        return report
    n_modes = doc.get("modes")
    level = doc.get("level")

    bad_kind = [i for i, g in enumerate(gates) if g.get("kind") not in GATE_KINDS | {"FourierDag"}]
    report.add(Check("known_gate_kinds", not bad_kind, len(bad_kind), 0, detail=f"gates {bad_kind[:5]}"))
    if level == "universal":
        non_univ = [i for i, g in enumerate(gates) if g.get("kind") not in UNIVERSAL_KINDS | {"FourierDag"}]
        report.add(Check("universal_kinds", not non_univ, len(non_univ), 0, detail=f"gates {non_univ[:5]}"))

    def arity_ok(g) -> bool:
        want = 2 if g.get("kind") in TWO_MODE_KINDS else 1
        modes = g.get("modes", [])
        return isinstance(modes, list) and len(modes) == want and len(set(modes)) == want

    bad_arity = [i for i, g in enumerate(gates) if not arity_ok(g)]
    report.add(Check("gate_arity", not bad_arity, len(bad_arity), 0, detail=f"gates {bad_arity[:5]}"))
    out_of_range = [
        i for i, g in enumerate(gates)
        if not isinstance(n_modes, int) or any(not isinstance(m, int) or not 0 <= m < n_modes for m in g.get("modes", []))
    ]
    report.add(Check("mode_bounds", not out_of_range, len(out_of_range), 0, detail=f"gates {out_of_range[:5]}"))

    def param_ok(g) -> bool:
        p = g.get("param", 0.0)
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not np.isfinite(p):
            return False
        return p == 0 or g.get("kind") not in ("Fourier", "FourierDag")

    bad_param = [i for i, g in enumerate(gates) if not param_ok(g)]
    report.add(Check("gate_parameters", not bad_param, len(bad_param), 0, detail=f"gates {bad_param[:5]}"))
    if not report.passed:
        return report

    if "hamiltonian" in doc and "trotter" in doc:
        h = hamiltonian_from_dict(doc["hamiltonian"])
        plan = doc["trotter"]
        raw = build_evolution_circuit(h, plan["t"], plan["steps"], doc.get("identity", "eight_term"))
        rebuilt = circuit_to_dict(lower(raw) if level == "universal" else raw)["gates"]
        given = circuit_to_dict(circuit_from_dict(doc))["gates"]
        mismatch = len(rebuilt) != len(given)
        worst = 0.0
        if not mismatch:
            for a, b in zip(rebuilt, given):
                if (a["kind"], a["modes"], a["dagger"]) != (b["kind"], b["modes"], b["dagger"]):
                    mismatch = True
                    break
                worst = max(worst, abs(a["param"] - b["param"]))
        ok = not mismatch and worst <= tolerance
        report.add(Check("recompile_match", ok, worst, tolerance,
                         detail="gate sequence differs" if mismatch else ""))
    return report
