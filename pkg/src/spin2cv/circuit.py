"""Gate IR, decomposition passes and lowering to the universal CV gate set.

Every gate is exp(i * param * generator) with
    R: X    G: X^2    V: X^3    Q: X^4    Fourier: (pi/2)(X^2 + P^2)
    Cz: X_a X_b    Shift1: P_t X_s    Shift2: P_t X_s^2
and `dagger` negates the exponent. Gate lists are in time order: the first
gate acts first. An operator product A B C is therefore emitted as [C, B, A].

Two conjugation rules drive everything below (with [X, P] = i/2):
    F X F^dag = P, so f(P) = F f(X) F^dag   -> time order [F^dag, f(X), F]
    e^{i th P_t A} X_t e^{-i th P_t A} = X_t + (th / 2) A
so a shift gate with param 2s translates X_t by s * A.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from spin2cv.identities import eight_term_identity, fifteen_term_identity, two_mode_identity
from spin2cv.terms import QuadratureTerm

UNIVERSAL_KINDS = frozenset({"R", "G", "V", "Fourier", "Cz"})
RAW_KINDS = frozenset({"Q", "Shift1", "Shift2"})
GATE_KINDS = UNIVERSAL_KINDS | RAW_KINDS
TWO_MODE_KINDS = frozenset({"Cz", "Shift1", "Shift2"})
IDENTITIES = ("eight_term", "fifteen_term")
LEVELS = ("raw", "universal")


@dataclass(frozen=True)
class Gate:
    kind: str
    modes: tuple[int, ...]
    param: float = 0.0
    dagger: bool = False

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        modes = tuple(int(m) for m in self.modes)
        arity = 2 if self.kind in TWO_MODE_KINDS else 1
        if len(modes) != arity:
            raise ValueError(f"{self.kind} takes {arity} mode(s), got {modes}")
        if arity == 2 and modes[0] == modes[1]:
            raise ValueError(f"{self.kind} needs two distinct modes, got {modes}")
        if min(modes) < 0:
            raise ValueError(f"negative mode id in {modes}")
        if self.kind == "Fourier" and self.param != 0.0:
            raise ValueError("Fourier has no parameter")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "param", float(self.param))
        object.__setattr__(self, "dagger", bool(self.dagger))

    def inverse(self) -> Gate:
        return Gate(self.kind, self.modes, self.param, not self.dagger)


@dataclass(frozen=True)
class Circuit:
    n_modes: int
    gates: tuple[Gate, ...] = ()
    level: str = "raw"
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        if self.level not in LEVELS:
            raise ValueError(f"unknown circuit level {self.level!r}")
        for g in gates:
            if max(g.modes) >= self.n_modes:
                raise ValueError(f"gate {g.kind}{g.modes} outside {self.n_modes} modes")
            if self.level == "universal" and g.kind not in UNIVERSAL_KINDS:
                raise ValueError(f"universal circuit contains non-universal gate {g.kind}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def counts(self) -> Counter:
        return Counter(g.kind for g in self.gates)

    def then(self, other: Circuit) -> Circuit:
        level = "universal" if self.level == other.level == "universal" else "raw"
        return Circuit(max(self.n_modes, other.n_modes), self.gates + other.gates, level)

    def repeated(self, times: int) -> Circuit:
        return Circuit(self.n_modes, self.gates * times, self.level, dict(self.metadata))


def _circuit(gates: list[Gate], n_modes: int | None = None) -> Circuit:
    needed = max((max(g.modes) for g in gates), default=-1) + 1
    n = needed if n_modes is None else max(n_modes, needed)
    level = "universal" if all(g.kind in UNIVERSAL_KINDS for g in gates) else "raw"
    return Circuit(max(n, 1), tuple(gates), level)


def fourier_wrap(modes: Iterable[int], block: list[Gate]) -> list[Gate]:
    """Turn X on `modes` into P for the whole block: [F^dag ..., block, F ...]."""
    modes = sorted(set(modes))
    if not modes or not block:
        return list(block)
    pre = [Gate("Fourier", (m,), dagger=True) for m in modes]
    post = [Gate("Fourier", (m,)) for m in modes]
    return pre + list(block) + post


# -- gate-level decompositions -----------------------------------------------

def decompose_shift1(target: int, source: int, theta: float) -> Circuit:
    """exp(i theta P_t X_s) = F_t Cz(theta) F_t^dag."""
    if target == source:
        raise ValueError("shift gate needs distinct target and source modes")
    return _circuit(fourier_wrap([target], [Gate("Cz", (target, source), theta)]))


def shift2_parameters(theta: float) -> tuple[float, float, float]:
    """(cz_scale, cubic_strength, correction) for a second-order shift by theta.

    The commutator sequence below generates exp(i 3 s^2 g P_t X_s^2) plus a
    cubic remainder on the source, removed by V_s(-(9/4) g s^3). Choosing
    s = (|theta|/3)^(1/4) and g = sign(theta) s^2 keeps all angles small.
    """
    s = (abs(theta) / 3.0) ** 0.25
    gamma = s * s if theta >= 0 else -s * s
    return s, gamma, -2.25 * gamma * s**3


def decompose_shift2(target: int, source: int, theta: float) -> Circuit:
    """exp(i theta P_t X_s^2) from cubic phase gates and controlled phases.

    Operator product W C(-s) W^dag C(-2s) W C(s) W^dag C(2s) V_s(corr)
    with W = exp(i g P_t^3) = F V(g) F^dag.
    """
    if target == source:
        raise ValueError("shift gate needs distinct target and source modes")
    s, gamma, corr = shift2_parameters(theta)

    def w(dagger: bool) -> list[Gate]:
        return fourier_wrap([target], [Gate("V", (target,), gamma, dagger)])

    def cz(a: float) -> Gate:
        return Gate("Cz", (target, source), a)

    gates = [Gate("V", (source,), corr), cz(2 * s)]
    gates += w(True) + [cz(s)] + w(False) + [cz(-2 * s)] + w(True) + [cz(-s)] + w(False)
    return _circuit(gates)


def default_ancilla_scale(alpha: float) -> float:
    return (2 * abs(alpha)) ** 0.5


def decompose_quartic_gate(target: int, ancilla: int, alpha: float, lam: float | None = None) -> Circuit:
    """exp(i alpha X_t^4) via an ancilla, from the exact operator identity

        lam^2 X_t^4 = (X_a + lam X_t^2)^2 - X_a^2 - 2 lam X_a X_t^2.

    The ancilla is returned to its input state for any input. Uses 3 Shift2,
    2 G and 2 Fourier gates.
    """
    if target == ancilla:
        raise ValueError("quartic gate needs an ancilla distinct from the target")
    if alpha == 0:
        g_param = cross = shift = 0.0
    else:
        lam = default_ancilla_scale(alpha) if lam is None else lam
        g_param, cross, shift = alpha / lam**2, 2 * alpha / lam, 2 * lam
    a, t = ancilla, target
    gates = fourier_wrap([a], [Gate("Shift2", (a, t), cross)])
    gates += [
        Gate("G", (a,), -g_param),
        Gate("Shift2", (a, t), shift, dagger=True),
        Gate("G", (a,), g_param),
        Gate("Shift2", (a, t), shift),
    ]
    return _circuit(gates)


# -- term-level decompositions -------------------------------------------------

def shifted_quartic(modes: tuple[int, ...], signs: tuple[int, ...], beta: float) -> list[Gate]:
    """exp(i beta (sum_i signs[i] X_modes[i])^4) as Shift1-conjugated Q."""
    active = [(m, s) for m, s in zip(modes, signs) if s]
    if not active:
        return []
    pivot, pivot_sign = active[0]
    shifts = [Gate("Shift1", (pivot, m), 2.0 * s * pivot_sign) for m, s in active[1:]]
    return [g.inverse() for g in reversed(shifts)] + [Gate("Q", (pivot,), beta)] + shifts


def _quadrature_block(term: QuadratureTerm, identity, angle: float) -> list[Gate]:
    alpha = term.coefficient * angle
    if alpha == 0:
        return []
    block = []
    for weight, signs in identity:
        block += shifted_quartic(term.modes, signs, alpha * weight)
    p_modes = [f.mode for f in term.factors if f.quad == "P"]
    return fourier_wrap(p_modes, block)


def decompose_four_mode(term: QuadratureTerm, identity: str = "eight_term", angle: float = 1.0) -> Circuit:
    """exp(i angle c q1 q2 q3 q4) as shifted quartic gates (raw level)."""
    if term.shape != "four_mode":
        raise ValueError("decompose_four_mode needs 4 distinct modes with power 1")
    if identity == "eight_term":
        ident = eight_term_identity()
    elif identity == "fifteen_term":
        ident = fifteen_term_identity()
    else:
        raise ValueError(f"unknown identity {identity!r}; expected one of {IDENTITIES}")
    return _circuit(_quadrature_block(term, ident, angle))


def decompose_two_mode(term: QuadratureTerm, angle: float = 1.0) -> Circuit:
    """exp(i angle c q_l^2 q_m^2): four quartic gates and four Shift1 gates."""
    if term.shape != "two_mode":
        raise ValueError("decompose_two_mode needs 2 distinct modes with power 2")
    return _circuit(_quadrature_block(term, two_mode_identity(), angle))


def decompose_quadratic(term: QuadratureTerm, angle: float = 1.0) -> Circuit:
    if term.shape != "quadratic":
        raise ValueError("decompose_quadratic needs a single squared quadrature")
    alpha = term.coefficient * angle
    if alpha == 0:
        return _circuit([])
    f = term.factors[0]
    block = [Gate("G", (f.mode,), alpha)]
    return _circuit(fourier_wrap([f.mode] if f.quad == "P" else [], block))


def decompose_term(term: QuadratureTerm, identity: str = "eight_term", angle: float = 1.0) -> Circuit:
    shape = term.shape
    if shape == "four_mode":
        return decompose_four_mode(term, identity, angle)
    if shape == "two_mode":
        return decompose_two_mode(term, angle)
    if shape == "quadratic":
        return decompose_quadratic(term, angle)
    raise ValueError(f"no decomposition for term with factors {term.factors}")


# -- lowering -------------------------------------------------------------------

def _signed(gate: Gate) -> float:
    return -gate.param if gate.dagger else gate.param


def _needs_ancilla(circuit: Circuit) -> bool:
    return any(g.kind == "Q" for g in circuit.gates)


def expand_quartic(circuit: Circuit, ancilla: int | None = None) -> Circuit:
    """Replace each Q gate by its ancilla-assisted shift-gate sequence."""
    if not _needs_ancilla(circuit):
        return circuit
    ancilla = circuit.n_modes if ancilla is None else ancilla
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "Q":
            gates += decompose_quartic_gate(g.modes[0], ancilla, _signed(g)).gates
        else:
            gates.append(g)
    return Circuit(max(circuit.n_modes, ancilla + 1), tuple(gates), "raw", dict(circuit.metadata))


def lower(circuit: Circuit, ancilla: int | None = None, peephole: bool = True) -> Circuit:
    """Lower to {R, G, V, Fourier, Cz}. Q gates share one ancilla mode.

    Lowering a universal circuit returns it unchanged.
    """
    if circuit.level == "universal":
        return circuit
    expanded = expand_quartic(circuit, ancilla)
    gates: list[Gate] = []
    for g in expanded.gates:
        if g.kind == "Shift1":
            gates += decompose_shift1(g.modes[0], g.modes[1], _signed(g)).gates
        elif g.kind == "Shift2":
            gates += decompose_shift2(g.modes[0], g.modes[1], _signed(g)).gates
        else:
            gates.append(g)
    if peephole:
        gates = cancel_fourier_pairs(gates)
    return Circuit(expanded.n_modes, tuple(gates), "universal", dict(circuit.metadata))


def cancel_fourier_pairs(gates: list[Gate]) -> list[Gate]:
    """Drop F F^dag pairs on a mode when nothing between them touches that mode."""
    out: list[Gate | None] = []
    last: dict[int, list[int]] = {}
    for g in gates:
        if g.kind == "Fourier":
            m = g.modes[0]
            stack = last.get(m)
            if stack:
                prev = out[stack[-1]]
                if prev.kind == "Fourier" and prev.dagger != g.dagger:
                    out[stack.pop()] = None
                    continue
        out.append(g)
        for m in g.modes:
            last.setdefault(m, []).append(len(out) - 1)
    return [g for g in out if g is not None]
