"""Operator-term IR shared by the bosonizer, simulator and compiler."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

LADDER_KINDS = ("create", "annihilate", "number")
QUADRATURES = ("X", "P")


class LadderFactor(NamedTuple):
    mode: int
    kind: str


class QuadFactor(NamedTuple):
    mode: int
    quad: str
    power: int


@dataclass(frozen=True)
class LadderTerm:
    coefficient: float
    factors: tuple[LadderFactor, ...]

    def __post_init__(self):
        factors = tuple(LadderFactor(*f) for f in self.factors)
        if not factors:
            raise ValueError("ladder term needs at least one factor")
        for f in factors:
            if f.kind not in LADDER_KINDS:
                raise ValueError(f"unknown ladder factor kind {f.kind!r}")
            if f.mode < 0:
                raise ValueError(f"negative mode id {f.mode}")
        object.__setattr__(self, "factors", factors)

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(sorted({f.mode for f in self.factors}))


@dataclass(frozen=True)
class QuadratureTerm:
    """coefficient * prod(quad_mode ** power), one factor per mode."""

    coefficient: float
    factors: tuple[QuadFactor, ...]

    def __post_init__(self):
        factors = tuple(sorted(QuadFactor(*f) for f in self.factors))
        modes = [f.mode for f in factors]
        if len(set(modes)) != len(modes):
            raise ValueError(f"repeated mode in quadrature term: {modes}")
        if len(modes) > 4:
            raise ValueError("at most 4 distinct modes per term")
        for f in factors:
            if f.quad not in QUADRATURES:
                raise ValueError(f"unknown quadrature {f.quad!r}")
            if f.power not in (1, 2):
                raise ValueError(f"power must be 1 or 2, got {f.power}")
            if f.mode < 0:
                raise ValueError(f"negative mode id {f.mode}")
        if sum(f.power for f in factors) not in (2, 4):
            raise ValueError("total degree must be 2 or 4")
        object.__setattr__(self, "factors", factors)

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(f.mode for f in self.factors)

    @property
    def degree(self) -> int:
        return sum(f.power for f in self.factors)

    @property
    def shape(self) -> str:
        """'four_mode', 'two_mode' or 'quadratic'."""
        powers = tuple(f.power for f in self.factors)
        if powers == (1, 1, 1, 1):
            return "four_mode"
        if powers == (2, 2):
            return "two_mode"
        if powers == (2,):
            return "quadratic"
        return "other"

    def pattern(self) -> tuple[str, ...]:
        return tuple(f.quad for f in self.factors)


@dataclass(frozen=True)
class QuadratureHamiltonian:
    n_modes: int
    terms: tuple[QuadratureTerm, ...]
    constant_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.modes and max(t.modes) >= self.n_modes:
                raise ValueError(f"term mode {max(t.modes)} >= n_modes {self.n_modes}")
