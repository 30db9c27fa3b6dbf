"""Spin-lattice to continuous-variable compiler, resource counter and verifier."""

from spin2cv.bosonize import bosonize, sign_table, to_quadrature
from spin2cv.circuit import Circuit, Gate, lower
from spin2cv.model import CouplingEntry, SpinModel, parse_spin_model, spin_hamiltonian_matrix
from spin2cv.resources import ResourceReport, count_resources
from spin2cv.trotter import build_evolution_circuit

__all__ = [
    "Circuit",
    "CouplingEntry",
    "Gate",
    "ResourceReport",
    "SpinModel",
    "bosonize",
    "build_evolution_circuit",
    "count_resources",
    "lower",
    "parse_spin_model",
    "sign_table",
    "spin_hamiltonian_matrix",
    "to_quadrature",
]

__version__ = "0.1.0"
