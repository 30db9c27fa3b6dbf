"""Command-line front end.

    spin2cv <compile|count|verify|gbs> --input FILE [flags]

Documents go to --output (or stdout); human-readable summaries go to stderr.
Exit codes: 0 success, 2 input error, 3 resource guard, 4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from spin2cv.bosonize import bosonize, to_quadrature
from spin2cv.circuit import IDENTITIES, lower
from spin2cv.errors import InputError, Spin2CVError, VerificationError
from spin2cv.gbs import CovarianceMatrix, estimate_quartic_moment, gbs_probability
from spin2cv.model import SpinModel, model_from_dict, model_to_dict
from spin2cv.resources import count_resources
from spin2cv.serialize import circuit_to_dict, dumps, hamiltonian_to_dict, load_json, matrix_from_doc
from spin2cv.trotter import build_evolution_circuit, error_bound, max_group_norm, term_groups
from spin2cv.verify import verify_circuit_document, verify_model

COMMANDS = ("compile", "count", "verify", "gbs")
DEFAULT_TIME = 0.2  # verify: short enough for the Trotter error to be in its 1/K regime
GAMMA_MAX_DIM = 4096  # dense spectral norms beyond this are skipped in `count`


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path
    output_path: Path | None = None
    t: float = 1.0
    steps: int = 1
    cutoff: int = 4
    identity: str = "eight_term"
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not math.isfinite(self.t):
            raise InputError("--time must be finite")
        if self.steps < 1:
            raise InputError("--steps must be >= 1")
        if self.cutoff < 2:
            raise InputError("--cutoff must be >= 2")
        if self.identity not in IDENTITIES:
            raise InputError(f"--identity must be one of {IDENTITIES}")
        if not self.tolerance > 0:
            raise InputError("--tolerance must be positive")


def _load_model(path: Path) -> SpinModel:
    return model_from_dict(load_json(path))


def _emit(doc: dict, config: RunConfig) -> None:
    text = dumps(doc)
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        config.output_path.write_text(text, encoding="utf-8")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_compile(config: RunConfig) -> int:
    model = _load_model(config.input_path)
    h = to_quadrature(bosonize(model), model)
    raw = build_evolution_circuit(h, config.t, config.steps, config.identity)
    circuit = lower(raw)
    doc = circuit_to_dict(circuit)
    doc["hamiltonian"] = hamiltonian_to_dict(h)
    doc["model"] = model_to_dict(model)
    _emit(doc, config)
    _log(f"compiled {len(h.terms)} terms, K={config.steps}: {len(circuit)} universal gates on {circuit.n_modes} modes")
    return 0


def cmd_count(config: RunConfig) -> int:
    model = _load_model(config.input_path)
    h = to_quadrature(bosonize(model), model)
    one_step = build_evolution_circuit(h, config.t, 1, config.identity)
    report = count_resources(one_step, config.steps)
    doc = report.to_flat()
    doc["identity"] = config.identity
    doc["terms"] = len(h.terms)
    doc["trotter_factors"] = len(term_groups(h))
    if config.cutoff**h.n_modes <= GAMMA_MAX_DIM:
        gamma = max_group_norm(h, config.cutoff)
        doc["gamma"] = gamma
        doc["cutoff_for_gamma"] = config.cutoff
        doc["error_bound"] = error_bound(len(term_groups(h)), config.t, config.steps, gamma)
    _emit(doc, config)
    for level in ("raw", "shift", "universal"):
        counts = {k: v for k, v in report.counts[level].items() if v}
        _log(f"{level:>9}: {counts}")
    return 0


def cmd_verify(config: RunConfig) -> int:
    doc = load_json(config.input_path)
    if isinstance(doc, dict) and "gates" in doc:
        report = verify_circuit_document(doc, tolerance=config.tolerance)
    else:
        model = model_from_dict(doc)
        report = verify_model(model, cutoff=config.cutoff, t=config.t, tolerance=config.tolerance,
                              identity=config.identity)
    _emit(report.to_dict(), config)
    for c in report.checks:
        status = "PASS" if c.passed else ("FAIL" if c.required else "info")
        _log(f"{status:>4}  {c.name}  value={c.value}")
    if "trotter" in report.tables:
        tab = report.tables["trotter"]
        for k, e in zip(tab["steps"], tab["error"]):
            _log(f"  K={k:<3d} trotter error {e:.3e}")
    if not report.passed:
        raise VerificationError(f"failed invariants: {', '.join(report.failures())}")
    return 0


def cmd_gbs(config: RunConfig) -> int:
    basis, mat = matrix_from_doc(load_json(config.input_path))
    if basis == "quadrature":
        if np.max(np.abs(mat.imag)) > 0:
            raise InputError("quadrature-moment matrix must be real")
        est = estimate_quartic_moment(mat.real)
        doc = est.to_dict()
        _log(f"Haf(Sigma) = {est.haf_sigma:.12g}, sqrt(Haf(A)) = {est.sqrt_haf_a}, {est.label}")
    else:
        cov = CovarianceMatrix(mat)
        m = cov.m_modes
        patterns = [tuple(int(b) for b in format(i, f"0{m}b")) for i in range(2**m)] if m <= 8 else []
        doc = {
            "modes": m,
            "probabilities": [{"pattern": list(p), "probability": gbs_probability(cov, p)} for p in patterns],
        }
        _log(f"collision-free mass: {sum(e['probability'] for e in doc['probabilities']):.6f}")
    _emit(doc, config)
    return 0


_DISPATCH = {"compile": cmd_compile, "count": cmd_count, "verify": cmd_verify, "gbs": cmd_gbs}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spin2cv", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, type=Path, help="input document (JSON)")
    parser.add_argument("--output", type=Path, default=None, help="output file (default: stdout)")
    parser.add_argument("--time", type=float, default=None,
                        help=f"evolution time t (default {DEFAULT_TIME} for verify, 1.0 otherwise)")
    parser.add_argument("--steps", type=int, default=1, help="Trotter steps K")
    parser.add_argument("--cutoff", type=int, default=4, help="Fock cutoff d for numerical checks")
    parser.add_argument("--identity", choices=IDENTITIES, default="eight_term")
    parser.add_argument("--tolerance", type=float, default=1e-10)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        config = RunConfig(
            command=args.command,
            input_path=args.input,
            output_path=args.output,
            t=args.time if args.time is not None else (DEFAULT_TIME if args.command == "verify" else 1.0),
            steps=args.steps,
            cutoff=args.cutoff,
            identity=args.identity,
            tolerance=args.tolerance,
        )
        return _DISPATCH[config.command](config)
    except Spin2CVError as exc:
        _log(f"error: {exc}")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
