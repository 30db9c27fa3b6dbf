"""Polynomial identities that turn mode products into sums of fourth powers.

Each identity is a list of (weight, signs) pairs meaning
    product = sum(weight * (sum_i signs[i] * x_i) ** 4)
where `signs` has one entry per variable and 0 drops the variable.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

# Sign tuples (s2, s3, s4) in the order the eight fourth powers are usually listed.
EIGHT_TERM_SIGNS = (
    (+1, +1, +1),
    (-1, -1, -1),
    (-1, +1, +1),
    (+1, -1, +1),
    (+1, +1, -1),
    (-1, -1, +1),
    (-1, +1, -1),
    (+1, -1, -1),
)

# Overall signs as commonly printed for the list above; the second entry is wrong.
PRINTED_EIGHT_TERM_WEIGHTS = (+1, +1, -1, -1, -1, +1, +1, +1)


def eight_term_identity() -> list[tuple[float, tuple[int, ...]]]:
    """x1 x2 x3 x4 = (1/192) sum_s (s2 s3 s4) (x1 + s2 x2 + s3 x3 + s4 x4)^4."""
    return [(s2 * s3 * s4 / 192.0, (1, s2, s3, s4)) for s2, s3, s4 in EIGHT_TERM_SIGNS]


def printed_eight_term_identity() -> list[tuple[float, tuple[int, ...]]]:
    return [(w / 192.0, (1, *s)) for w, s in zip(PRINTED_EIGHT_TERM_WEIGHTS, EIGHT_TERM_SIGNS)]


def fifteen_term_identity() -> list[tuple[float, tuple[int, ...]]]:
    """Inclusion-exclusion: 24 x1 x2 x3 x4 = sum_S (-1)^(4-|S|) (sum_{i in S} x_i)^4."""
    out = []
    for size in (4, 3, 2, 1):
        for subset in combinations(range(4), size):
            signs = tuple(1 if i in subset else 0 for i in range(4))
            out.append(((-1) ** (4 - size) / 24.0, signs))
    return out


def two_mode_identity() -> list[tuple[float, tuple[int, ...]]]:
    """x^2 y^2 = (1/12)[(x + y)^4 + (x - y)^4 - 2 x^4 - 2 y^4]."""
    return [
        (1 / 12, (1, 1)),
        (1 / 12, (1, -1)),
        (-1 / 6, (1, 0)),
        (-1 / 6, (0, 1)),
    ]


def evaluate(identity, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(sum(w * np.dot(s, x) ** 4 for w, s in identity))


def printed_two_mode_value(x: float, y: float) -> float:
    """Right-hand side with quadratic corrections -2x^2 - 2y^2, as usually printed."""
    return ((x + y) ** 4 + (x - y) ** 4 - 2 * x**2 - 2 * y**2) / 12


def max_relative_error(lhs, rhs) -> float:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))))


def check_identity(kind: str, n_points: int = 100, seed: int = 0, scale: float = 2.0) -> float:
    """Max relative error of an identity over random points."""
    rng = np.random.default_rng(seed)
    if kind in ("eight_term", "printed_eight_term", "fifteen_term"):
        ident = {
            "eight_term": eight_term_identity,
            "printed_eight_term": printed_eight_term_identity,
            "fifteen_term": fifteen_term_identity,
        }[kind]()
        pts = rng.uniform(-scale, scale, size=(n_points, 4))
        lhs = np.prod(pts, axis=1)
        rhs = [evaluate(ident, p) for p in pts]
    elif kind in ("two_mode", "printed_two_mode"):
        pts = rng.uniform(-scale, scale, size=(n_points, 2))
        lhs = pts[:, 0] ** 2 * pts[:, 1] ** 2
        if kind == "two_mode":
            rhs = [evaluate(two_mode_identity(), p) for p in pts]
        else:
            rhs = [printed_two_mode_value(*p) for p in pts]
    else:
        raise ValueError(f"unknown identity {kind!r}")
    return max_relative_error(lhs, rhs)

