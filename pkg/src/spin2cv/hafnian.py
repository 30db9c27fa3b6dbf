"""Hafnians by perfect-matching enumeration and by the power-trace formula."""

from __future__ import annotations

from itertools import combinations

import numpy as np

MAX_ENUM_PAIRS = 8
SYMMETRY_TOL = 1e-10


def _check(mat: np.ndarray) -> np.ndarray:
    a = np.asarray(mat)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"hafnian needs a square matrix, got shape {a.shape}")
    if a.shape[0] % 2:
        raise ValueError(f"hafnian needs an even dimension, got {a.shape[0]}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
        raise ValueError("hafnian needs a symmetric matrix")
    return a


def perfect_matchings(n: int):
    """Yield every perfect matching of range(n) as a tuple of pairs."""
    if n == 0:
        yield ()
        return
    rest = list(range(1, n))
    for j in rest:
        others = [k for k in rest if k != j]
        for sub in perfect_matchings(len(others)):
            yield ((0, j),) + tuple((others[a], others[b]) for a, b in sub)


def _haf_recursive(a: np.ndarray, idx: tuple[int, ...]):
    if not idx:
        return 1.0
    first, rest = idx[0], idx[1:]
    total = 0.0
    for pos, j in enumerate(rest):
        if a[first, j] != 0:
            total += a[first, j] * _haf_recursive(a, rest[:pos] + rest[pos + 1 :])
    return total


def hafnian(mat) -> complex:
    """Sum over perfect matchings of the product of paired entries."""
    a = _check(mat)
    n = a.shape[0]
    if n // 2 > MAX_ENUM_PAIRS:
        raise ValueError(f"enumeration limited to {2 * MAX_ENUM_PAIRS}x{2 * MAX_ENUM_PAIRS}")
    if n == 0:
        return 1.0
    return _haf_recursive(a, tuple(range(n)))


def hafnian_power_trace(mat) -> complex:
    """Power-trace (inclusion-exclusion) formula, O(n^3 2^(n/2)).

    haf(A) = sum_Z (-1)^(n - |Z|) [x^n] exp(sum_k tr((X A)_Z^k) x^k / (2k)),
    summing over subsets Z of the n index pairs (2i, 2i + 1).
    """
    a = np.asarray(_check(mat), dtype=complex)
    size = a.shape[0]
    n = size // 2
    if n == 0:
        return 1.0
    total = 0.0
    for r in range(1, n + 1):
        for subset in combinations(range(n), r):
            idx = [i for p in subset for i in (2 * p, 2 * p + 1)]
            sub = a[np.ix_(idx, idx)]
            swapped = sub.reshape(r, 2, 2 * r)[:, ::-1, :].reshape(2 * r, 2 * r)
            eig = np.linalg.eigvals(swapped)
            traces = [np.sum(eig**k) / (2 * k) for k in range(1, n + 1)]
            coeffs = [1.0 + 0j]
            for m in range(1, n + 1):
                coeffs.append(sum(k * traces[k - 1] * coeffs[m - k] for k in range(1, m + 1)) / m)
            total += (-1) ** (n - r) * coeffs[n]
    return total
