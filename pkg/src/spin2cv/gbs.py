"""Gaussian-state algebra, GBS outcome probabilities and the quartic-moment estimator.

Two covariance types are kept apart on purpose:

* quadrature-moment matrices Sigma with entries <q_i q_j> of a zero-mean
  Gaussian (the object whose Hafnian is a Wick moment), and
* CovarianceMatrix, the physical state in the ladder basis
  xi = (b_1..b_M, b_1^dag..b_M^dag), sigma_ij = <{xi_i, xi_j^dag}>/2.

The real xxpp covariance V (vacuum V = I/4 since [X, P] = i/2) maps to the
ladder basis by sigma = W V W^dag with W = [[I, iI], [I, -iI]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, prod

import numpy as np

from spin2cv.errors import InputError, UnphysicalStateError
from spin2cv.hafnian import hafnian

PHYSICAL_TOL = 1e-9
MAX_PHOTONS = 8


def _swap(m: int) -> np.ndarray:
    z, i = np.zeros((m, m)), np.eye(m)
    return np.block([[z, i], [i, z]])


def _w(m: int) -> np.ndarray:
    i = np.eye(m)
    return np.block([[i, 1j * i], [i, -1j * i]])


def _omega(m: int) -> np.ndarray:
    z, i = np.zeros((m, m)), np.eye(m)
    return np.block([[z, i], [-i, z]])


def ladder_from_quadrature(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    w = _w(v.shape[0] // 2)
    return w @ v @ w.conj().T


def quadrature_from_ladder(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=complex)
    w_inv = np.linalg.inv(_w(sigma.shape[0] // 2))
    return w_inv @ sigma @ w_inv.conj().T


@dataclass(frozen=True)
class CovarianceMatrix:
    sigma: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InputError(f"covariance must be 2M x 2M, got shape {s.shape}")
        if np.max(np.abs(s - s.conj().T)) > PHYSICAL_TOL * max(1.0, np.max(np.abs(s))):
            raise UnphysicalStateError("covariance is not Hermitian")
        object.__setattr__(self, "sigma", s)
        if not self.is_physical():
            raise UnphysicalStateError("covariance violates the uncertainty relation")

    @property
    def m_modes(self) -> int:
        return self.sigma.shape[0] // 2

    def quadrature(self) -> np.ndarray:
        return quadrature_from_ladder(self.sigma)

    def is_physical(self) -> bool:
        v = self.quadrature()
        if np.max(np.abs(v.imag)) > PHYSICAL_TOL * max(1.0, np.max(np.abs(v))):
            return False
        v = v.real
        bound = v + 0.25j * _omega(self.m_modes)
        return bool(np.min(np.linalg.eigvalsh(bound)) >= -PHYSICAL_TOL)

    def q_matrix(self) -> np.ndarray:
        return self.sigma + np.eye(2 * self.m_modes) / 2


def vacuum_covariance(m: int) -> CovarianceMatrix:
    return CovarianceMatrix(np.eye(2 * m, dtype=complex) / 2)


def covariance_from_symplectic(symplectic: np.ndarray, thermal=None) -> CovarianceMatrix:
    """State S diag(nu, nu) S^T / 4 for xxpp symplectic S and thermal factors nu >= 1."""
    s = np.asarray(symplectic, dtype=float)
    m = s.shape[0] // 2
    nu = np.ones(m) if thermal is None else np.asarray(thermal, dtype=float)
    v = s @ np.diag(np.concatenate([nu, nu]) / 4) @ s.T
    return CovarianceMatrix(ladder_from_quadrature(v))


def squeezing_symplectic(r) -> np.ndarray:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    return np.diag(np.concatenate([np.exp(-r), np.exp(r)]))


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    return np.block([[u.real, -u.imag], [u.imag, u.real]])


def two_mode_squeezed_covariance(r: float) -> CovarianceMatrix:
    """|psi> = sum_n tanh(r)^n / cosh(r) |n, n>."""
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    d = np.array([[0.0, s], [s, 0.0]])
    sigma = np.block([[c * np.eye(2), d], [d, c * np.eye(2)]])
    return CovarianceMatrix(sigma.astype(complex))


def a_from_covariance(cov: CovarianceMatrix) -> np.ndarray:
    m = cov.m_modes
    return _swap(m) @ (np.eye(2 * m) - np.linalg.inv(cov.q_matrix()))


def covariance_from_a(a: np.ndarray) -> CovarianceMatrix:
    """Invert A = X (I - sigma_Q^-1). Raises UnphysicalStateError if no valid state exists."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise InputError(f"A must be 2M x 2M, got shape {a.shape}")
    if np.max(np.abs(a - a.T)) > PHYSICAL_TOL * max(1.0, np.max(np.abs(a))):
        raise UnphysicalStateError("A is not symmetric")
    m = a.shape[0] // 2
    kernel = np.eye(2 * m) - _swap(m) @ a
    if np.linalg.cond(kernel) > 1e12:
        raise UnphysicalStateError("I - X A is singular")
    sigma_q = np.linalg.inv(kernel)
    return CovarianceMatrix(sigma_q - np.eye(2 * m) / 2)


def block_condition(a: np.ndarray, tol: float = 1e-9) -> bool:
    """[A11, A12] = 0 and A12 >= 0.

    Holds for pure states (A12 = 0) but not for general mixed Gaussian states,
    so it is reported as a diagnostic rather than enforced.
    """
    a = np.asarray(a, dtype=complex)
    m = a.shape[0] // 2
    a11, a12 = a[:m, :m], a[:m, m:]
    commutes = np.linalg.norm(a11 @ a12 - a12 @ a11) <= tol
    herm = (a12 + a12.conj().T) / 2
    psd = np.allclose(a12, a12.conj().T, atol=tol) and np.min(np.linalg.eigvalsh(herm)) >= -tol
    return bool(commutes and psd)


def gbs_probability(cov: CovarianceMatrix, pattern, allow_collisions: bool = False) -> float:
    """Pr(pattern) = Haf(A_S) / (prod m_i! sqrt(det sigma_Q)).

    Collision-free patterns are the default path. With allow_collisions the
    rows of A are repeated m_i times.
    """
    m = cov.m_modes
    pattern = [int(x) for x in pattern]
    if len(pattern) != m:
        raise InputError(f"pattern has {len(pattern)} entries for {m} modes")
    if any(x < 0 for x in pattern):
        raise InputError("photon numbers must be non-negative")
    if not allow_collisions and any(x > 1 for x in pattern):
        raise InputError("collision pattern (m_i > 1) needs allow_collisions=True")
    if sum(pattern) > MAX_PHOTONS:
        raise InputError(f"total photon number limited to {MAX_PHOTONS}")
    a = a_from_covariance(cov)
    idx = [i for i, n in enumerate(pattern) for _ in range(n)]
    idx += [i + m for i in idx]
    haf = hafnian(a[np.ix_(idx, idx)])
    det = np.linalg.det(cov.q_matrix()).real
    value = haf / (prod(factorial(n) for n in pattern) * np.sqrt(det))
    return float(np.real(value))


def doubled_embedding(sigma: np.ndarray) -> np.ndarray:
    s = np.asarray(sigma)
    z = np.zeros_like(s)
    return np.block([[s, z], [z, s]])


def wick_moment(sigma_xx: np.ndarray, indices) -> float:
    """<q_i1 q_i2 ... > of a zero-mean Gaussian as the Hafnian of a submatrix."""
    idx = list(indices)
    if len(idx) % 2:
        raise InputError("Wick moment needs an even number of operators")
    s = np.asarray(sigma_xx)
    return float(np.real(hafnian(s[np.ix_(idx, idx)])))


def optical_modes_required(n_sites: int) -> int:
    """Two bosonic modes per site, doubled by the embedding."""
    return 4 * n_sites


@dataclass(frozen=True)
class QuarticEstimate:
    haf_sigma: float
    sqrt_haf_a: float | None
    embedding_physical: bool
    scale: float
    probability: float | None
    postselect_pattern: tuple[int, ...]
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "haf_sigma": self.haf_sigma,
            "sqrt_haf_A": self.sqrt_haf_a,
            "embedding_physical": self.embedding_physical,
            "scale": self.scale,
            "probability": self.probability,
            "postselect_pattern": list(self.postselect_pattern),
            "label": self.label,
        }


def estimate_quartic_moment(sigma: np.ndarray) -> QuarticEstimate:
    """<q1 ... qM> from Pr(1, ..., 1) of the doubled pure-state embedding.

    A = (S/c) (+) (S/c) is the A-matrix of a pure state when ||S/c|| < 1, and
    Haf(A) = Haf(S/c)^2. The post-selected probability therefore gives
    |Haf(S)| = c^(M/2) sqrt(Pr(1..1) sqrt(det sigma_Q)); the sign is not
    observable this way and is reported only through haf_sigma.
    """
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        raise InputError(f"Sigma must be square with even dimension, got {s.shape}")
    if np.max(np.abs(s - s.T)) > 1e-10 * max(1.0, np.max(np.abs(s))):
        raise InputError("Sigma must be symmetric")
    m = s.shape[0]
    if m > MAX_PHOTONS:
        raise InputError(f"at most {MAX_PHOTONS} modes supported")
    haf_s = float(hafnian(s))
    pattern = (1,) * m
    norm = float(np.linalg.norm(s, 2))
    scale = 1.0 if norm < 0.5 else 2.0 * norm
    try:
        cov = covariance_from_a(doubled_embedding(s / scale))
    except UnphysicalStateError:
        return QuarticEstimate(haf_s, None, False, scale, None, pattern,
                               "oracle-only, no physical GBS embedding found")
    pr = gbs_probability(cov, pattern)
    det = np.linalg.det(cov.q_matrix()).real
    sqrt_haf = scale ** (m / 2) * np.sqrt(max(pr, 0.0) * np.sqrt(det))
    return QuarticEstimate(haf_s, float(sqrt_haf), True, scale, pr, pattern, "post-selected")
