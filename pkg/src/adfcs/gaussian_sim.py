"""Free-fermion backend: covariance matrices, Pfaffians, Wick expectations,
and sequential computational-basis sampling.

Convention: M_{mu nu} = -i tr(rho gamma_mu gamma_nu) for mu != nu, zero on
the diagonal, so a basis state |b> has M_{2j-1, 2j} = (-1)^{b_j} and the
Wick value of an even string is i^{|S|/2} Pf(M restricted to S).  The
evolve direction (Q M Q^T, the covariance of U rho U^dag) and the Pfaffian
phase are pinned together against the dense backend by the convention-lock
test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .majorana import MajoranaString
from .matchgate import GlobalOrthogonal

__all__ = [
    "CovarianceMatrix",
    "basis_covariance",
    "vacuum_covariance",
    "evolve",
    "pfaffian",
    "gaussian_expectation",
    "sample_outcome_gaussian",
]

_PROB_EPS = 1e-8


@dataclass(frozen=True)
class CovarianceMatrix:
    n: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"need a {2 * self.n}x{2 * self.n} matrix, got {m.shape}")
        if np.max(np.abs(m + m.T)) > 1e-10:
            raise ValueError("covariance matrix must be antisymmetric")
        object.__setattr__(self, "entries", m)

    def is_valid_state(self, tol: float = 1e-8) -> bool:
        """Physicality: eigenvalues of iM lie in [-1, 1]."""
        sv = np.linalg.svd(self.entries, compute_uv=False)
        return bool(sv.max(initial=0.0) <= 1 + tol)


def basis_covariance(b) -> CovarianceMatrix:
    """Covariance of |b><b|: 2x2 blocks with M_{2j-1,2j} = (-1)^{b_j}."""
    bits = np.asarray(b, dtype=int)
    n = bits.size
    m = np.zeros((2 * n, 2 * n))
    signs = 1.0 - 2.0 * bits
    m[2 * np.arange(n), 2 * np.arange(n) + 1] = signs
    m[2 * np.arange(n) + 1, 2 * np.arange(n)] = -signs
    return CovarianceMatrix(n, m)


def vacuum_covariance(n: int) -> CovarianceMatrix:
    return basis_covariance(np.zeros(n, dtype=int))


def evolve(m: CovarianceMatrix, q: GlobalOrthogonal | np.ndarray) -> CovarianceMatrix:
    """Covariance of U_q rho U_q^dag given the covariance of rho.

    q follows the convention U^dag gamma_mu U = sum Q_{mu nu} gamma_nu, so
    the update is M -> Q M Q^T.
    """
    qm = q.entries if isinstance(q, GlobalOrthogonal) else np.asarray(q, dtype=float)
    if qm.shape != m.entries.shape:
        raise ValueError(f"dimension mismatch: Q is {qm.shape}, M is {m.entries.shape}")
    out = qm @ m.entries @ qm.T
    out = 0.5 * (out - out.T)  # re-antisymmetrize float error
    return CovarianceMatrix(m.n, out)


def pfaffian(a: np.ndarray) -> float:
    """Pfaffian of an even-dimensional real antisymmetric matrix.

    Skew-symmetric Gaussian elimination (Parlett-Reid style) with partial
    pivoting; closed forms for dimension <= 4 since the estimator calls
    this once per shot per observable.
    """
    m = np.asarray(a, dtype=float)
    d = m.shape[0]
    if m.shape != (d, d):
        raise ValueError(f"matrix must be square, got {m.shape}")
    if d % 2 != 0:
        raise ValueError(f"Pfaffian needs even dimension, got {d}")
    scale = np.max(np.abs(m), initial=0.0)
    if np.max(np.abs(m + m.T), initial=0.0) > 1e-8 * max(scale, 1.0):
        raise ValueError("matrix is not antisymmetric")
    if d == 0:
        return 1.0
    if d == 2:
        return float(m[0, 1])
    if d == 4:
        return float(m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2])
    m = m.copy()
    pf = 1.0
    for k in range(0, d - 2, 2):
        col = np.abs(m[k + 1 :, k])
        p = k + 1 + int(np.argmax(col))
        if m[p, k] == 0.0:
            return 0.0
        if p != k + 1:
            m[[k + 1, p], :] = m[[p, k + 1], :]
            m[:, [k + 1, p]] = m[:, [p, k + 1]]
            pf = -pf
        pivot = m[k, k + 1]
        pf *= pivot
        tail = slice(k + 2, d)
        tau = m[k, tail] / pivot
        row = m[k + 1, tail]
        m[tail, tail] = m[tail, tail] - np.outer(tau, row) + np.outer(row, tau)
    return float(pf * m[d - 2, d - 1])


def gaussian_expectation(m: CovarianceMatrix, s: MajoranaString) -> complex:
    """Wick expectation of coefficient * gamma_S in the Gaussian state m."""
    if s.n != m.n:
        raise ValueError(f"string has n = {s.n}, state has n = {m.n}")
    k = s.k
    if k % 2 != 0:
        raise ValueError(f"even |S| required, got {k}")
    if k == 0:
        return s.coefficient
    idx = np.asarray(s.indices, dtype=int) - 1
    sub = m.entries[np.ix_(idx, idx)]
    return s.coefficient * (1j ** (k // 2)) * pfaffian(sub)


def sample_outcome_gaussian(m: CovarianceMatrix, rng: np.random.Generator) -> np.ndarray:
    """Computational-basis sample from a Gaussian state.

    Bits are drawn left to right with p(b_j = 1 | earlier bits) =
    (1 - M'_{2j-1,2j}) / 2, conditioning via rank-2 Schur-complement
    updates, O(n^2) per bit.
    """
    n = m.n
    work = m.entries.copy()
    bits = np.zeros(n, dtype=np.uint8)
    for j in range(n):
        a, b = 2 * j, 2 * j + 1
        p1 = 0.5 * (1.0 - work[a, b])
        if p1 < -_PROB_EPS or p1 > 1.0 + _PROB_EPS:
            raise FloatingPointError(
                f"conditional probability {p1} for bit {j + 1} outside [0, 1]"
            )
        p1 = min(max(p1, 0.0), 1.0)
        bit = 1 if rng.random() < p1 else 0
        bits[j] = bit
        if j == n - 1:
            break
        s = 1.0 if bit else -1.0
        denom = 1.0 - s * work[a, b]
        rest = slice(b + 1, 2 * n)
        ca = work[rest, a]
        cb = work[rest, b]
        upd = (s / denom) * (np.outer(ca, cb) - np.outer(cb, ca))
        work[rest, rest] += upd
    return bits
