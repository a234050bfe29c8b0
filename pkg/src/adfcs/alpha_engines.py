"""Shadow-channel eigenvalues alpha_{S,d} by four independent routes.

The depth-d channel acts diagonally on Majorana strings,
M_d(gamma_S) = alpha_{S,d} gamma_S with
alpha_{S,d} = E_U |<0| U gamma_S U^dag |0>|^2 over brickwork circuits.

Routes:
  * exact_dp      exact subset-chain dynamic program: each gate replaces
                  the in-gate part of S by a uniform equal-size subset of
                  its four modes; alpha is the final mass on paired sets.
  * monte_carlo   sampled circuits, Wick/Pfaffian evaluation of the kernel.
  * pn_exact      k = 2 only: exact pair-polynomial chain over block
                  coordinates (the per-step transition coefficients are in
                  PAIR_CHAIN rows below).
  * slrw_sum /    k = 2 closed forms from the symmetric lazy random walk:
    slrw_poisson  stay probability 1/2 (3/4 at the ends), step 1/4.
  * k_product     pairwise-product approximation for general even k.
  * fcs_limit     deep-circuit value C(n, k/2) / C(2n, k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .gaussian_sim import vacuum_covariance
from .matchgate import layer_qubit_positions, sample_haar_o4_batch
from .twirl_tensor import LocalTwirlTensor, subset_transitions

__all__ = [
    "AlphaResult",
    "ALPHA_METHODS",
    "alpha_exact_dp",
    "alpha_monte_carlo",
    "alpha_pn_exact",
    "slrw_propagator",
    "slrw_propagator_row",
    "alpha_slrw_sum",
    "alpha_slrw_poisson",
    "majorana_to_y",
    "alpha_k_product",
    "alpha_fcs_limit",
    "slrw_deviation",
    "pair_chain_corrections",
    "pair_partitions",
]

ALPHA_METHODS = frozenset(
    {"exact_dp", "monte_carlo", "pn_exact", "slrw_sum", "slrw_poisson", "k_product", "fcs_limit"}
)

PRUNE_THRESHOLD = 1e-15
_POISSON_TERM_FLOOR = 1e-18
_EXACT_SLACK = 1e-12


@dataclass(frozen=True)
class AlphaResult:
    value: float
    method: str
    stderr: float | None = None
    pruned_mass: float = 0.0

    def __post_init__(self):
        if self.method not in ALPHA_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        v = float(self.value)
        if self.method in ("exact_dp", "pn_exact", "slrw_sum", "fcs_limit"):
            if v < -_EXACT_SLACK or v > 1 + _EXACT_SLACK:
                raise ValueError(f"{self.method} produced alpha = {v} outside [0, 1]")
            v = min(max(v, 0.0), 1.0)
        object.__setattr__(self, "value", v)


def _validate_subset(n: int, s) -> tuple[int, ...]:
    idx = tuple(sorted(int(i) for i in s))
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in {idx}")
    if idx and (idx[0] < 1 or idx[-1] > 2 * n):
        raise ValueError(f"indices must lie in [1, {2 * n}], got {idx}")
    return idx


# ---------------------------------------------------------------------------
# exact subset-chain dynamic program


def _paired_filter(n: int) -> tuple[int, int]:
    even_bits = sum(1 << (2 * j) for j in range(n))
    return even_bits, even_bits << 1


def _is_paired(state: int, even_bits: int) -> bool:
    return (state & even_bits) == ((state >> 1) & even_bits)


def alpha_exact_dp(n: int, d: int, s, tensor: LocalTwirlTensor | None = None) -> AlphaResult:
    """Exact alpha_{S,d} by propagating a sparse subset distribution.

    Parameters
    ----------
    n : even qubit count
    d : circuit depth >= 0
    s : iterable of 1-based Majorana indices, |s| even
    tensor : optional LocalTwirlTensor overriding the per-gate transition
        weights (sensitivity harness hook).

    Masses below 1e-15 are pruned; the discarded total is reported on the
    result as an error bound.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"need even n >= 2, got {n}")
    if d < 0:
        raise ValueError(f"need depth >= 0, got {d}")
    idx = _validate_subset(n, s)
    if len(idx) % 2 != 0:
        raise ValueError(f"|S| must be even, got {len(idx)}")
    table = subset_transitions(tensor)
    state0 = 0
    for i in idx:
        state0 |= 1 << (i - 1)
    dist = {state0: 1.0}
    pruned = 0.0
    for ell in range(1, d + 1):
        for q in layer_qubit_positions(n, ell):
            offset = 2 * (q - 1)
            gate_mask = ~(15 << offset)
            out: dict[int, float] = {}
            for state, p in dist.items():
                loc = (state >> offset) & 15
                rest = state & gate_mask
                for tgt, w in table[loc]:
                    key = rest | (tgt << offset)
                    out[key] = out.get(key, 0.0) + p * w
            dist = out
        if len(dist) > 64:
            dropped = sum(p for p in dist.values() if p < PRUNE_THRESHOLD)
            if dropped > 0.0:
                pruned += dropped
                dist = {st: p for st, p in dist.items() if p >= PRUNE_THRESHOLD}
    even_bits, _ = _paired_filter(n)
    value = sum(p for st, p in dist.items() if _is_paired(st, even_bits))
    return AlphaResult(value, "exact_dp", pruned_mass=max(pruned, 0.0))


# ---------------------------------------------------------------------------
# Monte Carlo over sampled circuits


def _global_q_batch(n: int, d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Global orthogonals of `count` independent brickwork circuits, (count, 2n, 2n)."""
    from .pipeline import _compose_global_q, _gate_schedule

    qubits = _gate_schedule(n, d)
    if qubits.size == 0:
        return np.broadcast_to(np.eye(2 * n), (count, 2 * n, 2 * n)).copy()
    blocks = sample_haar_o4_batch(rng, count * qubits.size).reshape(count, qubits.size, 4, 4)
    return _compose_global_q(blocks, qubits, n)


def _kernel_covariances(q: np.ndarray, m0: np.ndarray) -> np.ndarray:
    """Q^T M0 Q for a batch of Q: the covariance entering <b|U gamma_S U^dag|b>."""
    return np.matmul(np.matmul(q.transpose(0, 2, 1), m0), q)


def alpha_monte_carlo(
    n: int, d: int, s, trials: int, rng: np.random.Generator, chunk: int = 4096
) -> AlphaResult:
    """Sample-mean estimate of alpha_{S,d} with its standard error.

    Each trial draws a fresh circuit and evaluates the squared vacuum
    kernel det((Q^T M_0 Q)|_S), the Pfaffian squared, on the global Q.
    """
    if trials < 1:
        raise ValueError("need trials >= 1")
    idx = np.asarray(_validate_subset(n, s), dtype=int) - 1
    if idx.size % 2 != 0:
        raise ValueError(f"|S| must be even, got {idx.size}")
    if d == 0:
        even_bits, _ = _paired_filter(n)
        state = sum(1 << int(i) for i in idx)
        return AlphaResult(1.0 if _is_paired(state, even_bits) else 0.0, "monte_carlo", 0.0)
    m0 = vacuum_covariance(n).entries
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        q = _global_q_batch(n, d, b, rng)
        cov = _kernel_covariances(q, m0)
        sub = cov[:, idx][:, :, idx]
        vals = np.linalg.det(sub) if idx.size > 0 else np.ones(b)
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        done += b
    mean = total / trials
    var = max(total_sq / trials - mean**2, 0.0)
    stderr = math.sqrt(var / trials) if trials > 1 else 0.0
    return AlphaResult(max(mean, 0.0), "monte_carlo", stderr)


# ---------------------------------------------------------------------------
# exact pair-polynomial chain (k = 2)

# One chain step maps the monomial y_a y_b to L(y_a) L(y_b) plus the small
# corrections below (block coordinates 1..N, boundary rows differ).
_F = Fraction


def pair_chain_corrections(a: int, b: int, N: int) -> list[tuple[int, int, Fraction]]:
    """Monomial correction terms of one chain step applied to y_a y_b (a <= b)."""
    if not (1 <= a <= b <= N):
        raise ValueError(f"need 1 <= a <= b <= {N}")
    if N < 2:
        raise ValueError("chain needs at least two blocks")
    if a == b == 1:
        return [(1, 1, _F(-5, 144)), (2, 2, _F(-5, 144)), (1, 2, _F(5, 72))]
    if a == b == N:
        return [(N, N, _F(-5, 144)), (N - 1, N - 1, _F(-5, 144)), (N - 1, N, _F(5, 72))]
    if a == b:
        return [
            (a - 1, a - 1, _F(-5, 144)),
            (a - 1, a, _F(1, 36)),
            (a - 1, a + 1, _F(1, 24)),
            (a, a, _F(-1, 36)),
            (a, a + 1, _F(1, 36)),
            (a + 1, a + 1, _F(-5, 144)),
        ]
    if b == a + 1:
        return [(a, a, _F(-1, 48)), (b, b, _F(-1, 48)), (a, b, _F(1, 24))]
    return []


def _slrw_matrix(N: int) -> np.ndarray:
    p = np.zeros((N, N))
    for i in range(N):
        p[i, i] = 0.5
        if i > 0:
            p[i, i - 1] = 0.25
        if i < N - 1:
            p[i, i + 1] = 0.25
    p[0, 0] = 0.75
    p[N - 1, N - 1] = 0.75
    return p


def _correction_matrices(N: int) -> list[tuple[int, int, np.ndarray]]:
    out = []
    pairs = [(a, a) for a in range(1, N + 1)] + [(a, a + 1) for a in range(1, N)]
    for a, b in pairs:
        mat = np.zeros((N, N))
        for mu, nu, f in pair_chain_corrections(a, b, N):
            if mu == nu:
                mat[mu - 1, nu - 1] += float(f)
            else:
                mat[mu - 1, nu - 1] += float(f) / 2
                mat[nu - 1, mu - 1] += float(f) / 2
        out.append((a - 1, b - 1, mat))
    return out


def _pair_chain_run(N: int, i: int, j: int, steps: int) -> np.ndarray:
    """Symmetric coefficient matrix of the chain state after `steps` steps
    from y_i y_j; entry (mu, nu) is the ordered-pair coefficient."""
    c = np.zeros((N, N))
    c[i - 1, j - 1] += 0.5
    c[j - 1, i - 1] += 0.5
    p = _slrw_matrix(N)
    corr = _correction_matrices(N)
    for _ in range(steps):
        new = p @ c @ p
        for a0, b0, mat in corr:
            mass = c[a0, b0] if a0 == b0 else 2.0 * c[a0, b0]
            if mass != 0.0:
                new += mass * mat
        c = new
    return c


def alpha_pn_exact(n: int, d: int, i: int, j: int) -> AlphaResult:
    """Exact alpha for a 2-local string with block coordinates (i, j), odd depth.

    Runs floor(d/2) pair-chain steps on the monomial y_i y_j (the first
    layer is absorbed by the block-coordinate encoding) and reads out one
    third of the diagonal coefficient sum.
    """
    if n % 2 != 0 or n < 4:
        raise ValueError(f"need even n >= 4, got {n}")
    if d % 2 != 1 or d < 1:
        raise ValueError(f"odd depth required, got {d}")
    N = n // 2
    if not (1 <= i <= j <= N):
        raise ValueError(f"need 1 <= i <= j <= {N}, got ({i}, {j})")
    c = _pair_chain_run(N, i, j, d // 2)
    return AlphaResult(float(np.trace(c)) / 3.0, "pn_exact")


# ---------------------------------------------------------------------------
# lazy-walk closed forms (k = 2)


def slrw_propagator(N: int, i: int, mu: int, t: int) -> float:
    """P(walker at block mu after t steps | started at block i)."""
    if not (1 <= i <= N and 1 <= mu <= N):
        raise ValueError(f"blocks must lie in [1, {N}]")
    if t < 0:
        raise ValueError("t must be >= 0")
    k = np.arange(1, N)
    terms = (
        np.cos((mu - 0.5) * np.pi * k / N)
        * np.cos((i - 0.5) * np.pi * k / N)
        * np.cos(np.pi * k / (2 * N)) ** (2 * t)
    )
    return float(1.0 / N + (2.0 / N) * terms.sum())


def slrw_propagator_row(N: int, i: int, t: int) -> np.ndarray:
    mu = np.arange(1, N + 1)[:, None]
    k = np.arange(1, N)[None, :]
    terms = (
        np.cos((mu - 0.5) * np.pi * k / N)
        * np.cos((i - 0.5) * np.pi * k / N)
        * np.cos(np.pi * k / (2 * N)) ** (2 * t)
    )
    return 1.0 / N + (2.0 / N) * terms.sum(axis=1)


def alpha_slrw_sum(n: int, d: int, i: int, j: int) -> AlphaResult:
    """Lazy-walk value of alpha for block coordinates (i, j) at odd depth d:
    3 alpha = 1/N + (1/N) sum_k [cos((i-j)k pi/N) + cos((i+j-1)k pi/N)] cos^{4t}(pi k / 2N)."""
    if n % 2 != 0 or n < 2:
        raise ValueError(f"need even n >= 2, got {n}")
    if d % 2 != 1 or d < 1:
        raise ValueError(f"odd depth required, got {d}")
    N = n // 2
    if not (1 <= i <= N and 1 <= j <= N):
        raise ValueError(f"blocks must lie in [1, {N}]")
    t = (d - 1) // 2
    k = np.arange(1, N)
    s = (
        (np.cos((i - j) * np.pi * k / N) + np.cos((i + j - 1) * np.pi * k / N))
        * np.cos(np.pi * k / (2 * N)) ** (4 * t)
    ).sum()
    return AlphaResult((1.0 / N + s / N) / 3.0, "slrw_sum")


def alpha_slrw_poisson(n: int, d: int, i: int, j: int) -> AlphaResult:
    """Gaussian-image (Poisson-resummed) approximation of the lazy-walk alpha."""
    if n % 2 != 0 or n < 2:
        raise ValueError(f"need even n >= 2, got {n}")
    if d % 2 != 1 or d < 3:
        raise ValueError(f"odd depth >= 3 required, got {d}")
    N = n // 2
    if not (1 <= i <= N and 1 <= j <= N):
        raise ValueError(f"blocks must lie in [1, {N}]")
    t = (d - 1) // 2
    a = abs(i - j)
    b = i + j - 1
    total = math.exp(-(a**2) / (2 * t)) + math.exp(-(b**2) / (2 * t))
    k = 1
    while True:
        add = 0.0
        for c in (a, b):
            add += math.exp(-((2 * N * k + c) ** 2) / (2 * t))
            add += math.exp(-((-2 * N * k + c) ** 2) / (2 * t))
        total += add
        if add < _POISSON_TERM_FLOOR:
            break
        k += 1
    return AlphaResult(total / (3.0 * math.sqrt(2.0 * math.pi * t)), "slrw_poisson")


def majorana_to_y(i: int) -> int:
    """Block coordinate of Majorana index i: four modes (two qubits) per block."""
    if i < 1:
        raise ValueError(f"index must be >= 1, got {i}")
    return (i - 1) // 4 + 1


# ---------------------------------------------------------------------------
# pairwise-product approximation and deep-circuit limit


def pair_partitions(items: tuple) -> list[list[tuple]]:
    """All pairwise partitions of an even-length tuple ((k-1)!! of them)."""
    if len(items) == 0:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for pos in range(len(rest)):
        partner = rest[pos]
        remaining = rest[:pos] + rest[pos + 1 :]
        for sub in pair_partitions(remaining):
            out.append([(first, partner)] + sub)
    return out


def alpha_k_product(n: int, d: int, s) -> AlphaResult:
    """Pairwise-product approximation for even |S| = k <= 12:

    alpha' = (3n/2)^{k/2} C(n,k/2)/C(2n,k) / (k-1)!!
             * sum over pairings of prod of lazy-walk pair values.
    """
    idx = _validate_subset(n, s)
    k = len(idx)
    if k % 2 != 0 or k == 0:
        raise ValueError(f"|S| must be even and positive, got {k}")
    if k > 12:
        raise ValueError(f"pairings are enumerated explicitly; |S| <= 12, got {k}")
    dfact = math.prod(range(k - 1, 0, -2))
    pref = (1.5 * n) ** (k // 2) * comb(n, k // 2) / comb(2 * n, k) / dfact
    total = 0.0
    for matching in pair_partitions(idx):
        prod = 1.0
        for a, b in matching:
            prod *= alpha_slrw_sum(n, d, majorana_to_y(a), majorana_to_y(b)).value
        total += prod
    return AlphaResult(pref * total, "k_product")


def alpha_fcs_limit(n: int, k: int) -> AlphaResult:
    """Deep-circuit (full matchgate group) eigenvalue C(n, k/2) / C(2n, k)."""
    if k % 2 != 0 or k < 0 or k > 2 * n:
        raise ValueError(f"need even 0 <= k <= 2n, got k = {k}")
    return AlphaResult(comb(n, k // 2) / comb(2 * n, k), "fcs_limit")


# ---------------------------------------------------------------------------
# deviation of the exact chain from the lazy-walk product


def slrw_deviation(n: int, t: int, i: int, j: int) -> np.ndarray:
    """Coefficient-matrix deviation R(mu, nu) = exact chain - lazy-walk product.

    The rows/columns are block coordinates; the matrix sums to zero, is
    nonpositive on the diagonal and nonnegative off it.
    """
    if n % 2 != 0 or n < 4:
        raise ValueError(f"need even n >= 4, got {n}")
    N = n // 2
    if not (1 <= i <= N and 1 <= j <= N):
        raise ValueError(f"blocks must lie in [1, {N}]")
    lo, hi = min(i, j), max(i, j)
    exact = _pair_chain_run(N, lo, hi, t)
    li = slrw_propagator_row(N, i, t)
    lj = slrw_propagator_row(N, j, t)
    product = 0.5 * (np.outer(li, lj) + np.outer(lj, li))
    return exact - product
