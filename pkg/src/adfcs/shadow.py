"""Shadow estimator: collect (circuit, outcome) samples and invert the
channel with the appropriate alpha eigenvalues.

A sample stores the circuit's global orthogonal Q and the measured
bitstring b.  The single-shot estimate of tr(rho gamma_S) is
(1/alpha) <b| U gamma_S U^dag |b>, evaluated as a Pfaffian of the
conditioned covariance Q^T M_b Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dense_sim import StateVector, apply_circuit, sample_outcome
from .gaussian_sim import (
    CovarianceMatrix,
    basis_covariance,
    evolve,
    gaussian_expectation,
    sample_outcome_gaussian,
)
from .majorana import FermionObservable, MajoranaString, is_hermitian
from .matchgate import circuit_to_global_q, sample_brickwork

__all__ = [
    "ShadowSample",
    "EstimateReport",
    "collect_samples",
    "single_shot_estimate",
    "estimate_majorana",
    "estimate_observable",
]

_IM_RESIDUAL_SLACK = 1e-9


@dataclass(frozen=True)
class ShadowSample:
    """One measurement primitive: global Q of the sampled circuit plus outcome bits."""

    global_q: np.ndarray
    outcome: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.global_q, dtype=float)
        b = np.asarray(self.outcome, dtype=np.uint8)
        if q.shape != (2 * b.size, 2 * b.size):
            raise ValueError(f"Q shape {q.shape} inconsistent with {b.size} outcome bits")
        object.__setattr__(self, "global_q", q)
        object.__setattr__(self, "outcome", b)

    @property
    def n(self) -> int:
        return self.outcome.size


@dataclass(frozen=True)
class EstimateReport:
    mean: complex
    empirical_variance: float
    shots: int
    alpha_used: float
    method: str = "mean"

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("need shots >= 1")
        if not self.alpha_used > 0:
            raise ValueError("alpha_used must be positive")


def collect_samples(backend_state, n: int, d: int, shots: int, rng: np.random.Generator):
    """Draw `shots` independent shadow samples from a dense or Gaussian state."""
    if shots < 1:
        raise ValueError("need shots >= 1")
    dense = isinstance(backend_state, StateVector)
    if dense:
        if backend_state.n != n:
            raise ValueError(f"state has n = {backend_state.n}, requested n = {n}")
    elif isinstance(backend_state, CovarianceMatrix):
        if backend_state.n != n:
            raise ValueError(f"covariance has n = {backend_state.n}, requested n = {n}")
    else:
        raise TypeError(f"unsupported backend state {type(backend_state).__name__}")
    out = []
    for _ in range(shots):
        circuit = sample_brickwork(n, d, rng)
        q = circuit_to_global_q(circuit)
        if dense:
            rotated = apply_circuit(backend_state, circuit)
            b = sample_outcome(rotated, rng)
        else:
            rotated = evolve(backend_state, q)
            b = sample_outcome_gaussian(rotated, rng)
        out.append(ShadowSample(q.entries, b))
    return out


def single_shot_estimate(sample: ShadowSample, s: MajoranaString, alpha: float) -> complex:
    """(1/alpha) <b| U gamma_S U^dag |b>, the unbiased one-sample estimate."""
    if not alpha > 0:
        raise ValueError(
            f"alpha = {alpha}: gamma_{s.indices} is unestimable at this depth"
        )
    if s.k % 2 != 0:
        raise ValueError(f"even |S| required, got {s.k}")
    cov = evolve(basis_covariance(sample.outcome), sample.global_q.T)
    return gaussian_expectation(cov, s) / alpha


def _mean_and_variance(values: np.ndarray) -> tuple[complex, float]:
    mean = complex(values.mean())
    var = float(np.mean(np.abs(values - mean) ** 2))
    return mean, var


def estimate_majorana(
    samples: Sequence[ShadowSample],
    s: MajoranaString,
    alpha: float,
    median_batches: int | None = None,
) -> EstimateReport:
    """Aggregate single-shot estimates: plain mean by default, optional
    median-of-means with the given batch count."""
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    vals = np.array([single_shot_estimate(smp, s, alpha) for smp in samples])
    mean, var = _mean_and_variance(vals)
    method = "mean"
    if median_batches is not None:
        if not (1 <= median_batches <= len(vals)):
            raise ValueError("median_batches must be in [1, shots]")
        parts = np.array_split(vals, median_batches)
        bm = np.array([p.mean() for p in parts])
        mean = complex(np.median(bm.real) + 1j * np.median(bm.imag))
        method = f"median_of_means[{median_batches}]"
    return EstimateReport(mean, var, len(vals), alpha, method)


def estimate_observable(
    samples: Sequence[ShadowSample],
    h: FermionObservable,
    alpha_table: Mapping[tuple, float],
) -> EstimateReport:
    """Estimate tr(rho H) reusing the same samples for every term of H.

    alpha_table maps each term's index tuple to its channel eigenvalue;
    a missing entry or alpha <= 0 marks the term unestimable.
    """
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    if not h.terms:
        raise ValueError("observable has no terms")
    alphas = []
    for t in h.terms:
        if t.indices not in alpha_table:
            raise KeyError(f"alpha_table has no entry for {t.indices}")
        a = float(alpha_table[t.indices])
        if not a > 0:
            raise ValueError(f"alpha = {a}: term gamma_{t.indices} is unestimable")
        alphas.append(a)
    totals = np.zeros(len(samples), dtype=complex)
    for t, a in zip(h.terms, alphas):
        totals += np.array([single_shot_estimate(smp, t, a) for smp in samples])
    mean, var = _mean_and_variance(totals)
    if is_hermitian(h):
        budget = 1e-6 * sum(abs(t.coefficient) for t in h.terms) + _IM_RESIDUAL_SLACK
        if abs(mean.imag) > budget:
            raise FloatingPointError(
                f"imaginary residual {mean.imag:.3e} exceeds {budget:.3e} for Hermitian input"
            )
    return EstimateReport(mean, var, len(samples), min(alphas), "mean")
