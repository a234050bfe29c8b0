"""Experiment drivers: alpha curves, error-vs-shots sweeps, and the Kitaev
chain benchmark, all emitting deterministic CSV/JSON artifacts.

Repetitions are independent tasks keyed by (seed, purpose, indices), so a
run is byte-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .alpha_engines import (
    alpha_exact_dp,
    alpha_fcs_limit,
    alpha_k_product,
    alpha_slrw_sum,
    majorana_to_y,
)
from .config import ExperimentConfig
from .dense_sim import StateVector, expectation, random_state
from .majorana import (
    MajoranaString,
    interaction_distance,
    kitaev_chain,
    observable_interaction_distance,
)
from .pipeline import kernel_batch, sample_shadow_batch
from .rng_streams import stream

__all__ = [
    "run_alpha_curves",
    "run_error_sweep",
    "run_kitaev",
    "estimate_strings_batched",
    "write_csv",
]

_CHUNK = 2048  # fixed batch size keeps draws independent of worker count


def write_csv(path: str, header: list[str], rows, cfg: ExperimentConfig) -> None:
    """CSV with a provenance comment line; floats via repr for stable bytes."""
    buf = io.StringIO()
    buf.write(f"# adfcs {__version__} config_sha256={cfg.digest()} seed={cfg.seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _set_label(s) -> str:
    return "+".join(str(i) for i in s)


# ---------------------------------------------------------------------------
# alpha curves


def run_alpha_curves(cfg: ExperimentConfig, out_path: str | None = None) -> list[list]:
    """Rows (n, S, d, alpha_exact, alpha_product, alpha_lazy) over odd depths."""
    rows = []
    for s in cfg.observables:
        for d in cfg.depths:
            if d % 2 == 0:
                continue
            a = alpha_exact_dp(cfg.n, d, s).value
            ap = alpha_k_product(cfg.n, d, s).value
            if len(s) == 2:
                al = alpha_slrw_sum(cfg.n, d, majorana_to_y(s[0]), majorana_to_y(s[1])).value
            else:
                al = ""
            rows.append([cfg.n, _set_label(s), d, float(a), float(ap), al])
    if out_path:
        write_csv(
            out_path,
            ["n", "S", "d", "alpha_exact", "alpha_product", "alpha_lazy"],
            rows,
            cfg,
        )
    return rows


# ---------------------------------------------------------------------------
# batched estimation helpers


def estimate_strings_batched(
    psi_amps: np.ndarray,
    n: int,
    d: int,
    index_sets,
    alphas,
    shots: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-shot estimates (shots, len(index_sets)): kernel / alpha per set."""
    inv = 1.0 / np.asarray(alphas, dtype=float)
    out = np.empty((shots, len(index_sets)), dtype=complex)
    done = 0
    while done < shots:
        b = min(_CHUNK, shots - done)
        q, outcomes = sample_shadow_batch(psi_amps, n, d, b, rng)
        out[done : done + b] = kernel_batch(q, outcomes, index_sets) * inv[None, :]
        done += b
    return out


def _prefix_means(values: np.ndarray, marks) -> np.ndarray:
    cums = np.cumsum(values)
    return np.array([cums[m - 1] / m for m in marks])


# ---------------------------------------------------------------------------
# error sweep (one random state per observable, shared across depths)


def _sweep_rep_task(args):
    (seed, n, d, s, alpha, shots_grid, case_idx, rep) = args
    rng = stream(seed, "sweep-shot", case_idx, d, rep)
    st = stream(seed, "sweep-state", case_idx)
    psi = random_state(n, st)
    vals = estimate_strings_batched(psi.amplitudes, n, d, [s], [alpha], shots_grid[-1], rng)
    return _prefix_means(vals[:, 0], shots_grid)


def run_error_sweep(cfg: ExperimentConfig, out_path: str | None = None) -> list[list]:
    """RMSE against the dense truth for each (S, depth, shot count).

    Rows: S, k, d_int, n, d, shots, reps, alpha, rmse, truth_re, truth_im,
    estimable.  A depth with alpha = 0 is flagged unestimable.
    """
    rows = []
    tasks = []
    meta = []
    truths = {}
    for case_idx, s in enumerate(cfg.observables):
        st = stream(cfg.seed, "sweep-state", case_idx)
        psi = random_state(cfg.n, st)
        truths[s] = expectation(psi, MajoranaString(cfg.n, s))
        for d in cfg.depths:
            alpha = alpha_exact_dp(cfg.n, d, s).value
            if alpha <= 0.0:
                meta.append((case_idx, s, d, alpha, None))
                continue
            first = len(tasks)
            for rep in range(cfg.reps):
                tasks.append((cfg.seed, cfg.n, d, s, alpha, cfg.shots, case_idx, rep))
            meta.append((case_idx, s, d, alpha, first))
    results = _run_tasks(_sweep_rep_task, tasks, cfg.workers)
    for case_idx, s, d, alpha, first in meta:
        truth = truths[s]
        dint = interaction_distance(MajoranaString(cfg.n, s))
        if first is None:
            for m in cfg.shots:
                rows.append(
                    [_set_label(s), len(s), dint, cfg.n, d, m, cfg.reps, float(alpha),
                     "", float(truth.real), float(truth.imag), 0]
                )
            continue
        est = np.stack(results[first : first + cfg.reps])  # (reps, len(shots))
        rmse = np.sqrt(np.mean(np.abs(est - truth) ** 2, axis=0))
        for gi, m in enumerate(cfg.shots):
            rows.append(
                [_set_label(s), len(s), dint, cfg.n, d, m, cfg.reps, float(alpha),
                 float(rmse[gi]), float(truth.real), float(truth.imag), 1]
            )
    if out_path:
        write_csv(
            out_path,
            ["S", "k", "d_int", "n", "d", "shots", "reps", "alpha", "rmse",
             "truth_re", "truth_im", "estimable"],
            rows,
            cfg,
        )
    return rows


# ---------------------------------------------------------------------------
# Kitaev chain benchmark: adaptive depth vs deep-circuit baseline


def saturation_depth(n: int, index_sets, rel_tol: float = 0.01, max_depth: int = 400) -> int:
    """Smallest depth with every alpha within rel_tol of its deep limit."""
    limits = {s: alpha_fcs_limit(n, len(s)).value for s in index_sets}
    for d in range(1, max_depth + 1):
        if all(
            abs(alpha_exact_dp(n, d, s).value - limits[s]) <= rel_tol * limits[s]
            for s in index_sets
        ):
            return d
    raise RuntimeError(f"saturation not reached by depth {max_depth}")


def _kitaev_rep_task(args):
    (seed, n, d, terms, coeffs_over_alpha, shots_grid, series, rep) = args
    rng = stream(seed, "kitaev-shot", series, rep)
    st = stream(seed, "kitaev-state", 0)
    psi = random_state(n, st)
    out = np.empty((shots_grid[-1],), dtype=complex)
    weights = np.asarray(coeffs_over_alpha)
    done = 0
    while done < shots_grid[-1]:
        b = min(_CHUNK, shots_grid[-1] - done)
        q, outcomes = sample_shadow_batch(psi.amplitudes, n, d, b, rng)
        out[done : done + b] = kernel_batch(q, outcomes, terms) @ weights
        done += b
    return _prefix_means(out, shots_grid)


def run_kitaev(cfg: ExperimentConfig, out_path: str | None = None, summary_path: str | None = None):
    """Estimate tr(rho H_K) vs shots at the adaptive depth and at the
    deep-circuit baseline depth; returns (rows, summary dict)."""
    h = kitaev_chain(cfg.n, cfg.mu, cfg.delta, cfg.t_gap)
    terms = [t.indices for t in h.terms]
    st = stream(cfg.seed, "kitaev-state", 0)
    psi = random_state(cfg.n, st)
    truth = sum(expectation(psi, t) for t in h.terms)
    d_adapt = cfg.adaptive_depth
    d_sat = saturation_depth(cfg.n, terms)
    series_depths = {"adaptive": d_adapt, "baseline": d_sat}
    tasks = []
    order = []
    summary_alphas = {}
    for series, d in series_depths.items():
        alphas = [alpha_exact_dp(cfg.n, d, s).value for s in terms]
        if any(a <= 0 for a in alphas):
            raise RuntimeError(f"alpha = 0 for a term at depth {d}")
        summary_alphas[series] = {
            _set_label(s): float(a) for s, a in zip(terms, alphas)
        }
        weights = [t.coefficient / a for t, a in zip(h.terms, alphas)]
        for rep in range(cfg.reps):
            tasks.append((cfg.seed, cfg.n, d, terms, weights, cfg.shots, series, rep))
            order.append(series)
    results = _run_tasks(_kitaev_rep_task, tasks, cfg.workers)
    rows = []
    for series, d in series_depths.items():
        est = np.stack([r for r, s in zip(results, order) if s == series])
        rmse = np.sqrt(np.mean(np.abs(est - truth) ** 2, axis=0))
        mean = est.mean(axis=0)
        for gi, m in enumerate(cfg.shots):
            rows.append(
                [series, cfg.n, d, m, cfg.reps, float(mean[gi].real),
                 float(abs(mean[gi] - truth)), float(rmse[gi])]
            )
    summary = {
        "n": cfg.n,
        "mu": cfg.mu,
        "delta": cfg.delta,
        "t_gap": cfg.t_gap,
        "seed": cfg.seed,
        "truth": float(truth.real),
        "truth_imag": float(truth.imag),
        "interaction_distance": observable_interaction_distance(h),
        "adaptive_depth": d_adapt,
        "baseline_depth": d_sat,
        "alphas": summary_alphas,
    }
    if out_path:
        write_csv(
            out_path,
            ["series", "n", "d", "shots", "reps", "estimate", "abs_error", "rmse"],
            rows,
            cfg,
        )
    if summary_path:
        os.makedirs(os.path.dirname(summary_path) or ".", exist_ok=True)
        with open(summary_path, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return rows, summary


# ---------------------------------------------------------------------------
# task execution


def _run_tasks(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    # spawn context: forking is unsafe once a threading runtime is live
    ctx = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
