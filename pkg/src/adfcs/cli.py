"""Command-line interface.

Subcommands: alpha, depth, estimate, sweep-error, kitaev, alpha-curves,
validate.  Exit codes: 0 ok, 2 config error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .alpha_engines import (
    alpha_exact_dp,
    alpha_fcs_limit,
    alpha_k_product,
    alpha_monte_carlo,
    alpha_pn_exact,
    alpha_slrw_poisson,
    alpha_slrw_sum,
    majorana_to_y,
)
from .config import ConfigError, ExperimentConfig, load_config
from .dense_sim import basis_state, random_state
from .experiments import (
    estimate_strings_batched,
    run_alpha_curves,
    run_error_sweep,
    run_kitaev,
    write_csv,
)
from .gaussian_sim import basis_covariance
from .majorana import kitaev_chain, observable_interaction_distance, parse_observable_text
from .depth_select import recommend_depth_formula, recommend_depth_search
from .rng_streams import stream
from .shadow import collect_samples, estimate_majorana, estimate_observable
from .majorana import MajoranaString
from .validation import run_validation


def _parse_set(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace("+", " ").replace(",", " ").split())


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--shots", type=str, default=None, help="count or comma list")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--backend", choices=("dense", "gaussian"), default=None)
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--config", type=str, default=None, help="flat key = value file")
    p.add_argument("--workers", type=int, default=None)


def _build_config(args, **extra) -> ExperimentConfig:
    overrides = {
        "n": args.n,
        "reps": args.reps,
        "seed": args.seed,
        "backend": args.backend,
        "out_dir": args.out,
        "workers": args.workers,
    }
    if args.shots is not None:
        overrides["shots"] = tuple(int(v) for v in str(args.shots).split(","))
    if getattr(args, "depths", None):
        overrides["depths"] = tuple(int(v) for v in args.depths.split(","))
    elif args.depth is not None:
        overrides["depths"] = (args.depth,)
    if getattr(args, "observable", None):
        overrides["observables"] = tuple(_parse_set(s) for s in args.observable)
    elif getattr(args, "own_terms", False):
        overrides["observables"] = ()  # subcommand supplies its own terms
    overrides.update(extra)
    return load_config(args.config, overrides)


def _cmd_alpha(args) -> int:
    cfg = _build_config(args)
    rows = []
    for s in cfg.observables:
        for d in cfg.depths:
            for method in args.method:
                stderr = ""
                if method == "exact_dp":
                    r = alpha_exact_dp(cfg.n, d, s)
                elif method == "monte_carlo":
                    r = alpha_monte_carlo(cfg.n, d, s, args.trials, stream(cfg.seed, "alpha-mc", d))
                    stderr = float(r.stderr)
                elif method == "pn_exact":
                    ys = sorted(majorana_to_y(i) for i in s)
                    r = alpha_pn_exact(cfg.n, d, ys[0], ys[1])
                elif method == "slrw_sum":
                    ys = sorted(majorana_to_y(i) for i in s)
                    r = alpha_slrw_sum(cfg.n, d, ys[0], ys[1])
                elif method == "slrw_poisson":
                    ys = sorted(majorana_to_y(i) for i in s)
                    r = alpha_slrw_poisson(cfg.n, d, ys[0], ys[1])
                elif method == "k_product":
                    r = alpha_k_product(cfg.n, d, s)
                else:
                    r = alpha_fcs_limit(cfg.n, len(s))
                rows.append([cfg.n, d, "+".join(map(str, s)), method, float(r.value), stderr])
    path = os.path.join(cfg.out_dir, "alpha.csv")
    write_csv(path, ["n", "d", "S", "method", "alpha", "stderr"], rows, cfg)
    print(path)
    return 0


def _cmd_alpha_curves(args) -> int:
    cfg = _build_config(args)
    path = os.path.join(cfg.out_dir, "alpha_curves.csv")
    run_alpha_curves(cfg, path)
    print(path)
    return 0


def _cmd_depth(args) -> int:
    args.own_terms = True
    cfg = _build_config(args)
    if args.mode == "formula":
        if args.dint is None:
            terms = _load_terms(args, cfg)
            dint = observable_interaction_distance(
                _terms_to_observable(cfg.n, terms)
            )
        else:
            dint = args.dint
        rec = recommend_depth_formula(cfg.n, dint, c=args.constant)
    else:
        terms = _load_terms(args, cfg)
        rec = recommend_depth_search(cfg.n, terms, eta=args.eta)
    doc = {
        "d_star": rec.d_star,
        "mode": rec.mode,
        "calibration": rec.calibration,
        "per_term_alpha": {"+".join(map(str, k)): v for k, v in rec.achieved_alpha.items()},
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _terms_to_observable(n, terms):
    from .majorana import FermionObservable

    return FermionObservable(n, tuple(MajoranaString(n, t) for t in terms))


def _load_terms(args, cfg):
    if getattr(args, "kitaev", False):
        h = kitaev_chain(cfg.n, cfg.mu, cfg.delta, cfg.t_gap)
        return [t.indices for t in h.terms]
    if getattr(args, "observable_file", None):
        with open(args.observable_file) as fh:
            h = parse_observable_text(fh.read(), cfg.n)
        return [t.indices for t in h.terms]
    return list(cfg.observables)


def _cmd_estimate(args) -> int:
    args.own_terms = True
    cfg = _build_config(args)
    d = cfg.depths[0]
    shots = cfg.shots[-1]
    rng = stream(cfg.seed, "estimate")
    if args.kitaev or args.observable_file:
        if args.kitaev:
            h = kitaev_chain(cfg.n, cfg.mu, cfg.delta, cfg.t_gap)
            obs_id = "kitaev"
        else:
            with open(args.observable_file) as fh:
                h = parse_observable_text(fh.read(), cfg.n)
            obs_id = os.path.basename(args.observable_file)
    else:
        raise ConfigError("estimate needs --kitaev or --observable-file")
    terms = [t.indices for t in h.terms]
    alphas = [alpha_exact_dp(cfg.n, d, s).value for s in terms]
    bad = [s for s, a in zip(terms, alphas) if a <= 0]
    if bad:
        raise ConfigError(f"unestimable terms at depth {d}: {bad}")
    rows = []
    if cfg.backend == "dense":
        psi = random_state(cfg.n, stream(cfg.seed, "estimate-state"))
        per_shot = estimate_strings_batched(
            psi.amplitudes, cfg.n, d, terms, alphas, shots, rng
        )
        totals = per_shot @ np.array([t.coefficient for t in h.terms])
        for s, a, col in zip(h.terms, alphas, per_shot.T):
            rows.append(
                ["+".join(map(str, s.indices)), cfg.n, d, shots, float(a),
                 float(col.mean().real), float(col.mean().imag),
                 float(np.mean(np.abs(col - col.mean()) ** 2))]
            )
        mean = totals.mean()
        rows.append(
            [obs_id, cfg.n, d, shots, float(min(alphas)), float(mean.real),
             float(mean.imag), float(np.mean(np.abs(totals - mean) ** 2))]
        )
    else:
        state = basis_covariance([0] * cfg.n)
        samples = collect_samples(state, cfg.n, d, shots, rng)
        table = {s: a for s, a in zip(terms, alphas)}
        for t, a in zip(h.terms, alphas):
            rep = estimate_majorana(samples, t, a)
            rows.append(
                ["+".join(map(str, t.indices)), cfg.n, d, shots, float(a),
                 float(rep.mean.real), float(rep.mean.imag), float(rep.empirical_variance)]
            )
        rep = estimate_observable(samples, h, table)
        rows.append(
            [obs_id, cfg.n, d, shots, float(rep.alpha_used), float(rep.mean.real),
             float(rep.mean.imag), float(rep.empirical_variance)]
        )
    path = os.path.join(cfg.out_dir, "estimate.csv")
    write_csv(
        path,
        ["observable_id", "n", "d", "shots", "alpha", "mean_re", "mean_im", "emp_var"],
        rows,
        cfg,
    )
    print(path)
    return 0


def _cmd_sweep(args) -> int:
    cfg = _build_config(args)
    path = os.path.join(cfg.out_dir, "error_sweep.csv")
    run_error_sweep(cfg, path)
    print(path)
    return 0


def _cmd_kitaev(args) -> int:
    args.own_terms = True
    extra = {}
    if args.adaptive_depth is not None:
        extra["adaptive_depth"] = args.adaptive_depth
    cfg = _build_config(args, **extra)
    path = os.path.join(cfg.out_dir, "kitaev.csv")
    summary = os.path.join(cfg.out_dir, "kitaev_summary.json")
    run_kitaev(cfg, path, summary)
    print(path)
    print(summary)
    return 0


def _cmd_validate(args) -> int:
    report = run_validation()
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out = os.path.join(args.out, "validation.json")
        with open(out, "w") as fh:
            fh.write(text + "\n")
        print(out)
    else:
        print(text)
    return 0 if report["all_passed"] else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="adfcs",
        description="Adaptive-depth fermionic classical shadows: channel "
        "eigenvalues, depth selection, and observable estimation.",
    )
    parser.add_argument("--version", action="version", version=f"adfcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="channel eigenvalues by one or more engines")
    _add_common(p)
    p.add_argument("--observable", action="append", metavar="SET",
                   help="index set like '1 4' (repeatable)")
    p.add_argument("--depths", type=str, default=None, help="comma list of depths")
    p.add_argument("--method", action="append", default=None,
                   choices=("exact_dp", "monte_carlo", "pn_exact", "slrw_sum",
                            "slrw_poisson", "k_product", "fcs_limit"))
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(fn=_cmd_alpha)

    p = sub.add_parser("alpha-curves", help="exact / product / lazy-walk alpha vs depth")
    _add_common(p)
    p.add_argument("--observable", action="append", metavar="SET")
    p.add_argument("--depths", type=str, default=None)
    p.set_defaults(fn=_cmd_alpha_curves)

    p = sub.add_parser("depth", help="recommend a measurement depth")
    _add_common(p)
    p.add_argument("--mode", choices=("formula", "search"), default="search")
    p.add_argument("--dint", type=int, default=None)
    p.add_argument("--constant", type=float, default=2.0)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--observable", action="append", metavar="SET")
    p.add_argument("--observable-file", type=str, default=None)
    p.add_argument("--kitaev", action="store_true")
    p.set_defaults(fn=_cmd_depth)

    p = sub.add_parser("estimate", help="estimate an observable from shadow samples")
    _add_common(p)
    p.add_argument("--observable-file", type=str, default=None)
    p.add_argument("--kitaev", action="store_true")
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("sweep-error", help="RMSE vs shots across depths")
    _add_common(p)
    p.add_argument("--observable", action="append", metavar="SET")
    p.add_argument("--depths", type=str, default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("kitaev", help="Kitaev chain estimation benchmark")
    _add_common(p)
    p.add_argument("--adaptive-depth", type=int, default=None)
    p.set_defaults(fn=_cmd_kitaev)

    p = sub.add_parser("validate", help="run the cross-engine validation suite")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=_cmd_validate)

    args = parser.parse_args(argv)
    if getattr(args, "method", None) is not None and not args.method:
        args.method = ["exact_dp"]
    if getattr(args, "command", None) == "alpha" and args.method is None:
        args.method = ["exact_dp"]
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
