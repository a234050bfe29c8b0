"""Measurement-depth selection from an observable's interaction distance.

Two modes: a closed-form rule d* ~ c * max(d_int^2 / ln n, d_int), and an
exact search that scans depths until the subset-chain alpha of every term
clears a fraction of its deep-circuit limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log

from .alpha_engines import alpha_exact_dp, alpha_fcs_limit

__all__ = ["DepthRecommendation", "recommend_depth_formula", "recommend_depth_search"]

DEFAULT_DEPTH_CONSTANT = 2.0


@dataclass(frozen=True)
class DepthRecommendation:
    d_star: int
    mode: str
    calibration: float
    achieved_alpha: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.d_star < 1:
            raise ValueError("d_star must be >= 1")
        if self.mode not in ("formula", "search"):
            raise ValueError(f"unknown mode {self.mode!r}")


def recommend_depth_formula(
    n: int,
    d_int: int,
    c: float = DEFAULT_DEPTH_CONSTANT,
    round_to_odd: bool = True,
) -> DepthRecommendation:
    """d* = max(1, round(c * max(d_int^2 / ln n, d_int))), odd-rounded by
    default so the lazy-walk formulas stay applicable."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if d_int < 1:
        raise ValueError(f"need d_int >= 1, got {d_int}")
    if not c > 0:
        raise ValueError("calibration constant must be positive")
    d = max(1, round(c * max(d_int**2 / log(n), d_int)))
    if round_to_odd and d % 2 == 0:
        d += 1
    return DepthRecommendation(d, "formula", c)


def recommend_depth_search(
    n: int,
    terms,
    eta: float = 0.5,
    max_depth: int = 400,
) -> DepthRecommendation:
    """Smallest depth whose exact alpha reaches eta * (deep-circuit limit)
    for every term; terminates because alpha saturates to that limit."""
    if not (0 < eta <= 1):
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    term_list = [tuple(sorted(int(i) for i in t)) for t in terms]
    if not term_list:
        raise ValueError("need at least one term")
    thresholds = {t: eta * alpha_fcs_limit(n, len(t)).value for t in term_list}
    for d in range(1, max_depth + 1):
        achieved = {t: alpha_exact_dp(n, d, t).value for t in term_list}
        if all(achieved[t] >= thresholds[t] * (1 - 1e-12) for t in term_list):
            return DepthRecommendation(d, "search", eta, achieved)
    raise RuntimeError(f"no depth <= {max_depth} reaches the target fraction {eta}")
