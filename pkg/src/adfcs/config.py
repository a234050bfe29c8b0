"""Experiment configuration: flat key-value text files plus CLI overrides.

Format: one ``key = value`` per line, ``#`` comments.  Lists are
comma-separated; observable index sets are space-separated and multiple
sets are joined with ``;``.  CLI flags win over file values.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, asdict, replace

__all__ = ["ConfigError", "ExperimentConfig", "parse_config_text", "load_config"]


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps this to exit code 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 10
    depths: tuple[int, ...] = (5, 9, 15, 19, 23)
    shots: tuple[int, ...] = (10, 32, 100, 316, 1000)
    reps: int = 64
    seed: int = 7
    backend: str = "dense"
    out_dir: str = "out"
    observables: tuple[tuple[int, ...], ...] = (
        (1, 4),
        (1, 2, 3, 7),
        (1, 2, 3, 4, 5, 9),
        (4, 17),
        (3, 18),
    )
    mu: float = 2.0
    delta: float = 1.0
    t_gap: float = 0.4
    adaptive_depth: int = 3
    workers: int = 1
    eta: float = 0.5

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ConfigError(f"n must be even and >= 2, got {self.n}")
        if any(d < 0 for d in self.depths):
            raise ConfigError(f"depths must be >= 0, got {self.depths}")
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if not self.shots or any(b <= a for a, b in zip(self.shots, self.shots[1:])):
            raise ConfigError(f"shots must be strictly increasing, got {self.shots}")
        if self.backend not in ("dense", "gaussian"):
            raise ConfigError(f"backend must be dense or gaussian, got {self.backend!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not (0 < self.eta <= 1):
            raise ConfigError(f"eta must be in (0, 1], got {self.eta}")
        for s in self.observables:
            if len(s) % 2 != 0:
                raise ConfigError(f"observable index sets need even size, got {s}")
            if any(b <= a for a, b in zip(s, s[1:])) or (s and (s[0] < 1 or s[-1] > 2 * self.n)):
                raise ConfigError(f"bad index set {s} for n = {self.n}")

    def digest(self) -> str:
        # execution-only fields do not affect results, so they are not part
        # of the provenance hash (worker-count invariance is byte-level)
        skip = {"workers", "out_dir"}
        blob = repr(sorted((k, v) for k, v in asdict(self).items() if k not in skip)).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


_INT_KEYS = {"n", "reps", "seed", "workers", "adaptive_depth"}
_FLOAT_KEYS = {"mu", "delta", "t_gap", "eta"}
_LIST_KEYS = {"depths", "shots"}
_STR_KEYS = {"backend", "out_dir"}


def parse_config_text(text: str) -> dict:
    out: dict = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _INT_KEYS:
                out[key] = int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _LIST_KEYS:
                out[key] = tuple(int(v.strip()) for v in value.split(",") if v.strip())
            elif key in _STR_KEYS:
                out[key] = value
            elif key == "observables":
                sets = []
                for part in value.split(";"):
                    part = part.strip()
                    if part:
                        sets.append(tuple(int(v) for v in part.split()))
                out[key] = tuple(sets)
            else:
                raise ConfigError(f"line {ln}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {ln}: {exc}") from None
    return out


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    """Build a config from an optional file plus non-None overrides."""
    values: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
