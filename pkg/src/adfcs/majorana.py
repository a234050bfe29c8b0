"""Majorana index-set algebra and Jordan-Wigner Pauli representation.

Majorana operators gamma_1 .. gamma_{2n} on n qubits obey
{gamma_mu, gamma_nu} = 2 delta_{mu nu}.  A Majorana string gamma_S is the
ordered product over a strictly increasing index set S, with gamma_{} = 1.
Indices are 1-based everywhere, including the text I/O format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "MajoranaString",
    "FermionObservable",
    "PauliString",
    "interaction_distance",
    "near_distance",
    "observable_interaction_distance",
    "jordan_wigner",
    "vacuum_expectation",
    "kitaev_chain",
    "is_hermitian",
    "parse_observable_text",
    "format_observable_text",
]

# Single-qubit Pauli products: (left, right) -> (phase, result).
_PAULI_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class MajoranaString:
    """A scaled Majorana monomial: coefficient * gamma_{i_1} ... gamma_{i_k}.

    Parameters
    ----------
    n : int
        Qubit count; valid indices are 1 .. 2n.
    indices : tuple of int
        Strictly increasing Majorana indices.
    coefficient : complex
    """

    n: int
    indices: tuple[int, ...]
    coefficient: complex = 1.0 + 0j

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing, got {idx}")
        if idx and (idx[0] < 1 or idx[-1] > 2 * self.n):
            raise ValueError(f"indices must lie in [1, {2 * self.n}], got {idx}")

    @property
    def k(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class PauliString:
    """A scaled n-qubit Pauli word: phase * (letter_1 x ... x letter_n)."""

    n: int
    letters: str
    phase: complex = 1.0 + 0j

    def __post_init__(self):
        if len(self.letters) != self.n or any(c not in "IXYZ" for c in self.letters):
            raise ValueError(f"letters must be {self.n} symbols from IXYZ, got {self.letters!r}")
        ph = complex(self.phase)
        if min(abs(ph - u) for u in _PHASES) > 1e-12:
            raise ValueError(f"phase must be a fourth root of unity, got {ph}")
        object.__setattr__(self, "phase", ph)


@dataclass(frozen=True)
class FermionObservable:
    """Linear combination of Majorana strings sharing one qubit count.

    Terms with the same index set are merged on construction; the term
    order is canonical (by locality, then lexicographic indices).
    """

    n: int
    terms: tuple[MajoranaString, ...]

    def __post_init__(self):
        merged: dict[tuple[int, ...], complex] = {}
        for t in self.terms:
            if t.n != self.n:
                raise ValueError(f"term qubit count {t.n} != observable qubit count {self.n}")
            merged[t.indices] = merged.get(t.indices, 0j) + t.coefficient
        out = tuple(
            MajoranaString(self.n, idx, c)
            for idx, c in sorted(merged.items(), key=lambda kv: (len(kv[0]), kv[0]))
        )
        object.__setattr__(self, "terms", out)


def interaction_distance(s: MajoranaString) -> int:
    """Largest gap |i_{j+1} - i_j| between consecutive sorted indices (0 if k <= 1)."""
    if s.k <= 1:
        return 0
    return max(b - a for a, b in zip(s.indices, s.indices[1:]))


def near_distance(s: MajoranaString) -> int:
    """Largest within-pair gap i_{2j} - i_{2j-1} after chunking S into consecutive pairs."""
    if s.k % 2 != 0:
        raise ValueError(f"near distance needs even |S|, got {s.k}")
    if s.k == 0:
        return 0
    return max(s.indices[2 * j + 1] - s.indices[2 * j] for j in range(s.k // 2))


def observable_interaction_distance(h: FermionObservable) -> int:
    if not h.terms:
        raise ValueError("observable has no terms")
    return max(interaction_distance(t) for t in h.terms)


def jordan_wigner(s: MajoranaString) -> PauliString:
    """Pauli word of gamma_S under gamma_{2j-1} = Z..Z X_j, gamma_{2j} = Z..Z Y_j.

    The returned phase collects all single-qubit multiplication signs, so
    that gamma_S = phase * (tensor product of the letters).  The string's
    own coefficient is not folded in.
    """
    letters = ["I"] * s.n
    phase = 1 + 0j
    for m in s.indices:
        q = (m + 1) // 2  # 1-based qubit carrying the X/Y letter
        head = "X" if m % 2 == 1 else "Y"
        for j in range(q - 1):
            ph, letters[j] = _PAULI_MUL[(letters[j], "Z")]
            phase *= ph
        ph, letters[q - 1] = _PAULI_MUL[(letters[q - 1], head)]
        phase *= ph
    return PauliString(s.n, "".join(letters), phase)


def vacuum_expectation(s: MajoranaString, b: Sequence[int]) -> complex:
    """<b| coefficient * gamma_S |b> for a computational basis state b.

    Nonzero only when S is a union of mode pairs {2j-1, 2j}; each such pair
    contributes a factor i * (-1)^{b_j}.
    """
    if len(b) != s.n:
        raise ValueError(f"bitstring length {len(b)} != n = {s.n}")
    idx = s.indices
    if len(idx) % 2 != 0:
        return 0j
    val = s.coefficient
    for p in range(0, len(idx), 2):
        lo, hi = idx[p], idx[p + 1]
        if lo % 2 == 0 or hi != lo + 1:
            return 0j
        j = (lo + 1) // 2
        val *= 1j * (-1) ** int(b[j - 1])
    return val


def kitaev_chain(n: int, mu: float, delta: float, t: float) -> FermionObservable:
    """One-dimensional p-wave superconductor chain on n sites.

    H = -(i mu / 2) sum_j gamma_{2j-1} gamma_{2j}
        + (i/2) sum_j (w+ gamma_{2j-1} gamma_{2j+2} - w- gamma_{2j} gamma_{2j+1}),
    with w+- = |delta| +- t.
    """
    if n < 2:
        raise ValueError(f"chain needs n >= 2, got {n}")
    wp = abs(delta) + t
    wm = abs(delta) - t
    terms = []
    for j in range(1, n + 1):
        terms.append(MajoranaString(n, (2 * j - 1, 2 * j), -0.5j * mu))
    for j in range(1, n):
        terms.append(MajoranaString(n, (2 * j - 1, 2 * j + 2), 0.5j * wp))
        terms.append(MajoranaString(n, (2 * j, 2 * j + 1), -0.5j * wm))
    return FermionObservable(n, tuple(terms))


def is_hermitian(h: FermionObservable, tol: float = 1e-10) -> bool:
    """Check c_S* = (-1)^{k(k-1)/2} c_S for every term (gamma_S^dag = (-1)^{k(k-1)/2} gamma_S)."""
    for t in h.terms:
        k = t.k
        sign = (-1) ** ((k * (k - 1) // 2) % 2)
        if abs(t.coefficient.conjugate() - sign * t.coefficient) > tol:
            return False
    return True


def parse_observable_text(text: str, n: int) -> FermionObservable:
    """Parse the one-term-per-line format ``coeff_re coeff_im i1 i2 ... ik``.

    Blank lines and ``#`` comments are ignored.  Indices are 1-based.
    """
    terms = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"line {ln}: need at least coeff_re coeff_im")
        try:
            re_c, im_c = float(parts[0]), float(parts[1])
            idx = tuple(int(p) for p in parts[2:])
        except ValueError as exc:
            raise ValueError(f"line {ln}: {exc}") from None
        terms.append(MajoranaString(n, idx, complex(re_c, im_c)))
    if not terms:
        raise ValueError("no terms found")
    return FermionObservable(n, tuple(terms))


def format_observable_text(h: FermionObservable) -> str:
    lines = [f"# n = {h.n}, one term per line: coeff_re coeff_im i1 i2 ... ik"]
    for t in h.terms:
        idx = " ".join(str(i) for i in t.indices)
        lines.append(f"{t.coefficient.real!r} {t.coefficient.imag!r} {idx}".rstrip())
    return "\n".join(lines) + "\n"
