"""Average action of one Haar-random two-qubit matchgate on doubled Paulis.

In the doubled (diagonal) Pauli basis the gate average is a 16x16
column-stochastic matrix with exact rational entries {0, 1, 1/4, 1/6}:
within the sector of Majorana subsets of size m it redistributes weight
uniformly, E[det(Q|_{A,B})^2] = delta_{|A|,|B|} / C(4,|A|).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .majorana import MajoranaString, jordan_wigner

__all__ = [
    "PAULI_PAIR_LABELS",
    "LocalTwirlTensor",
    "t_tensor",
    "subset_transitions",
    "t_tensor_monte_carlo",
    "pauli_pair_matrices",
]

PAULI_PAIR_LABELS = tuple(a + b for a in "IXYZ" for b in "IXYZ")
_LABEL_POS = {lab: i for i, lab in enumerate(PAULI_PAIR_LABELS)}


def _subset_label(mask: int) -> str:
    """Two-qubit Pauli letters of gamma_A for A subset of modes {1..4}."""
    indices = tuple(m + 1 for m in range(4) if mask >> m & 1)
    return jordan_wigner(MajoranaString(2, indices)).letters


# mask over modes {1..4} <-> Pauli pair label, e.g. {1,2} <-> "ZI"
SUBSET_TO_LABEL = {mask: _subset_label(mask) for mask in range(16)}
LABEL_TO_SUBSET = {lab: mask for mask, lab in SUBSET_TO_LABEL.items()}


@dataclass(frozen=True)
class LocalTwirlTensor:
    """16x16 exact-rational matrix; rows are outputs, columns inputs."""

    entries: tuple

    def entry(self, out_label: str, in_label: str) -> Fraction:
        return self.entries[_LABEL_POS[out_label]][_LABEL_POS[in_label]]

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def column_sums(self) -> tuple:
        return tuple(sum(row[c] for row in self.entries) for c in range(16))


def t_tensor() -> LocalTwirlTensor:
    rows = [[Fraction(0)] * 16 for _ in range(16)]
    for a in range(16):
        for b in range(16):
            if bin(a).count("1") == bin(b).count("1"):
                w = Fraction(1, comb(4, bin(a).count("1")))
                rows[_LABEL_POS[SUBSET_TO_LABEL[b]]][_LABEL_POS[SUBSET_TO_LABEL[a]]] = w
    return LocalTwirlTensor(tuple(tuple(r) for r in rows))


def pauli_pair_matrices() -> np.ndarray:
    """(16, 4, 4) stack of two-qubit Pauli matrices in label order."""
    singles = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    return np.stack([np.kron(singles[a], singles[b]) for a, b in PAULI_PAIR_LABELS])


def t_tensor_monte_carlo(samples: int, rng: np.random.Generator, chunk: int = 2000):
    """Haar-average of the doubled gate action, estimated from sampled gates.

    Each sampled orthogonal is synthesized into its two-qubit unitary U and
    contributes (1/16) tr(P_out U P_in U^dag)^2 per entry.  Returns
    (mean, stderr) arrays of shape (16, 16): rows outputs, columns inputs.
    """
    from .matchgate import sample_haar_o4_batch, synthesize_unitary_batch

    ps = pauli_pair_matrices()
    total = np.zeros((16, 16))
    total_sq = np.zeros((16, 16))
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        u = synthesize_unitary_batch(sample_haar_o4_batch(rng, b))
        upu = np.einsum("bij,pjk,blk->bpil", u, ps, u.conj(), optimize=True)
        traces = np.einsum("oil,bpli->bpo", ps, upu, optimize=True)
        vals = (traces.real / 4.0) ** 2  # (b, in, out)
        if np.max(np.abs(traces.imag)) > 1e-8:
            raise FloatingPointError("gate conjugation of a Pauli produced a complex trace")
        total += vals.sum(axis=0).T
        total_sq += (vals**2).sum(axis=0).T
        done += b
    mean = total / samples
    var = np.maximum(total_sq / samples - mean**2, 0.0)
    stderr = np.sqrt(var / samples)
    return mean, stderr


def subset_transitions(tensor: LocalTwirlTensor | None = None) -> list:
    """Per-gate transition table over local mode subsets.

    Entry [in_mask] is a list of (out_mask, probability) pairs read off the
    tensor; every nonzero tensor entry must connect equal-size subsets.
    """
    tensor = tensor if tensor is not None else t_tensor()
    table: list[list[tuple[int, float]]] = []
    for a in range(16):
        col = []
        for b in range(16):
            w = tensor.entry(SUBSET_TO_LABEL[b], SUBSET_TO_LABEL[a])
            if w != 0:
                if bin(a).count("1") != bin(b).count("1"):
                    raise ValueError(
                        f"tensor links subsets of different sizes: {a:04b} -> {b:04b}"
                    )
                col.append((b, float(w)))
        table.append(col)
    return table
