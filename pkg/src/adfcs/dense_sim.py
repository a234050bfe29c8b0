"""Dense statevector backend: the ground-truth oracle for everything else.

Qubit 1 is the most significant bit of the amplitude index, matching the
Kronecker-product order of the Jordan-Wigner Pauli words.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .majorana import MajoranaString, FermionObservable, jordan_wigner
from .matchgate import BrickworkCircuit, synthesize_unitary

__all__ = [
    "MAX_QUBITS",
    "StateVector",
    "random_state",
    "basis_state",
    "apply_circuit",
    "apply_gate",
    "sample_outcome",
    "born_probabilities",
    "expectation",
    "expectation_observable",
    "dump_amplitudes",
    "load_amplitudes",
]

# 2^14 complex amplitudes keeps every operation desk-scale.
MAX_QUBITS = 14


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_QUBITS:
            raise ValueError(f"dense backend supports 1 <= n <= {MAX_QUBITS}, got {self.n}")
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (2**self.n,):
            raise ValueError(f"need {2**self.n} amplitudes, got shape {a.shape}")
        object.__setattr__(self, "amplitudes", a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state via normalized i.i.d. complex Gaussians."""
    a = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(n, a / np.linalg.norm(a))


def basis_state(n: int, bits) -> StateVector:
    bits = np.asarray(bits, dtype=int)
    if bits.shape != (n,):
        raise ValueError(f"need {n} bits")
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    a = np.zeros(2**n, dtype=complex)
    a[idx] = 1.0
    return StateVector(n, a)


def apply_gate(amps: np.ndarray, n: int, qubit: int, u4: np.ndarray) -> np.ndarray:
    """Apply a 4x4 unitary on qubit pair (qubit, qubit+1), 1-based."""
    pre = 2 ** (qubit - 1)
    post = 2 ** (n - qubit - 1)
    view = amps.reshape(pre, 4, post)
    return np.matmul(u4, view).reshape(-1)


def apply_circuit(psi: StateVector, c: BrickworkCircuit) -> StateVector:
    if psi.n != c.n:
        raise ValueError(f"state has n = {psi.n}, circuit has n = {c.n}")
    amps = psi.amplitudes.copy()
    for layer in c.layers:
        for qubit, block in layer:
            amps = apply_gate(amps, psi.n, qubit, synthesize_unitary(block))
    return StateVector(psi.n, amps)


def born_probabilities(psi: StateVector) -> np.ndarray:
    p = np.abs(psi.amplitudes) ** 2
    return p / p.sum()


def sample_outcome(psi: StateVector, rng: np.random.Generator) -> np.ndarray:
    """One computational-basis outcome, as an array of n bits (qubit 1 first)."""
    cum = np.cumsum(np.abs(psi.amplitudes) ** 2)
    idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    idx = min(idx, len(cum) - 1)
    n = psi.n
    return ((idx >> (n - 1 - np.arange(n))) & 1).astype(np.uint8)


def _pauli_action(letters: str, n: int):
    """Bit masks and per-basis-state factors of a Pauli word.

    P |x> = c(x) |x ^ flip> with c(x) = i^{#Y} * (-1)^{popcount(x & zy_mask)}.
    """
    flip = 0
    zy = 0
    ny = 0
    for q, ch in enumerate(letters, start=1):
        bit = 1 << (n - q)
        if ch in "XY":
            flip |= bit
        if ch in "ZY":
            zy |= bit
        if ch == "Y":
            ny += 1
    return flip, zy, ny


def _apply_pauli(amps: np.ndarray, n: int, p) -> np.ndarray:
    flip, zy, ny = _pauli_action(p.letters, n)
    x = np.arange(2**n, dtype=np.int64)
    src = x ^ flip
    signs = 1 - 2 * (_popcount(src & zy) & 1)
    return p.phase * (1j**ny) * signs * amps[src]


def _popcount(x: np.ndarray) -> np.ndarray:
    # vectorized popcount for int64 arrays
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


def expectation(psi: StateVector, s: MajoranaString) -> complex:
    """<psi| coefficient * gamma_S |psi> via the streamed Pauli action."""
    if psi.n != s.n:
        raise ValueError(f"state has n = {psi.n}, string has n = {s.n}")
    p = jordan_wigner(s)
    phi = _apply_pauli(psi.amplitudes, psi.n, p)
    return s.coefficient * complex(np.vdot(psi.amplitudes, phi))


def expectation_observable(psi: StateVector, h: FermionObservable) -> complex:
    return sum(expectation(psi, t) for t in h.terms)


# Debug dump format: 8-byte magic, uint32 n, then 2^n little-endian
# (float64 re, float64 im) pairs.
_MAGIC = b"ADFCSSV1"


def dump_amplitudes(psi: StateVector, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(np.uint32(psi.n).tobytes())
        pairs = np.empty((2**psi.n, 2), dtype="<f8")
        pairs[:, 0] = psi.amplitudes.real
        pairs[:, 1] = psi.amplitudes.imag
        fh.write(pairs.tobytes())


def load_amplitudes(path) -> StateVector:
    with open(path, "rb") as fh:
        if fh.read(8) != _MAGIC:
            raise ValueError("not an amplitude dump")
        n = int(np.frombuffer(fh.read(4), dtype="<u4")[0])
        pairs = np.frombuffer(fh.read(), dtype="<f8").reshape(2**n, 2)
    return StateVector(n, pairs[:, 0] + 1j * pairs[:, 1])
