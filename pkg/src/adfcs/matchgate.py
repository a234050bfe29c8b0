"""Matchgate circuits in their orthogonal-matrix representation.

A two-qubit matchgate is determined by a 4x4 real orthogonal Q acting on
the four local Majorana modes, U^dag gamma_mu U = sum_nu Q_{mu nu} gamma_nu.
Brickwork circuits stack such gates on (odd,even) then (even,odd) qubit
pairs; the composed circuit is again a single 2n x 2n orthogonal.

Composition convention (pinned by the dense conjugation tests): for a
circuit U = U_L ... U_1 with layer 1 applied first, the global matrix is
Q = Q_L @ ... @ Q_1, and a gate at qubit pair (q, q+1) embeds its block on
modes 2q-1 .. 2q+2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OrthogonalBlock",
    "BrickworkCircuit",
    "GlobalOrthogonal",
    "layer_qubit_positions",
    "sample_haar_o4",
    "sample_brickwork",
    "circuit_to_global_q",
    "synthesize_unitary",
    "minor_det",
    "circuit_to_json",
    "circuit_from_json",
]

ORTHO_TOL = 1e-10

# Local Jordan-Wigner Majorana matrices on 2 qubits (modes 1..4).
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
LOCAL_GAMMAS = (
    np.kron(_X, _I2),
    np.kron(_Y, _I2),
    np.kron(_Z, _X),
    np.kron(_Z, _Y),
)
# Products gamma_mu gamma_{mu+1}; squares of these are -1.
_GG = tuple(LOCAL_GAMMAS[p] @ LOCAL_GAMMAS[p + 1] for p in range(3))


def _check_orthogonal(m: np.ndarray, tol: float = ORTHO_TOL) -> None:
    d = m.shape[0]
    if m.shape != (d, d):
        raise ValueError(f"matrix must be square, got {m.shape}")
    err = np.max(np.abs(m.T @ m - np.eye(d)))
    if err > tol:
        raise ValueError(f"matrix is not orthogonal: max |Q^T Q - I| = {err:.3e}")


@dataclass(frozen=True)
class OrthogonalBlock:
    """4x4 real orthogonal matrix of a single two-qubit matchgate."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"block must be 4x4, got {m.shape}")
        _check_orthogonal(m)
        object.__setattr__(self, "entries", m)

    @property
    def det_sign(self) -> int:
        return 1 if np.linalg.det(self.entries) > 0 else -1


@dataclass(frozen=True)
class GlobalOrthogonal:
    """2n x 2n orthogonal matrix acting on all Majorana modes."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError(f"global matrix must be even-dimensional square, got {m.shape}")
        _check_orthogonal(m)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0] // 2


@dataclass(frozen=True)
class BrickworkCircuit:
    """Layered matchgate circuit; layer ell covers qubit pairs (1,2),(3,4),...
    when ell is odd and (2,3),(4,5),... when ell is even."""

    n: int
    depth: int
    layers: tuple[tuple[tuple[int, OrthogonalBlock], ...], ...]

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 2:
            raise ValueError(f"brickwork circuits need even n >= 2, got {self.n}")
        if len(self.layers) != self.depth:
            raise ValueError(f"{len(self.layers)} layers != depth {self.depth}")
        for ell, layer in enumerate(self.layers, start=1):
            expected = layer_qubit_positions(self.n, ell)
            got = tuple(q for q, _ in layer)
            if got != expected:
                raise ValueError(f"layer {ell} gates at {got}, expected {expected}")

    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


def layer_qubit_positions(n: int, layer_index: int) -> tuple[int, ...]:
    """1-based first-qubit positions of the gates in the given (1-based) layer."""
    start = 1 if layer_index % 2 == 1 else 2
    return tuple(range(start, n, 2))


def sample_haar_o4(rng: np.random.Generator) -> OrthogonalBlock:
    """Haar sample over the full O(4), both determinant components weighted 1/2.

    QR of a standard Gaussian matrix with the R diagonal sign-fixed positive
    is Haar; an independent coin then flips the last row so neither
    determinant sector is privileged by the generator's internals.
    """
    a = rng.standard_normal((4, 4))
    q, r = np.linalg.qr(a)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    q = q * d
    if rng.random() < 0.5:
        q[3, :] = -q[3, :]
    return OrthogonalBlock(q)


def sample_haar_o4_batch(rng: np.random.Generator, count: int) -> np.ndarray:
    """Vectorized Haar O(4) sampling; returns (count, 4, 4) float64."""
    a = rng.standard_normal((count, 4, 4))
    q = _orthogonalize_columns(a)
    flip = rng.random(count) < 0.5
    q[flip, 3, :] = -q[flip, 3, :]
    return q


def _orthogonalize_columns(a: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of a stack of 4x4 matrices.

    Equivalent to QR with positive R diagonal, so Gaussian input maps to
    Haar orthogonal output.
    """
    q = np.array(a, dtype=float)
    for c in range(4):
        v = q[:, :, c]
        for p in range(c):
            u = q[:, :, p]
            v -= np.sum(u * v, axis=1, keepdims=True) * u
        v /= np.linalg.norm(v, axis=1, keepdims=True)
    return q


def sample_brickwork(n: int, d: int, rng: np.random.Generator) -> BrickworkCircuit:
    """Depth-d brickwork circuit with independent Haar O(4) gates."""
    if n % 2 != 0:
        raise ValueError(f"brickwork circuits need even n, got {n}")
    if d < 0:
        raise ValueError(f"depth must be >= 0, got {d}")
    layers = []
    for ell in range(1, d + 1):
        layers.append(tuple((q, sample_haar_o4(rng)) for q in layer_qubit_positions(n, ell)))
    return BrickworkCircuit(n, d, tuple(layers))


def embed_block(n: int, qubit: int, block: OrthogonalBlock) -> np.ndarray:
    """Global conjugation matrix of one gate at qubit pair (qubit, qubit+1).

    The block sits on modes 2*qubit-1 .. 2*qubit+2; all higher modes pick
    up det(Q): an odd-parity gate anticommutes with every Jordan-Wigner
    string crossing it, so its embedding carries the fermionic parity tail.
    """
    m = np.eye(2 * n)
    r = 2 * (qubit - 1)
    m[r : r + 4, r : r + 4] = block.entries
    if block.det_sign < 0:
        m[r + 4 :, r + 4 :] *= -1.0
    return m


def circuit_to_global_q(c: BrickworkCircuit) -> GlobalOrthogonal:
    """Compose the per-gate embeddings into the circuit's global Q.

    Later layers multiply on the left, so that U^dag gamma_mu U =
    sum_nu Q_{mu nu} gamma_nu holds for the full circuit built gate by
    gate from synthesize_unitary.
    """
    q = np.eye(2 * c.n)
    for layer in c.layers:
        for qubit, block in layer:
            r = 2 * (qubit - 1)
            q[r : r + 4, :] = block.entries @ q[r : r + 4, :]
            if block.det_sign < 0:
                q[r + 4 :, :] = -q[r + 4 :, :]
    return GlobalOrthogonal(q)


def _rotation_unitary(pair: int, theta: float) -> np.ndarray:
    # exp((theta/2) gamma_p gamma_{p+1}); (gamma_p gamma_{p+1})^2 = -1.
    return np.cos(theta / 2) * np.eye(4, dtype=complex) + np.sin(theta / 2) * _GG[pair]


def synthesize_unitary(q: OrthogonalBlock | np.ndarray) -> np.ndarray:
    """Two-qubit unitary U with U^dag gamma_mu U = sum_nu q_{mu nu} gamma_nu.

    The det=+1 part is peeled into adjacent-mode Givens rotations, each
    realized as an exponential of gamma_mu gamma_{mu+1}; a det=-1 factor is
    absorbed by the local matrix of gamma_4, whose conjugation negates the
    other three modes.  The global phase is not fixed.
    """
    m = q.entries if isinstance(q, OrthogonalBlock) else np.asarray(q, dtype=float)
    _check_orthogonal(m)
    work = m.copy()
    odd = np.linalg.det(work) < 0
    if odd:
        # diag(-1,-1,-1,1) is the conjugation matrix of gamma_4
        work = work @ np.diag([-1.0, -1.0, -1.0, 1.0])
    u = np.eye(4, dtype=complex)
    # Adjacent-row Givens sweep G_m ... G_1 work = I, so work = prod_j G_j^{-1}.
    for col in range(3):
        for row in range(3, col, -1):
            theta = np.arctan2(work[row, col], work[row - 1, col])
            ct, st = np.cos(theta), np.sin(theta)
            rows = work[row - 1 : row + 1, :].copy()
            work[row - 1, :] = ct * rows[0] + st * rows[1]
            work[row, :] = -st * rows[0] + ct * rows[1]
            u = u @ _rotation_unitary(row - 1, -theta)
    if odd:
        u = u @ LOCAL_GAMMAS[3]
    return u


def synthesize_unitary_batch(blocks: np.ndarray, dtype=np.complex128) -> np.ndarray:
    """Vectorized synthesize_unitary over a stack of (B, 4, 4) orthogonals.

    Right-multiplying by cos(h) I + sin(h) gamma_p gamma_{p+1} is expressed
    as one flat GEMM against the constant generator, which keeps the sweep
    BLAS-bound for large stacks.
    """
    work = np.array(blocks, dtype=float)
    b = work.shape[0]
    odd = np.linalg.det(work) < 0
    work[odd] = work[odd] @ np.diag([-1.0, -1.0, -1.0, 1.0])
    u = np.broadcast_to(np.eye(4, dtype=dtype), (b, 4, 4)).copy()
    gg = [m.astype(dtype) for m in _GG]
    for col in range(3):
        for row in range(3, col, -1):
            theta = np.arctan2(work[:, row, col], work[:, row - 1, col])
            ct = np.cos(theta)[:, None]
            st = np.sin(theta)[:, None]
            top = ct * work[:, row - 1, :] + st * work[:, row, :]
            bot = -st * work[:, row - 1, :] + ct * work[:, row, :]
            work[:, row - 1, :] = top
            work[:, row, :] = bot
            half = -0.5 * theta
            ugg = (u.reshape(-1, 4) @ gg[row - 1]).reshape(b, 4, 4)
            u *= np.cos(half).astype(dtype)[:, None, None]
            u += np.sin(half).astype(dtype)[:, None, None] * ugg
    u[odd] = (u[odd].reshape(-1, 4) @ LOCAL_GAMMAS[3].astype(dtype)).reshape(-1, 4, 4)
    return u


def minor_det(q: GlobalOrthogonal | np.ndarray, rows, cols) -> float:
    """det of the submatrix selecting the given 1-based rows and columns."""
    m = q.entries if isinstance(q, GlobalOrthogonal) else np.asarray(q, dtype=float)
    r = np.asarray(sorted(rows), dtype=int) - 1
    c = np.asarray(sorted(cols), dtype=int) - 1
    if r.size != c.size:
        raise ValueError(f"|rows| = {r.size} != |cols| = {c.size}")
    if r.size == 0:
        return 1.0
    return float(np.linalg.det(m[np.ix_(r, c)]))


def circuit_to_json(c: BrickworkCircuit) -> str:
    """Serialize as a JSON array of layers; each gate is its qubit position
    plus 16 row-major block entries."""
    layers = [
        [{"qubit": q, "block": [float(x) for x in blk.entries.reshape(-1)]} for q, blk in layer]
        for layer in c.layers
    ]
    return json.dumps({"n": c.n, "depth": c.depth, "layers": layers})


def circuit_from_json(text: str) -> BrickworkCircuit:
    doc = json.loads(text)
    layers = tuple(
        tuple(
            (int(g["qubit"]), OrthogonalBlock(np.asarray(g["block"], dtype=float).reshape(4, 4)))
            for g in layer
        )
        for layer in doc["layers"]
    )
    return BrickworkCircuit(int(doc["n"]), int(doc["depth"]), layers)
