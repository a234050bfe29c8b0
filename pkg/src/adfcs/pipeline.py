"""Batched shadow-sampling pipeline for the million-shot experiment loops.

Everything here reproduces the scalar contract paths in `shadow` exactly
(up to the reduced float precision used for state evolution, which only
feeds the Born sampler); per-sample computations are independent, so
results do not depend on batch partitioning.
"""

from __future__ import annotations

import numpy as np

from .matchgate import layer_qubit_positions, sample_haar_o4_batch, synthesize_unitary_batch

__all__ = [
    "sample_shadow_batch",
    "kernel_batch",
    "pfaffian_batch",
    "HAVE_NUMBA",
]

try:  # numba accelerates the per-sample gate stencils; numpy path is equivalent
    import numba

    # workqueue is fork-safe; the OpenMP layer aborts under worker pools
    numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _gate_schedule(n: int, d: int) -> np.ndarray:
    """0-based first-qubit position of every gate, in application order."""
    qs = []
    for ell in range(1, d + 1):
        qs.extend(q - 1 for q in layer_qubit_positions(n, ell))
    return np.asarray(qs, dtype=np.int64)


def _compose_global_q(blocks: np.ndarray, qubits: np.ndarray, n: int) -> np.ndarray:
    """Global orthogonals from per-gate blocks, (B, G, 4, 4) -> (B, 2n, 2n).

    Odd-parity blocks (det = -1) negate every row above their own four:
    the embedding of an odd gate carries the fermionic parity tail.
    """
    b = blocks.shape[0]
    q = np.broadcast_to(np.eye(2 * n), (b, 2 * n, 2 * n)).copy()
    signs = np.sign(np.linalg.det(blocks))
    g = 0
    total = qubits.size
    while g < total:
        # group the contiguous run of gates belonging to one layer
        run_end = g
        while run_end + 1 < total and qubits[run_end + 1] > qubits[run_end]:
            run_end += 1
        g0, g1 = g, run_end + 1
        r0 = 2 * int(qubits[g0])
        r1 = r0 + 4 * (g1 - g0)
        view = q[:, r0:r1, :].reshape(b, g1 - g0, 4, 2 * n)
        q[:, r0:r1, :] = np.matmul(blocks[:, g0:g1], view).reshape(b, r1 - r0, 2 * n)
        # parity tails: rows above gate i flip by sign_i (disjoint blocks commute)
        tail = np.ones((b, 2 * n))
        for gi in range(g0, g1):
            top = 2 * int(qubits[gi]) + 4
            tail[:, top:] *= signs[:, gi : gi + 1]
        q *= tail[:, :, None]
        g = g1
    return q


_GG_STACK = None
_G4_MAT = None


def _local_generators():
    """(3, 4, 4) stack of gamma_p gamma_{p+1} products and the gamma_4 matrix."""
    global _GG_STACK, _G4_MAT
    if _GG_STACK is None:
        from .matchgate import LOCAL_GAMMAS

        _GG_STACK = np.stack(
            [LOCAL_GAMMAS[p] @ LOCAL_GAMMAS[p + 1] for p in range(3)]
        ).astype(np.complex128)
        _G4_MAT = LOCAL_GAMMAS[3].astype(np.complex128)
    return _GG_STACK, _G4_MAT


if HAVE_NUMBA:

    @numba.njit(parallel=True, fastmath=True, cache=True)
    def _prepare_gates_numba(gauss, coins, gg, g4, blocks, unis):  # pragma: no cover
        """Fused Haar orthogonalization + Givens synthesis, one gate per slot.

        Reproduces sample_haar_o4_batch followed by synthesize_unitary_batch.
        """
        m = gauss.shape[0]
        for b in numba.prange(m):
            w = blocks[b]
            for r in range(4):
                for c in range(4):
                    w[r, c] = gauss[b, r, c]
            # modified Gram-Schmidt on columns, positive normalization
            for c in range(4):
                for p in range(c):
                    dot = 0.0
                    for r in range(4):
                        dot += w[r, p] * w[r, c]
                    for r in range(4):
                        w[r, c] -= dot * w[r, p]
                nrm = 0.0
                for r in range(4):
                    nrm += w[r, c] * w[r, c]
                nrm = np.sqrt(nrm)
                for r in range(4):
                    w[r, c] /= nrm
            if coins[b] < 0.5:
                for c in range(4):
                    w[3, c] = -w[3, c]
            # 4x4 determinant sign via cofactor expansion
            det = (
                w[0, 0] * (
                    w[1, 1] * (w[2, 2] * w[3, 3] - w[2, 3] * w[3, 2])
                    - w[1, 2] * (w[2, 1] * w[3, 3] - w[2, 3] * w[3, 1])
                    + w[1, 3] * (w[2, 1] * w[3, 2] - w[2, 2] * w[3, 1])
                )
                - w[0, 1] * (
                    w[1, 0] * (w[2, 2] * w[3, 3] - w[2, 3] * w[3, 2])
                    - w[1, 2] * (w[2, 0] * w[3, 3] - w[2, 3] * w[3, 0])
                    + w[1, 3] * (w[2, 0] * w[3, 2] - w[2, 2] * w[3, 0])
                )
                + w[0, 2] * (
                    w[1, 0] * (w[2, 1] * w[3, 3] - w[2, 3] * w[3, 1])
                    - w[1, 1] * (w[2, 0] * w[3, 3] - w[2, 3] * w[3, 0])
                    + w[1, 3] * (w[2, 0] * w[3, 1] - w[2, 1] * w[3, 0])
                )
                - w[0, 3] * (
                    w[1, 0] * (w[2, 1] * w[3, 2] - w[2, 2] * w[3, 1])
                    - w[1, 1] * (w[2, 0] * w[3, 2] - w[2, 2] * w[3, 0])
                    + w[1, 2] * (w[2, 0] * w[3, 1] - w[2, 1] * w[3, 0])
                )
            )
            odd = det < 0.0
            work = np.empty((4, 4), dtype=np.float64)
            for r in range(4):
                for c in range(4):
                    work[r, c] = w[r, c]
            if odd:
                for r in range(4):
                    work[r, 0] = -work[r, 0]
                    work[r, 1] = -work[r, 1]
                    work[r, 2] = -work[r, 2]
            u = np.zeros((4, 4), dtype=np.complex128)
            for r in range(4):
                u[r, r] = 1.0
            for col in range(3):
                for row in range(3, col, -1):
                    theta = np.arctan2(work[row, col], work[row - 1, col])
                    ct = np.cos(theta)
                    st = np.sin(theta)
                    for c in range(4):
                        top = ct * work[row - 1, c] + st * work[row, c]
                        bot = -st * work[row - 1, c] + ct * work[row, c]
                        work[row - 1, c] = top
                        work[row, c] = bot
                    ch = np.cos(-0.5 * theta)
                    sh = np.sin(-0.5 * theta)
                    gen = gg[row - 1]
                    for r in range(4):
                        n0 = ch * u[r, 0] + sh * (
                            u[r, 0] * gen[0, 0] + u[r, 1] * gen[1, 0]
                            + u[r, 2] * gen[2, 0] + u[r, 3] * gen[3, 0]
                        )
                        n1 = ch * u[r, 1] + sh * (
                            u[r, 0] * gen[0, 1] + u[r, 1] * gen[1, 1]
                            + u[r, 2] * gen[2, 1] + u[r, 3] * gen[3, 1]
                        )
                        n2 = ch * u[r, 2] + sh * (
                            u[r, 0] * gen[0, 2] + u[r, 1] * gen[1, 2]
                            + u[r, 2] * gen[2, 2] + u[r, 3] * gen[3, 2]
                        )
                        n3 = ch * u[r, 3] + sh * (
                            u[r, 0] * gen[0, 3] + u[r, 1] * gen[1, 3]
                            + u[r, 2] * gen[2, 3] + u[r, 3] * gen[3, 3]
                        )
                        u[r, 0] = n0
                        u[r, 1] = n1
                        u[r, 2] = n2
                        u[r, 3] = n3
            if odd:
                for r in range(4):
                    n0 = u[r, 0] * g4[0, 0] + u[r, 1] * g4[1, 0] + u[r, 2] * g4[2, 0] + u[r, 3] * g4[3, 0]
                    n1 = u[r, 0] * g4[0, 1] + u[r, 1] * g4[1, 1] + u[r, 2] * g4[2, 1] + u[r, 3] * g4[3, 1]
                    n2 = u[r, 0] * g4[0, 2] + u[r, 1] * g4[1, 2] + u[r, 2] * g4[2, 2] + u[r, 3] * g4[3, 2]
                    n3 = u[r, 0] * g4[0, 3] + u[r, 1] * g4[1, 3] + u[r, 2] * g4[2, 3] + u[r, 3] * g4[3, 3]
                    u[r, 0] = n0
                    u[r, 1] = n1
                    u[r, 2] = n2
                    u[r, 3] = n3
            for r in range(4):
                for c in range(4):
                    unis[b, r, c] = u[r, c]

    @numba.njit(parallel=True, fastmath=True, cache=True)
    def _evolve_and_sample_numba(amps, unis, strides, u, out_idx):  # pragma: no cover
        nb, dim = amps.shape
        ng = unis.shape[1]
        for b in numba.prange(nb):
            a = amps[b]
            for g in range(ng):
                s = strides[g]
                span = 4 * s
                ug = unis[b, g]
                u00 = ug[0, 0]; u01 = ug[0, 1]; u02 = ug[0, 2]; u03 = ug[0, 3]
                u10 = ug[1, 0]; u11 = ug[1, 1]; u12 = ug[1, 2]; u13 = ug[1, 3]
                u20 = ug[2, 0]; u21 = ug[2, 1]; u22 = ug[2, 2]; u23 = ug[2, 3]
                u30 = ug[3, 0]; u31 = ug[3, 1]; u32 = ug[3, 2]; u33 = ug[3, 3]
                for base in range(0, dim, span):
                    for lo in range(s):
                        i0 = base + lo
                        i1 = i0 + s
                        i2 = i1 + s
                        i3 = i2 + s
                        a0 = a[i0]; a1 = a[i1]; a2 = a[i2]; a3 = a[i3]
                        a[i0] = u00 * a0 + u01 * a1 + u02 * a2 + u03 * a3
                        a[i1] = u10 * a0 + u11 * a1 + u12 * a2 + u13 * a3
                        a[i2] = u20 * a0 + u21 * a1 + u22 * a2 + u23 * a3
                        a[i3] = u30 * a0 + u31 * a1 + u32 * a2 + u33 * a3
            total = 0.0
            for x in range(dim):
                c = a[x]
                total += c.real * c.real + c.imag * c.imag
            threshold = u[b] * total
            acc = 0.0
            sel = dim - 1
            for x in range(dim):
                c = a[x]
                acc += c.real * c.real + c.imag * c.imag
                if acc >= threshold:
                    sel = x
                    break
            out_idx[b] = sel


def _prepare_gates(count: int, rng: np.random.Generator, dtype):
    """Haar O(4) blocks plus their synthesized two-qubit unitaries.

    Consumes the generator in the same order on both code paths
    (normals, then coin uniforms), so a fixed seed fixes the gates.
    """
    if HAVE_NUMBA:
        gauss = rng.standard_normal((count, 4, 4))
        coins = rng.random(count)
        blocks = np.empty((count, 4, 4))
        unis = np.empty((count, 4, 4), dtype=dtype)
        gg, g4 = _local_generators()
        _prepare_gates_numba(gauss, coins, gg, g4, blocks, unis)
        return blocks, unis
    blocks = sample_haar_o4_batch(rng, count)
    return blocks, synthesize_unitary_batch(blocks, dtype=dtype)


def _evolve_and_sample_numpy(amps, unis, strides, u):
    nb, dim = amps.shape
    for g in range(unis.shape[1]):
        s = int(strides[g])
        view = amps.reshape(nb, dim // (4 * s), 4, s)
        view[:] = np.matmul(unis[:, g][:, None, :, :], view)
    p = np.abs(amps) ** 2
    cum = np.cumsum(p, axis=1)
    thresholds = u * cum[:, -1]
    return (cum < thresholds[:, None]).sum(axis=1).clip(max=dim - 1)


def sample_shadow_batch(
    psi_amplitudes: np.ndarray,
    n: int,
    d: int,
    count: int,
    rng: np.random.Generator,
    dtype=np.complex64,
):
    """Draw `count` shadow samples from a dense state.

    Returns (q, outcomes): global orthogonals (count, 2n, 2n) float64 and
    outcome bits (count, n) uint8.  State evolution runs at `dtype`
    precision, which only feeds the Born sampler.
    """
    dim = 1 << n
    qubits = _gate_schedule(n, d)
    ng = qubits.size
    if ng == 0:
        q = np.broadcast_to(np.eye(2 * n), (count, 2 * n, 2 * n)).copy()
        p = np.abs(np.asarray(psi_amplitudes, dtype=complex)) ** 2
        cum = np.cumsum(p)
        idx = np.searchsorted(cum, rng.random(count) * cum[-1], side="right")
        idx = np.clip(idx, 0, dim - 1)
    else:
        blocks, unis = _prepare_gates(count * ng, rng, np.complex128 if dtype is None else dtype)
        blocks = blocks.reshape(count, ng, 4, 4)
        q = _compose_global_q(blocks, qubits, n)
        unis = np.ascontiguousarray(unis.reshape(count, ng, 4, 4))
        amps = np.broadcast_to(np.asarray(psi_amplitudes, dtype=dtype), (count, dim)).copy()
        strides = (1 << (n - qubits - 2)).astype(np.int64)
        u = rng.random(count)
        if HAVE_NUMBA:
            idx = np.empty(count, dtype=np.int64)
            _evolve_and_sample_numba(amps, unis, strides, u, idx)
        else:
            idx = _evolve_and_sample_numpy(amps, unis, strides, u)
    shifts = n - 1 - np.arange(n)
    outcomes = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
    return q, outcomes


def pfaffian_batch(sub: np.ndarray) -> np.ndarray:
    """Pfaffians of a stack of small antisymmetric matrices (B, k, k), k even."""
    k = sub.shape[-1]
    if k == 0:
        return np.ones(sub.shape[0])
    if k == 2:
        return sub[:, 0, 1].copy()
    if k == 4:
        return (
            sub[:, 0, 1] * sub[:, 2, 3]
            - sub[:, 0, 2] * sub[:, 1, 3]
            + sub[:, 0, 3] * sub[:, 1, 2]
        )
    # expand along the first row: Pf(A) = sum_j (-1)^j a_{0j} Pf(A w/o {0, j})
    total = np.zeros(sub.shape[0])
    rest = list(range(k))
    for j in range(1, k):
        keep = [x for x in rest if x not in (0, j)]
        minor = sub[:, keep][:, :, keep]
        total += ((-1) ** (j - 1)) * sub[:, 0, j] * pfaffian_batch(minor)
    return total


def kernel_batch(q: np.ndarray, outcomes: np.ndarray, index_sets) -> np.ndarray:
    """<b| U gamma_S U^dag |b> for each sample and each index set.

    Parameters
    ----------
    q : (B, 2n, 2n) global orthogonals
    outcomes : (B, n) bits
    index_sets : sequence of 1-based index tuples with even size

    Returns
    -------
    (B, len(index_sets)) complex values i^{k/2} Pf((Q^T M_b Q)|_S).
    """
    nb, n = outcomes.shape
    signs = 1.0 - 2.0 * outcomes.astype(float)
    # rows of M_b @ Q without materializing M_b
    mq = np.empty_like(q)
    mq[:, 0::2, :] = signs[:, :, None] * q[:, 1::2, :]
    mq[:, 1::2, :] = -signs[:, :, None] * q[:, 0::2, :]
    cov = np.matmul(q.transpose(0, 2, 1), mq)
    out = np.empty((nb, len(index_sets)), dtype=complex)
    for col, s in enumerate(index_sets):
        idx = np.asarray(sorted(s), dtype=int) - 1
        k = idx.size
        if k % 2 != 0:
            raise ValueError(f"even |S| required, got {tuple(s)}")
        if k == 0:
            out[:, col] = 1.0
            continue
        sub = cov[:, idx][:, :, idx]
        out[:, col] = (1j ** (k // 2)) * pfaffian_batch(sub)
    return out
