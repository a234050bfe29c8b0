import numpy as np
import pytest
from scipy.linalg import schur

from adfcs.dense_sim import apply_circuit, basis_state, born_probabilities, expectation
from adfcs.gaussian_sim import (
    CovarianceMatrix,
    basis_covariance,
    evolve,
    gaussian_expectation,
    pfaffian,
    sample_outcome_gaussian,
    vacuum_covariance,
)
from adfcs.majorana import MajoranaString
from adfcs.matchgate import (
    OrthogonalBlock,
    circuit_to_global_q,
    embed_block,
    sample_brickwork,
    sample_haar_o4,
    synthesize_unitary,
)
from adfcs.dense_sim import StateVector

from oracles import embed_two_qubit

RNG = np.random.default_rng(99)


def pfaffian_schur(matrix):
    # independent oracle, as in standard skew-symmetric practice
    if matrix.shape[0] == 0:
        return 1.0
    blocks, o = schur(matrix)
    a = np.diag(blocks, 1)[::2]
    return np.prod(a) * np.linalg.det(o)


def test_basis_covariance_blocks():
    m = basis_covariance([0, 0])
    assert m.entries[0, 1] == 1.0 and m.entries[2, 3] == 1.0
    m = basis_covariance([1, 0])
    assert m.entries[0, 1] == -1.0 and m.entries[2, 3] == 1.0
    assert np.array_equal(m.entries, -m.entries.T)
    assert m.is_valid_state()


def test_evolve_identity_and_antisymmetry():
    m = basis_covariance([0, 1, 0])
    out = evolve(m, np.eye(6))
    assert np.allclose(out.entries, m.entries)
    c = sample_brickwork(4, 5, RNG)
    q = circuit_to_global_q(c)
    out = evolve(basis_covariance([0, 1, 1, 0]), q)
    assert np.array_equal(out.entries, -out.entries.T)
    with pytest.raises(ValueError):
        evolve(m, np.eye(8))


def test_evolve_matches_dense_odd_n():
    # n = 3 via a hand-layered circuit (gates on qubit pairs (1,2) then (2,3))
    n = 3
    bits = [0, 1, 0]
    blocks = [sample_haar_o4(RNG) for _ in range(2)]
    u = np.eye(2**n, dtype=complex)
    q = np.eye(2 * n)
    for qubit, blk in zip((1, 2), blocks):
        u = embed_two_qubit(n, qubit, synthesize_unitary(blk)) @ u
        q = embed_block(n, qubit, blk) @ q
    psi = StateVector(n, u @ basis_state(n, bits).amplitudes)
    cov = evolve(basis_covariance(bits), q)
    for i in range(1, 2 * n + 1):
        for j in range(i + 1, 2 * n + 1):
            s = MajoranaString(n, (i, j))
            assert abs(gaussian_expectation(cov, s) - expectation(psi, s)) < 1e-8


def test_pfaffian_small_and_random():
    assert pfaffian(np.zeros((0, 0))) == 1.0
    assert pfaffian(np.array([[0.0, 1.7], [-1.7, 0.0]])) == pytest.approx(1.7)
    a = RNG.standard_normal((4, 4))
    a = a - a.T
    closed = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert pfaffian(a) == pytest.approx(closed)
    for dim in (6, 8, 12):
        b = RNG.standard_normal((dim, dim))
        b = b - b.T
        det = np.linalg.det(b)
        assert abs(pfaffian(b) ** 2 - det) < 1e-8 * abs(det)
        assert abs(pfaffian(b) - pfaffian_schur(b)) < 1e-8 * abs(pfaffian(b))
    with pytest.raises(ValueError):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        pfaffian(np.ones((2, 2)))


def test_pfaffian_orthogonal_congruence():
    from adfcs.matchgate import sample_haar_o4_batch

    for _ in range(5):
        dim = 8
        a = RNG.standard_normal((dim, dim))
        a = a - a.T
        c = sample_brickwork(4, 4, np.random.default_rng(int(RNG.integers(1 << 30))))
        q = circuit_to_global_q(c).entries
        lhs = pfaffian(q @ a @ q.T)
        rhs = np.linalg.det(q) * pfaffian(a)
        assert abs(lhs - rhs) < 1e-8 * abs(rhs)


def test_gaussian_expectation_examples():
    m = vacuum_covariance(2)
    assert gaussian_expectation(m, MajoranaString(2, (1, 2))) == pytest.approx(1j)
    assert gaussian_expectation(m, MajoranaString(2, (1, 3))) == 0
    assert gaussian_expectation(m, MajoranaString(2, ())) == 1
    with pytest.raises(ValueError):
        gaussian_expectation(m, MajoranaString(2, (1, 2, 3)))


def test_convention_lock_gaussian_vs_dense():
    # one test pins the evolve direction and the Pfaffian phase together
    n = 4
    worst = 0.0
    for _ in range(200):
        bits = RNG.integers(0, 2, n)
        c = sample_brickwork(n, int(RNG.integers(1, 6)), RNG)
        q = circuit_to_global_q(c)
        psi = apply_circuit(basis_state(n, bits), c)
        cov = evolve(basis_covariance(bits), q)
        k = int(RNG.choice([2, 4]))
        idx = tuple(sorted(int(v) + 1 for v in RNG.choice(2 * n, k, replace=False)))
        s = MajoranaString(n, idx)
        worst = max(worst, abs(gaussian_expectation(cov, s) - expectation(psi, s)))
    assert worst < 1e-8


def test_gaussian_sampler_fixed_points():
    rng = np.random.default_rng(17)
    bits = [1, 0, 1]
    m = basis_covariance(bits)
    for _ in range(10):
        assert np.array_equal(sample_outcome_gaussian(m, rng), bits)
    out = evolve(vacuum_covariance(3), np.eye(6))
    assert not sample_outcome_gaussian(out, rng).any()


def test_gaussian_sampler_marginals():
    rng = np.random.default_rng(23)
    n = 4
    c = sample_brickwork(n, 4, rng)
    cov = evolve(basis_covariance([0, 1, 0, 0]), circuit_to_global_q(c))
    shots = 100_000
    counts = np.zeros(n)
    for _ in range(shots):
        counts += sample_outcome_gaussian(cov, rng)
    for j in range(n):
        p = 0.5 * (1.0 - cov.entries[2 * j, 2 * j + 1])
        se = np.sqrt(max(p * (1 - p), 1e-12) / shots)
        assert abs(counts[j] / shots - p) < 3.5 * se


def test_gaussian_sampler_tvd_vs_dense():
    rng = np.random.default_rng(31)
    n = 6
    bits = [0, 0, 1, 0, 1, 0]
    c = sample_brickwork(n, 5, rng)
    q = circuit_to_global_q(c)
    cov = evolve(basis_covariance(bits), q)
    psi = apply_circuit(basis_state(n, bits), c)
    shots = 100_000
    counts = np.zeros(2**n)
    for _ in range(shots):
        b = sample_outcome_gaussian(cov, rng)
        counts[int("".join(map(str, b)), 2)] += 1
    tvd = 0.5 * np.abs(counts / shots - born_probabilities(psi)).sum()
    assert tvd < 0.02


def test_invalid_covariance_rejected():
    with pytest.raises(ValueError):
        CovarianceMatrix(2, np.ones((4, 4)))
    bad = np.zeros((4, 4))
    bad[0, 1], bad[1, 0] = 2.0, -2.0  # eigenvalue of iM outside [-1, 1]
    assert not CovarianceMatrix(2, bad).is_valid_state()
