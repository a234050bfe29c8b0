from fractions import Fraction
from math import comb, exp, log, sqrt

import numpy as np
import pytest

from adfcs.alpha_engines import (
    alpha_exact_dp,
    alpha_fcs_limit,
    alpha_k_product,
    alpha_monte_carlo,
    alpha_pn_exact,
    alpha_slrw_poisson,
    alpha_slrw_sum,
    majorana_to_y,
    pair_chain_corrections,
    pair_partitions,
    slrw_deviation,
    slrw_propagator,
    slrw_propagator_row,
)
from adfcs.twirl_tensor import LocalTwirlTensor, t_tensor
from adfcs.validation import check_dp_vs_mc


def test_dp_depth_zero():
    assert alpha_exact_dp(4, 0, (1, 2)).value == 1.0
    assert alpha_exact_dp(4, 0, (1, 3)).value == 0.0
    assert alpha_exact_dp(4, 0, ()).value == 1.0


def test_dp_frozen_values():
    # one gate saturates n=2: uniform over the six 2-subsets, two paired
    assert abs(alpha_exact_dp(2, 1, (1, 2)).value - 1 / 3) < 1e-15
    # hand-enumerated three-layer walk at n=4 (два independent routes agree)
    assert abs(alpha_exact_dp(4, 3, (1, 2)).value - 5 / 27) < 1e-14
    assert abs(alpha_exact_dp(8, 3, (1, 6)).value - 13 / 144) < 1e-14
    with pytest.raises(ValueError):
        alpha_exact_dp(5, 1, (1, 2))
    with pytest.raises(ValueError):
        alpha_exact_dp(4, 1, (1, 2, 3))


def test_dp_deep_limit():
    for k in (2, 4):
        s = tuple(range(1, k + 1))
        got = alpha_exact_dp(8, 200, s).value
        want = comb(8, k // 2) / comb(16, k)
        assert abs(got - want) < 1e-6


def test_dp_mass_conservation_and_sector():
    r = alpha_exact_dp(6, 9, (1, 2, 5, 8))
    assert 0.0 <= r.value <= 1.0
    assert r.pruned_mass < 1e-9


def test_monte_carlo_degenerate_and_agreement():
    r = alpha_monte_carlo(4, 0, (1, 2), 10, np.random.default_rng(0))
    assert (r.value, r.stderr) == (1.0, 0.0)
    r = alpha_monte_carlo(4, 0, (1, 3), 10, np.random.default_rng(0))
    assert (r.value, r.stderr) == (0.0, 0.0)
    rng = np.random.default_rng(12)
    mc = alpha_monte_carlo(8, 5, (1, 4), 10_000, rng)
    dp = alpha_exact_dp(8, 5, (1, 4))
    assert abs(mc.value - dp.value) <= 5 * mc.stderr


def test_monte_carlo_deep_limit():
    rng = np.random.default_rng(13)
    mc = alpha_monte_carlo(10, 40, (1, 2), 20_000, rng)
    assert abs(mc.value - 1 / 19) <= 5 * mc.stderr


def test_perturbed_tensor_breaks_dp_vs_mc():
    # nudge one 1/4 entry of the single-mode sector to 0.26; the sampled
    # circuits no longer match the perturbed chain
    rows = [list(r) for r in t_tensor().entries]
    from adfcs.twirl_tensor import PAULI_PAIR_LABELS

    i = PAULI_PAIR_LABELS.index("XI")
    rows[i][i] = Fraction(26, 100)
    bad = LocalTwirlTensor(tuple(tuple(r) for r in rows))
    case = (4, 2, (4, 5))  # split subset: the size-1 sector feeds directly
    check = check_dp_vs_mc(tensor=bad, trials=400_000, case=case)
    assert not check["passed"], check
    assert check_dp_vs_mc(trials=400_000, case=case)["passed"]


def test_pair_chain_matches_dp():
    for n in (4, 8):
        for d in (3, 5, 7):
            for i in range(1, 2 * n + 1):
                for j in range(i + 1, 2 * n + 1):
                    if (i, j) not in [(1, 2), (1, 6), (2, 7), (3, 8), (1, 8)]:
                        continue
                    ya, yb = sorted((majorana_to_y(i), majorana_to_y(j)))
                    a = alpha_exact_dp(n, d, (i, j)).value
                    b = alpha_pn_exact(n, d, ya, yb).value
                    assert abs(a - b) < 1e-10, (n, d, i, j)


def test_pair_chain_correction_rows():
    # interior diagonal row carries the documented coefficients
    rows = pair_chain_corrections(3, 3, 6)
    table = {(a, b): f for a, b, f in rows}
    assert table[(2, 2)] == Fraction(-5, 144)
    assert table[(2, 3)] == Fraction(1, 36)
    assert table[(2, 4)] == Fraction(1, 24)
    assert table[(3, 3)] == Fraction(-1, 36)
    assert table[(3, 4)] == Fraction(1, 36)
    assert table[(4, 4)] == Fraction(-5, 144)
    # first-row correction has the -5/144 diagonal term
    first = {(a, b): f for a, b, f in pair_chain_corrections(1, 1, 4)}
    assert first[(1, 1)] == Fraction(-5, 144)
    # adjacent row
    adj = {(a, b): f for a, b, f in pair_chain_corrections(2, 3, 6)}
    assert adj == {(2, 2): Fraction(-1, 48), (3, 3): Fraction(-1, 48), (2, 3): Fraction(1, 24)}
    # far pairs evolve as the bare product ("other case")
    assert pair_chain_corrections(1, 4, 6) == []
    # every row conserves mass
    for N in (2, 4, 6):
        for a in range(1, N + 1):
            for b in range(a, N + 1):
                assert sum(f for _, _, f in pair_chain_corrections(a, b, N)) == 0


def test_slrw_propagator_values():
    assert abs(slrw_propagator(4, 2, 2, 0) - 1.0) < 1e-12
    assert abs(slrw_propagator(4, 2, 3, 0)) < 1e-12
    # boundary stay probability is 3/4
    assert abs(slrw_propagator(2, 1, 1, 1) - 0.75) < 1e-12
    for N in (3, 5, 8):
        for i in (1, 2, N):
            row = slrw_propagator_row(N, i, 7)
            assert abs(row.sum() - 1.0) < 1e-12
            assert np.all(row > -1e-12)


def test_slrw_sum_values_and_limit():
    assert abs(alpha_slrw_sum(4, 3, 1, 1).value - 5 / 24) < 1e-15
    # t -> infinity limit is 1/(3N)
    for n in (8, 12):
        val = alpha_slrw_sum(n, 2001, 1, 2).value
        assert abs(val - 1 / (3 * (n // 2))) < 1e-12


def test_slrw_sum_equals_propagator_product():
    for n in (8, 12):
        N = n // 2
        for d in (1, 3, 9, 21):
            t = (d - 1) // 2
            for i in range(1, N + 1):
                for j in range(i, N + 1):
                    li = slrw_propagator_row(N, i, t)
                    lj = slrw_propagator_row(N, j, t)
                    want = float(li @ lj) / 3.0
                    got = alpha_slrw_sum(n, d, i, j).value
                    assert abs(got - want) < 1e-12


def test_poisson_form():
    # symmetric in i <-> j and consistent with the deep limit
    for n in (8, 16):
        assert (
            alpha_slrw_poisson(n, 25, 2, 3).value == alpha_slrw_poisson(n, 25, 3, 2).value
        )
    n = 8
    big_t = 4001
    val = alpha_slrw_poisson(n, big_t, 1, 1).value
    assert abs(val - 1 / (3 * (n // 2))) < 1e-3
    # approximation quality improves with t at fixed N
    diffs = [
        abs(alpha_slrw_poisson(8, 2 * t + 1, 1, 2).value - alpha_slrw_sum(8, 2 * t + 1, 1, 2).value)
        for t in (10, 40, 160)
    ]
    assert diffs[2] < diffs[1] < diffs[0]


def test_majorana_to_y():
    assert [majorana_to_y(i) for i in (1, 2, 3, 4)] == [1, 1, 1, 1]
    assert majorana_to_y(5) == 2
    assert abs(majorana_to_y(1) - majorana_to_y(8)) == 1


def test_pair_partitions_count():
    assert len(pair_partitions((1, 2, 3, 4))) == 3
    assert len(pair_partitions((1, 2, 3, 4, 5, 6))) == 15


def test_k_product_reduces_to_pair_formula():
    n, d = 10, 7
    for (i, j) in [(1, 4), (2, 9), (5, 16)]:
        want = (
            (3 * n / (2 * (2 * n - 1)))
            * alpha_slrw_sum(n, d, majorana_to_y(i), majorana_to_y(j)).value
        )
        got = alpha_k_product(n, d, (i, j)).value
        assert abs(got - want) < 1e-14


def test_k_product_deep_limit():
    for n, s in [(8, (1, 2, 3, 4)), (10, (1, 4, 9, 14))]:
        got = alpha_k_product(n, 401, s).value
        want = alpha_fcs_limit(n, len(s)).value
        assert abs(got - want) < 1e-8


def test_fcs_limit_values():
    assert alpha_fcs_limit(2, 2).value == pytest.approx(1 / 3)
    assert alpha_fcs_limit(10, 2).value == pytest.approx(1 / 19)
    assert alpha_fcs_limit(8, 4).value == pytest.approx(28 / 1820)
    assert abs(alpha_exact_dp(2, 1, (1, 2)).value - alpha_fcs_limit(2, 2).value) < 1e-15


def test_deviation_basics():
    r0 = slrw_deviation(8, 0, 1, 3)
    assert np.max(np.abs(r0)) < 1e-15
    # frozen boundary value: one step from y_1^2 deviates by -5/144 on the diagonal
    r1 = slrw_deviation(4, 1, 1, 1)
    assert abs(r1[0, 0] + 5 / 144) < 1e-15
    assert abs(r1[0, 1] - 5 / 144) < 1e-15
    for (n, t, i, j) in [(8, 4, 1, 3), (12, 7, 2, 5), (8, 9, 1, 1)]:
        r = slrw_deviation(n, t, i, j)
        assert abs(r.sum()) < 1e-12


def test_deviation_sign_pattern_generic_cases():
    # well-separated pairs show the negative-diagonal pattern
    for (n, t, i, j) in [(8, 4, 1, 3), (8, 6, 1, 4), (12, 8, 2, 6), (12, 10, 1, 5)]:
        r = slrw_deviation(n, t, i, j)
        assert np.max(np.diag(r)) <= 1e-12
        off = r - np.diag(np.diag(r))
        assert np.min(off) >= -1e-12


def test_lemma5_conclusion_bound():
    # -(alpha - alpha_L) * 3 <= (25/72) max_{d' <= d} 3 alpha_L
    for n in (8, 12):
        N = n // 2
        for (i, j) in [(1, 2), (1, 3), (2, 4), (1, N)]:
            best = 0.0
            for d in range(1, 32, 2):
                al = alpha_slrw_sum(n, d, i, j).value
                best = max(best, al)
                if d < 3:
                    continue
                a = alpha_pn_exact(n, d, i, j).value
                assert -(a - al) * 3 <= (25 / 72) * 3 * best + 1e-12, (n, d, i, j)


def test_log_depth_alpha_lower_bound():
    # short-near-distance strings keep alpha above 36^(-k d_int / 2) at
    # depth ~ 2 ln n
    for n in (8, 12, 16):
        d = int(np.ceil(2 * log(n)))
        for s in [(1, 2), (1, 2, 5, 6), (3, 4, 7, 8)]:
            k = len(s)
            dint = max(b - a for a, b in zip(s, s[1:]))
            bound = 36.0 ** (-k * dint / 2)
            assert alpha_exact_dp(n, d, s).value >= bound, (n, d, s)


def test_alpha_result_validation():
    from adfcs.alpha_engines import AlphaResult

    with pytest.raises(ValueError):
        AlphaResult(0.5, "bogus")
    with pytest.raises(ValueError):
        AlphaResult(1.5, "exact_dp")
    r = AlphaResult(-1e-14, "slrw_sum")
    assert r.value == 0.0
