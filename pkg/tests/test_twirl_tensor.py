from fractions import Fraction

import numpy as np
import pytest

from adfcs.twirl_tensor import (
    LABEL_TO_SUBSET,
    PAULI_PAIR_LABELS,
    SUBSET_TO_LABEL,
    subset_transitions,
    t_tensor,
    t_tensor_monte_carlo,
)

from oracles import twirl_grid_fractions


def test_grid_entry_for_entry():
    tensor = t_tensor()
    grid = twirl_grid_fractions()
    for out in PAULI_PAIR_LABELS:
        for inp in PAULI_PAIR_LABELS:
            assert tensor.entry(out, inp) == grid[(out, inp)], (out, inp)


def test_spot_values():
    tensor = t_tensor()
    assert tensor.entry("II", "II") == Fraction(1)
    assert tensor.entry("IX", "IX") == Fraction(1, 4)
    assert tensor.entry("XX", "IZ") == Fraction(1, 6)  # column IZ feeds XX
    # the caption's T^{XY}_{YZ} example contradicts the grid; the grid wins
    assert tensor.entry("XY", "YZ") == Fraction(0)


def test_columns_exactly_stochastic():
    tensor = t_tensor()
    assert all(c == Fraction(1) for c in tensor.column_sums())


def test_subset_pauli_dictionary():
    assert SUBSET_TO_LABEL[0b0000] == "II"
    assert SUBSET_TO_LABEL[0b0001] == "XI"
    assert SUBSET_TO_LABEL[0b0011] == "ZI"
    assert SUBSET_TO_LABEL[0b1100] == "IZ"
    assert SUBSET_TO_LABEL[0b1111] == "ZZ"
    assert LABEL_TO_SUBSET["ZY"] == 0b1000


def test_subset_transitions_sector_structure():
    table = subset_transitions()
    from math import comb

    for mask in range(16):
        m = bin(mask).count("1")
        outs = table[mask]
        assert len(outs) == comb(4, m)
        assert all(bin(t).count("1") == m for t, _ in outs)
        assert abs(sum(w for _, w in outs) - 1.0) < 1e-15


def test_monte_carlo_matches_grid_small():
    mean, stderr = t_tensor_monte_carlo(4000, np.random.default_rng(0))
    target = t_tensor().as_array()
    z = np.abs(mean - target) / np.maximum(stderr, 1e-12)
    assert np.max(z) < 5.0
