import numpy as np
import pytest

from adfcs.depth_select import (
    DepthRecommendation,
    recommend_depth_formula,
    recommend_depth_search,
)
from adfcs.majorana import kitaev_chain


def test_formula_examples():
    rec = recommend_depth_formula(10, 3, c=2.0)
    assert rec.d_star == 9 and rec.mode == "formula"
    rec = recommend_depth_formula(10, 1, c=2.0)
    assert rec.d_star in (2, 3)  # round(2*1) = 2, odd-rounded to 3
    assert recommend_depth_formula(10, 1, c=2.0, round_to_odd=False).d_star == 2
    with pytest.raises(ValueError):
        recommend_depth_formula(2, 3)
    with pytest.raises(ValueError):
        recommend_depth_formula(10, 0)


def test_search_basics():
    rec = recommend_depth_search(10, [(1, 2)], eta=0.5)
    assert rec.mode == "search" and rec.d_star <= 3
    assert all(a >= 0.5 / 19 - 1e-12 for a in rec.achieved_alpha.values())
    # far pair needs depth
    far = recommend_depth_search(10, [(1, 16)], eta=0.5)
    assert far.d_star >= 9
    with pytest.raises(ValueError):
        recommend_depth_search(10, [(1, 2)], eta=0.0)


def test_search_monotone_in_eta():
    prev = 0
    for eta in (0.2, 0.5, 0.8, 1.0):
        d = recommend_depth_search(8, [(1, 6)], eta=eta).d_star
        assert d >= prev
        prev = d


def test_search_kitaev_small_depth():
    h = kitaev_chain(10, 2.0, 1.0, 0.4)
    rec = recommend_depth_search(10, [t.indices for t in h.terms], eta=0.5)
    assert rec.d_star <= 3


def test_formula_vs_search_calibration():
    # search depth should not exceed the formula recommendation in >= 90%
    # of the grid with the default constant
    wins = 0
    total = 0
    for n in (8, 10, 12):
        for dint in range(1, 9):
            s = (1, 1 + dint)
            formula = recommend_depth_formula(n, dint).d_star
            search = recommend_depth_search(n, [s]).d_star
            total += 1
            wins += search <= formula
    assert wins / total >= 0.9, (wins, total)
