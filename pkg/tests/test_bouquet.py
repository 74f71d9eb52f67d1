from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gtml.bouquet import (
    ThomaConePoint,
    YoungDiagram as Y,
    binomial_hypothesis,
    dim_young,
    gt_plus_link,
    hook_length_dim,
    partitions,
    relative_dim_young,
    skew_dim,
    yb_compatibility_check,
    yb_link_limit,
    young_link,
)
from gtml.links import link_multi

F = Fraction
HALF = F(1, 2)


def test_diagram_validation():
    with pytest.raises(ValueError):
        Y((1, 2))
    with pytest.raises(ValueError):
        Y((1, 0))
    assert Y().size == 0


def test_thoma_point_validation():
    ThomaConePoint((F(1, 2),), (F(1, 4),), F(1))
    with pytest.raises(ValueError):
        ThomaConePoint((F(1, 2),), (F(1, 2),), F(1, 2))


def test_partition_counts():
    assert [len(partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_dimension_examples():
    assert dim_young(Y()) == 1
    assert dim_young(Y((2, 1))) == 2
    assert dim_young(Y((2, 2))) == 2
    assert dim_young(Y((3, 2, 1))) == 16


@pytest.mark.parametrize("n", range(9))
def test_dim_matches_hook_length(n):
    for lam in partitions(n):
        assert dim_young(lam) == hook_length_dim(lam)


def test_sum_of_squares_is_factorial():
    assert sum(dim_young(l) ** 2 for l in partitions(7)) == 5040


def test_skew_dim_examples():
    assert skew_dim(Y((2, 1)), Y((2, 1))) == 1
    assert skew_dim(Y((2, 1)), Y((1,))) == 2
    assert skew_dim(Y((2, 1)), Y((2,))) == 1
    with pytest.raises(ValueError):
        skew_dim(Y((2,)), Y((1, 1)))


def test_young_link_examples():
    assert young_link(Y((2, 1)), Y((2,))) == HALF
    assert young_link(Y((2, 1)), Y((1, 1))) == HALF
    assert young_link(Y((3,)), Y((1, 1))) == 0
    with pytest.raises(ValueError):
        young_link(Y((1,)), Y((1,)))


@pytest.mark.parametrize("n", range(1, 7))
def test_young_link_stochastic(n):
    for lam in partitions(n):
        for m in range(n):
            assert sum(young_link(lam, mu) for mu in partitions(m)) == 1


def test_relative_dim_examples():
    assert relative_dim_young(Y((2, 1)), Y()) == 1
    assert relative_dim_young(Y((2, 1)), Y((1,))) == 3
    assert relative_dim_young(Y((6,)), Y((1,))) == 6


def test_gt_plus_examples():
    assert gt_plus_link(Y((1,)), 4, Y((1,)), 2) == HALF
    assert gt_plus_link(Y((1,)), 4, Y(), 2) == HALF
    with pytest.raises(ValueError):
        gt_plus_link(Y((1, 1, 1)), 2, Y(), 1)


@given(st.integers(1, 6), st.data())
def test_gt_plus_single_box(N, data):
    Np = data.draw(st.integers(N + 1, 8))
    assert gt_plus_link(Y((1,)), Np, Y((1,)), N) == F(N, Np)


@pytest.mark.parametrize("lam, Np, N", [((2, 1), 5, 3), ((1, 1), 4, 2), ((3,), 4, 1)])
def test_gt_plus_matches_link_multi(lam, Np, N):
    lam = Y(lam)
    row = link_multi(lam.padded(Np), N)
    for mu_sig, p in row:
        mu = Y(x for x in mu_sig if x > 0)
        assert gt_plus_link(lam, Np, mu, N) == p
    assert row.total() == 1


def test_constant_limit_family():
    rep = yb_link_limit(Y((1,)), Y((1,)), HALF, (2, 4, 8, 16))
    assert rep.values == [HALF] * 4
    assert rep.extrapolated == 0.5
    assert rep.realized_ratios == [HALF] * 4


def test_empty_mu_limit():
    rep = yb_link_limit(Y((1,)), Y(), HALF, (2, 4, 8))
    assert rep.values == [HALF] * 3


def test_converging_limit():
    rep = yb_link_limit(Y((2, 1)), Y((1,)), HALF, (5, 10, 20, 40), hypothesis=True)
    d = rep.differences
    assert rep.passed and d[-1] < 1e-2
    assert d == sorted(d, reverse=True)
    # frozen: first value at N=5, N'=10
    assert rep.values[0] == F(25, 66)
    assert abs(rep.extrapolated - float(rep.hypothesis)) < 1e-3


def test_limit_zero_when_not_contained():
    rep = yb_link_limit(Y((2,)), Y((1, 1)), HALF, (4, 8))
    assert rep.values == [0, 0]


def test_binomial_hypothesis_is_stochastic():
    lam = Y((3, 1))
    total = sum(binomial_hypothesis(lam, mu, F(1, 3)) for m in range(5) for mu in partitions(m))
    assert total == 1


def test_compatibility():
    for mu in ((), (1,)):
        rep = yb_compatibility_check((1, 2, 4), Y((1,)), Y(mu), 1)
        assert rep.passed and rep.residual <= 2e-2
    rep = yb_compatibility_check((1, 2, 4), Y(), Y(), 0)
    assert rep.lhs == rep.rhs == 1.0
