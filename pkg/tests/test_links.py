from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gtml.gtcore import EMPTY, Signature, signatures, weyl_dimension
from gtml.links import (
    PoleError,
    h_star,
    h_star_expansion,
    iterate_links,
    link_multi,
    link_one_step,
    push_forward,
    relative_dimension,
    verify_theorem_3A,
)

F = Fraction
SMALL = [nu for N in range(1, 5) for nu in signatures(N, -2, 2)]


def test_one_step_examples():
    assert link_one_step(Signature((1, 0))).entries == {(0,): F(1, 2), (1,): F(1, 2)}
    assert link_one_step(Signature((0, 0))).entries == {(0,): 1}
    assert link_one_step(Signature((4,))).entries == {EMPTY: 1}


def test_multi_examples():
    assert link_multi(Signature((1, 0)), 1).entries == {(0,): F(1, 2), (1,): F(1, 2)}
    assert link_multi(Signature((1, 0, 0)), 1).entries == {(0,): F(2, 3), (1,): F(1, 3)}
    assert link_multi(Signature((3, 3, 3, 3)), 2).entries == {(3, 3): 1}


def test_multi_rejects_bad_level():
    with pytest.raises(ValueError):
        link_multi(Signature((1, 0)), 2)
    with pytest.raises(ValueError):
        link_multi(Signature((1, 0)), 0)


@pytest.mark.parametrize("nu", SMALL)
def test_rows_stochastic_and_multi_matches_product(nu):
    assert link_one_step(nu).total() == 1
    for K in range(1, len(nu)):
        row = link_multi(nu, K)
        assert row.total() == 1
        assert row.entries == iterate_links(nu, K).entries


def test_push_forward_of_dimension_measure():
    # Dim-weighted uniform measure on a level pushes to a Dim-weighted measure
    nu = Signature((2, 0, 0))
    out = push_forward({nu: Fraction(1)})
    assert out == dict(link_one_step(nu).entries)


def test_relative_dimension_examples():
    assert relative_dimension(Signature((1,)), Signature((1, 0))) == F(1, 2)
    assert relative_dimension(Signature((0, 0)), Signature((0, 0))) == 1
    assert relative_dimension(Signature((3,)), Signature((1, 0))) == 0


def test_h_star_examples():
    assert h_star(1, Signature((1, 0))) == 2
    assert h_star(2, Signature((1, 0))) == F(3, 2)
    assert h_star(F(5, 7), Signature((0, 0, 0))) == 1


def test_h_star_pole():
    with pytest.raises(PoleError):
        h_star(0, Signature((1, 0)))


def test_theorem_3A_hand_case():
    rep = verify_theorem_3A(Signature((1, 0)), [1])
    assert rep.passed
    assert rep.points[0][1] == rep.points[0][2] == 2


def test_theorem_3A_skips_poles():
    rep = verify_theorem_3A(Signature((1, 0)), [0, F(1, 3)])
    assert rep.skipped == [0]
    assert rep.passed


@given(
    st.sampled_from(SMALL),
    st.fractions(min_value=F(1, 10), max_value=10, max_denominator=50),
)
def test_theorem_3A_random_points(nu, t):
    try:
        lhs = h_star(t, nu)
        rhs = h_star_expansion(t, nu)
    except PoleError:
        return
    assert lhs == rhs


@given(st.sampled_from(SMALL))
def test_relative_dimensions_sum_to_link(nu):
    # Dim_1(k) = 1, so F_k(nu) equals the level-1 link entry
    if len(nu) < 2:
        return
    row = link_multi(nu, 1)
    for (k,), p in row:
        assert relative_dimension(Signature((k,)), nu) == p
    assert sum(weyl_dimension(lam) for lam, _ in link_one_step(nu)) == weyl_dimension(nu)
