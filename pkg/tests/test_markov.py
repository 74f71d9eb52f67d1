import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gtml.markov import (
    box_states,
    generator_matrix,
    generator_row,
    intertwining_rows,
    random_moves,
    rates,
    semigroup_apply,
    simulate,
    vandermonde,
    verify_detailed_balance,
    verify_intertwining,
)
from gtml.verify import occupation_tv, stationary_on_box
from gtml.zw import from_point_configuration

F = Fraction


def test_vandermonde_examples():
    assert vandermonde((1, 0)) == 1
    assert vandermonde((4, 2, 0)) == 16
    assert vandermonde((7,)) == 1


def test_rate_examples(params_a):
    assert dict(rates(params_a, (0,))) == {(1,): F(1, 4), (-1,): F(1, 4)}
    r = dict(rates(params_a, (2, 0)))
    assert r[(2, 1)] == F(9, 8)
    assert (1, 1) not in dict(rates(params_a, (1, 0)))
    # frozen full row
    assert r == {(3, 0): F(3, 8), (1, 0): F(25, 8), (2, 1): F(9, 8), (2, -1): F(3, 8)}


@given(st.lists(st.integers(-10, 10), min_size=1, max_size=3, unique=True))
def test_rates_positive_and_rows_sum_to_zero(pts):
    from gtml.verify import PARAM_SETS

    n = tuple(sorted(pts, reverse=True))
    for p in PARAM_SETS.values():
        assert all(r > 0 for _, r in rates(p, n))
        assert sum(generator_row(p, n).values()) == 0


def test_generator_shapes(params_a):
    Q = generator_matrix(params_a, 1, 2)
    assert len(Q.states) == 5
    assert all(abs(i - j) == 1 for i, j in Q.rates)
    assert len(generator_matrix(params_a, 2, 3).states) == 21
    for i, inside in enumerate(Q.interior):
        if inside:
            assert Q.row_sum(i) == 0
    with pytest.raises(ValueError):
        generator_matrix(params_a, 3, 0)


def test_box_states_strictly_decreasing():
    for s in box_states(3, 2):
        assert all(a > b for a, b in zip(s, s[1:]))
    assert len(box_states(3, 2)) == math.comb(5, 3)


def test_simulation_horizon_zero(params_a):
    t = simulate(params_a, (0,), 0.0, seed=1)
    assert t.events == [] and t.initial == (0,)


def test_simulation_reproducible(params_c):
    a = simulate(params_c, (1, 0), 50.0, seed=7)
    b = simulate(params_c, (1, 0), 50.0, seed=7)
    c = simulate(params_c, (1, 0), 50.0, seed=8)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv() != c.to_csv()
    assert a.to_csv().startswith("time,state\n")
    for _, s in a.events:
        assert all(x > y for x, y in zip(s, s[1:]))


def test_simulation_streams_independent(params_a):
    a = simulate(params_a, (0,), 20.0, seed=3, stream=0)
    b = simulate(params_a, (0,), 20.0, seed=3, stream=1)
    assert a.events != b.events


def test_occupation_close_to_stationary(params_a):
    traj = simulate(params_a, (0,), math.inf, seed=12345, max_jumps=20_000)
    assert occupation_tv(params_a, traj) <= 0.05


def test_semigroup_t0(params_a):
    Q = generator_matrix(params_a, 1, 4)
    v = np.linspace(0, 1, len(Q.states))
    assert np.array_equal(semigroup_apply(Q, 0.0, v).vector, v)


@pytest.mark.parametrize("N", [1, 2])
def test_semigroup_stationary(params, N):
    Q = generator_matrix(params, N, 8)
    _, m = stationary_on_box(params, N, 8)
    res = semigroup_apply(Q, 1.0, m)
    tv = 0.5 * np.abs(res.vector - m).sum()
    assert tv <= res.mass_defect + 1e-6
    assert (res.vector >= -1e-15).all() and res.vector.sum() <= 1 + 1e-12
    assert res.poisson_error <= 1e-12


@pytest.mark.parametrize("N, L", [(1, 6), (2, 4)])
def test_semigroup_matches_dense_expm(params, N, L):
    from scipy.linalg import expm

    Q = generator_matrix(params, N, L)
    rng = np.random.default_rng(0)
    v = rng.random(len(Q.states))
    v /= v.sum()
    want = v @ expm(0.7 * Q.to_sparse().toarray())
    got = semigroup_apply(Q, 0.7, v).vector
    assert np.max(np.abs(got - want)) < 1e-10


def test_detailed_balance_examples(params_a):
    assert verify_detailed_balance(params_a, [((0,), (1,))]).passed
    rep = verify_detailed_balance(params_a, [((1,), (1,))])
    assert rep.passed and rep.checked == 1


@pytest.mark.parametrize("N", [1, 2, 3])
def test_detailed_balance_random(params, N):
    moves = random_moves(N, 5, 50, seed=N)
    assert len(moves) == 50
    assert verify_detailed_balance(params, moves).passed


def test_random_moves_reproducible():
    assert random_moves(2, 5, 10, seed=4) == random_moves(2, 5, 10, seed=4)


@pytest.mark.parametrize("N", [2, 3])
def test_intertwining(params, N):
    rep = verify_intertwining(params, N, 4)
    assert rep.passed
    assert rep.rows_checked == len(box_states(N, 3))


def test_intertwining_rows_have_zero_sum(params_a):
    lhs, rhs = intertwining_rows(params_a, from_point_configuration((3, 1)))
    assert sum(lhs.values()) == 0 and lhs == rhs


def test_intertwining_needs_two_levels(params_a):
    with pytest.raises(ValueError):
        verify_intertwining(params_a, 1, 4)
