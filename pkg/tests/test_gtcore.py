import pytest
from hypothesis import given, strategies as st

from gtml.gtcore import (
    EMPTY,
    DimensionError,
    Signature,
    count_paths,
    enumerate_down,
    enumerate_up,
    gt_schemes,
    interlaces,
    parse_signature,
    signatures,
    weyl_dimension,
)


def sig_strategy(max_len=4, lo=-3, hi=3):
    return st.lists(st.integers(lo, hi), min_size=1, max_size=max_len).map(
        lambda xs: Signature(sorted(xs, reverse=True))
    )


def test_signature_rejects_increasing():
    with pytest.raises(ValueError):
        Signature((0, 1))


def test_parse_signature():
    assert parse_signature("2,1,0") == (2, 1, 0)
    assert parse_signature("(3)") == (3,)
    assert parse_signature("") == EMPTY


@pytest.mark.parametrize(
    "lower, upper, expected",
    [((1,), (2, 0), True), ((2,), (1, 0), False), ((1, 0), (1, 0, 0), True)],
)
def test_interlaces(lower, upper, expected):
    assert interlaces(Signature(lower), Signature(upper)) is expected


def test_interlaces_length_mismatch():
    with pytest.raises(DimensionError):
        interlaces(Signature((1, 0)), Signature((1, 0)))


@pytest.mark.parametrize("nu, dim", [((1, 0), 2), ((2, 1, 0), 8), ((4, 4, 4, 4), 1), ((1, 0, 0), 3)])
def test_weyl_dimension_values(nu, dim):
    assert weyl_dimension(Signature(nu)) == dim


def test_count_paths_examples():
    assert count_paths(Signature((0,)), Signature((1, 0))) == 1
    assert count_paths(EMPTY, Signature((2, 1, 0))) == 8
    assert count_paths(Signature((5, 3)), Signature((5, 3))) == 1
    assert count_paths(Signature((3,)), Signature((1, 0))) == 0


def test_count_paths_rejects_longer_bottom():
    with pytest.raises(ValueError):
        count_paths(Signature((1, 0)), Signature((1,)))


def test_enumerate_down_examples():
    assert enumerate_down(Signature((1, 0))) == [(0,), (1,)]
    assert enumerate_down(Signature((0, 0, 0))) == [(0, 0)]
    assert enumerate_down(Signature((2, 0))) == [(0,), (1,), (2,)]
    assert enumerate_down(Signature((7,))) == [EMPTY]


def test_enumerate_up_inverts_down():
    lam = Signature((1, 0))
    ups = list(enumerate_up(lam, -1, 2))
    assert all(lam in enumerate_down(nu) for nu in ups)
    assert set(ups) == {nu for nu in signatures(3, -1, 2) if lam in enumerate_down(nu)}


def test_signature_count():
    # weakly decreasing 4-tuples in [0, 3]: C(7, 4)
    assert len(signatures(4, 0, 3)) == 35


@given(sig_strategy(max_len=4, lo=-2, hi=2))
def test_dimension_equals_brute_force_schemes(nu):
    assert weyl_dimension(nu) == sum(1 for _ in gt_schemes(EMPTY, nu))


@given(sig_strategy(), st.integers(-5, 5))
def test_dimension_shift_invariant(nu, c):
    assert weyl_dimension(nu.shift(c)) == weyl_dimension(nu)


@given(sig_strategy(max_len=4, lo=-2, hi=2))
def test_branching_rule(nu):
    if len(nu) == 1:
        return
    assert weyl_dimension(nu) == sum(weyl_dimension(lam) for lam in enumerate_down(nu))


@given(sig_strategy(max_len=4, lo=-2, hi=2), st.data())
def test_paths_match_brute_force(nu, data):
    K = data.draw(st.integers(1, len(nu)))
    kappa = Signature(sorted(data.draw(st.lists(st.integers(-2, 2), min_size=K, max_size=K)), reverse=True))
    assert count_paths(kappa, nu) == sum(1 for _ in gt_schemes(kappa, nu))
