from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gamma as G

from gtml.gtcore import Signature, signatures
from gtml.zw import (
    InadmissibleError,
    ZwParams,
    dougall_check,
    from_point_configuration,
    is_admissible,
    make_pair,
    push_forward,
    push_forward_dense,
    relative_weight,
    to_point_configuration,
    verify_coherency,
    weight_ratio,
    zw_measure,
)

F = Fraction
HALF = F(1, 2)


def gamma_weight(p, nu):
    """M' straight from the Gamma functions (real parameters only)."""
    z, z2, w, w2 = (float(x.real) for x in p.complex_values())
    N = len(nu)
    n = to_point_configuration(nu)
    out = 1.0
    for m in n:
        out /= G(z + N - m) * G(z2 + N - m) * G(w + 1 + m) * G(w2 + 1 + m)
    for i in range(N):
        for j in range(i + 1, N):
            out *= (n[i] - n[j]) ** 2
    return out


def test_admissibility_examples():
    assert is_admissible((HALF, HALF, HALF, HALF))[0]
    ok, reason = is_admissible((F(1), HALF, HALF, HALF))
    assert not ok and "integer" in reason
    assert is_admissible(((HALF, 1), (HALF, -1), F(-1, 4), F(-1, 4)))[0]


def test_admissibility_rejections():
    with pytest.raises(InadmissibleError):
        make_pair((HALF, 1), (HALF, 2))
    with pytest.raises(InadmissibleError):
        ZwParams.from_values(F(1, 3), F(4, 3), HALF, HALF)  # different unit intervals
    with pytest.raises(InadmissibleError):
        ZwParams.from_values(F(-3, 4), F(-3, 4), F(-1, 4), F(-1, 4))  # total -2


def test_conjugate_products_are_rational(params_c):
    assert params_c.z.prod(2) == F(5, 2) ** 2 + 1
    assert params_c.total == F(3, 2)


def test_point_configuration_examples():
    assert to_point_configuration((0, 0)) == (1, 0)
    assert to_point_configuration((1, 0)) == (2, 0)
    assert to_point_configuration((2, 1, 0)) == (4, 2, 0)
    assert from_point_configuration((4, 2, 0)) == (2, 1, 0)


def test_weight_ratio_examples(params_a):
    assert weight_ratio(params_a, (0,), 0, 1) == F(1, 9)
    assert weight_ratio(params_a, (0,), 0, -1) == F(1, 9)
    # nu=(0,0) -> (0,1) is not a signature; the point move collides
    assert weight_ratio(params_a, (0, 0), 1, 1) == 0
    with pytest.raises(ValueError):
        weight_ratio(params_a, (0, 0), 2, 1)
    with pytest.raises(ValueError):
        weight_ratio(params_a, (0, 0), 0, 2)


@pytest.mark.parametrize("nu", [nu for N in (1, 2, 3) for nu in signatures(N, -2, 2)])
def test_weight_ratio_against_gamma(params_a, nu):
    base = gamma_weight(params_a, nu)
    for k in range(len(nu)):
        for d in (1, -1):
            moved = list(nu)
            moved[k] += d
            if any(a < b for a, b in zip(moved, moved[1:])):
                continue
            r = weight_ratio(params_a, nu, k, d)
            assert float(r) == pytest.approx(gamma_weight(params_a, moved) / base, rel=1e-12)


@given(st.integers(-30, 30))
def test_symmetric_parameters_give_even_weight(n):
    p = ZwParams.from_values(F(1, 3), F(2, 3), F(1, 3), F(2, 3))
    assert relative_weight(p, (n,)) == relative_weight(p, (-n,))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=3, unique=True))
def test_relative_weight_telescopes(pts):
    # walking from delta to n one coordinate step at a time multiplies ratios
    p = ZwParams.from_values(HALF, HALF, F(1, 4), F(1, 4))
    n = tuple(sorted(pts, reverse=True))
    nu = list(from_point_configuration(n))
    cur = [0] * len(nu)
    acc = F(1)
    # raise coordinates from the top, lower them from the bottom
    for k in range(len(nu)):
        while cur[k] < nu[k]:
            acc *= weight_ratio(p, cur, k, 1)
            cur[k] += 1
    for k in reversed(range(len(nu))):
        while cur[k] > nu[k]:
            acc *= weight_ratio(p, cur, k, -1)
            cur[k] -= 1
    assert acc == relative_weight(p, n)


def test_measure_n1_symmetric(params_a):
    m = zw_measure(params_a, 1)
    d = m.as_dict()
    assert d[Signature((1,))] / d[Signature((0,))] == pytest.approx(1 / 9, rel=1e-12)
    for nu, v in list(d.items())[:2000]:
        assert d[Signature((-nu[0],))] == pytest.approx(v, rel=1e-9)
    assert m.total() == pytest.approx(1.0, abs=1e-12)
    assert m.residual < 1e-8


@pytest.mark.parametrize("N", [1, 2])
def test_measure_matches_gamma_normalisation(params, N):
    m = zw_measure(params, N)
    assert m.info["gamma_normalized_mass"] == pytest.approx(1.0, abs=max(10 * m.residual, 1e-8))


def test_dougall(params_a, params_c):
    assert dougall_check(params_a, 500).residual <= 1e-8
    assert dougall_check(params_c, 1000).residual <= 1e-6
    rep = dougall_check(params_a, 500)
    assert rep.rhs.real == pytest.approx(2.0, rel=1e-12)  # Gamma(3)/Gamma(2)^4
    with pytest.raises(ValueError):
        dougall_check(params_a, 0)


def test_push_forward_routes_agree(params):
    lam, dense = push_forward_dense(params, 2, 20)
    det = push_forward(params, 2, lam, R=20)
    assert np.max(np.abs(dense - det)) < 1e-12


@pytest.mark.parametrize("N", [2])
def test_coherency_small(params, N):
    rep = verify_coherency(params, N, 1e-8)
    assert rep.passed and rep.tv <= 1e-7


def test_coherency_requires_two_levels(params_a):
    with pytest.raises(ValueError):
        verify_coherency(params_a, 1)
