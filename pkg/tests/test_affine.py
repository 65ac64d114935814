from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from balanced_voa.affine import (
    conformal_weight,
    graded_dims,
    integrable_weights,
    module_orbits,
    product_graded_dims,
    vacuum_depth2_dim,
    vacuum_depth2_moments,
)
from balanced_voa.liealg import coweight_multiple, lie_data, weyl_dim
from balanced_voa.rootsys import Factor, SimpleType, parse_symbol

from oracles import e4, inverse_eta_power, partitions_count, series_mul

TYPES = [SimpleType("A", n) for n in range(1, 9)] + [SimpleType("B", n) for n in range(2, 9)] + \
    [SimpleType("C", n) for n in range(3, 9)] + [SimpleType("D", n) for n in range(4, 9)] + \
    [SimpleType(*t) for t in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2))]


def zero(t):
    return (0,) * t.rank


@pytest.mark.parametrize("t", TYPES, ids=str)
@pytest.mark.parametrize("k", range(1, 6))
def test_vacuum_depth_two_matches_character(t, k):
    f = Factor(t, k)
    dims = graded_dims(f, zero(t), 2).dims
    assert dims[:2] == (1, t.dim)
    assert dims[2] == vacuum_depth2_dim(f)


def test_e8_level_one_vacuum_is_e4_over_eta8():
    N = 6
    expect = series_mul(e4(N), inverse_eta_power(8, N), N)
    assert list(graded_dims(Factor(SimpleType("E", 8), 1), zero(SimpleType("E", 8)), N).dims) == expect


def test_a1_level_one_vacuum_is_theta_over_eta():
    N = 10
    theta = [0] * (N + 1)
    n = 0
    while n * n <= N:
        theta[n * n] += 1 if n == 0 else 2
        n += 1
    expect = series_mul(theta, partitions_count(N), N)
    assert list(graded_dims(Factor(SimpleType("A", 1), 1), (0,), N).dims) == expect


def test_level_two_coset_decomposition():
    # (A1,1 vacuum)^2 = L(2,0) chi_0 + q L(2,2) chi_{1/2}, with Ising characters
    # chi_0 +/- chi_{1/2} read off from prod (1 + q^(n - 1/2)).
    N = 8
    half = [0] * (2 * N + 2)   # index = 2 * exponent
    half[0] = 1
    for n in range(1, N + 2):
        e = 2 * n - 1
        half = [half[i] + (half[i - e] if i >= e else 0) for i in range(len(half))]
    chi0 = [half[2 * m] for m in range(N + 1)]
    chi_half = [half[2 * m + 1] for m in range(N + 1)]   # q^(1/2) stripped
    a1 = Factor(SimpleType("A", 1), 1)
    v1 = list(graded_dims(a1, (0,), N).dims)
    lhs = series_mul(v1, v1, N)
    a12 = Factor(SimpleType("A", 1), 2)
    l0 = list(graded_dims(a12, (0,), N).dims)
    l2 = list(graded_dims(a12, (2,), N).dims)
    assert conformal_weight(a12, (2,)) == Fraction(1, 2)
    rhs = [a + b for a, b in zip(series_mul(l0, chi0, N), [0] + series_mul(l2, chi_half, N)[:N])]
    assert lhs == rhs == [1, 6, 17, 38, 84, 172, 325, 594, 1049]


@given(st.integers(1, 8))
def test_integrable_weight_counts(k):
    assert len(integrable_weights(Factor(SimpleType("A", 1), k))) == k + 1
    assert len(integrable_weights(Factor(SimpleType("A", 2), k))) == (k + 1) * (k + 2) // 2
    e8 = integrable_weights(Factor(SimpleType("E", 8), 1))
    assert e8 == [zero(SimpleType("E", 8))]


def test_conformal_weights():
    assert conformal_weight(Factor(SimpleType("A", 1), 1), (1,)) == Fraction(1, 4)
    for k in range(1, 7):
        for j in range(k + 1):
            assert conformal_weight(Factor(SimpleType("A", 1), k), (j,)) == Fraction(j * (j + 2), 4 * (k + 2))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([t for t in TYPES if t.rank <= 3]), st.integers(1, 4), st.data())
def test_top_level_is_the_finite_module(t, k, data):
    f = Factor(t, k)
    lam = data.draw(st.sampled_from(integrable_weights(f)))
    gd = graded_dims(f, lam, 1).dims
    assert gd[0] == weyl_dim(lie_data(t), lam)


@pytest.mark.parametrize("factor", [Factor(SimpleType("A", 2), 3), Factor(SimpleType("B", 3), 1),
                                    Factor(SimpleType("G", 2), 2)], ids=str)
def test_vacuum_depth2_moments_second_moment(factor):
    d = lie_data(factor.type)
    h = coweight_multiple(d, 0)
    s = vacuum_depth2_moments(factor, h, 2)
    assert s[0] == vacuum_depth2_dim(factor)
    assert s[1] == 0


def test_product_graded_dims():
    a = [1, 2, 3, 4]
    b = [1, 0, 5, 0]
    assert product_graded_dims([a, b], 3) == series_mul(a, b, 3)


def test_module_orbits_counts_labels():
    rs = parse_symbol("A1,1^3")
    orbits = module_orbits(rs, Fraction(1, 4), Fraction(3, 4), integral_only=False)
    weights = sorted(o.conformal_weight for o in orbits)
    assert weights == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert sorted(o.size for o in orbits) == [1, 3, 3]
    assert all(o.top_dim == 2 ** round(o.conformal_weight * 4) for o in orbits)
    assert sum(len(o.labels(rs)) for o in orbits) == 7


@pytest.mark.parametrize("symbol", ["A1,4^16", "D4,8^2", "A2,4 B2,4^2 D4,8", "A1,2^12 G2,4^2", "C4,4^2",
                                    "A1,1^12 A3,2^4", "B2,2^8", "A2,4^7", "A1,48 A2,72 G2,96"])
def test_integral_orbits_agree_with_generic_scan(symbol):
    # the integral-only path looks the last factor's weight up by conformal weight
    rs = parse_symbol(symbol)
    fast = module_orbits(rs, 2, 2, integral_only=True)
    slow = [o for o in module_orbits(rs, 2, 2, integral_only=False) if o.conformal_weight.denominator == 1]
    key = lambda o: (o.conformal_weight, o.parts, o.top_dim, o.size)
    assert sorted(map(key, fast)) == sorted(map(key, slow))
