from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from balanced_voa.rootsys import (
    Factor,
    RootSystem,
    SimpleType,
    SymbolError,
    enumerate_brs,
    factor_central_charge,
    format_symbol,
    is_balanced,
    parse_symbol,
)

from oracles import brute_force_brs, dual_coxeter, type_dim

TYPES = [SimpleType("A", n) for n in range(1, 9)] + [SimpleType("B", n) for n in range(2, 7)] + \
    [SimpleType("C", n) for n in range(3, 7)] + [SimpleType("D", n) for n in range(4, 9)] + \
    [SimpleType(*t) for t in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2))]


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_type_data_matches_table(t):
    assert t.dim == type_dim(t.family, t.rank)
    assert t.dual_coxeter == dual_coxeter(t.family, t.rank)


@pytest.mark.parametrize("text,expected", [
    ("B1,3", "A1,3"),
    ("C1,2", "A1,2"),
    ("C2,5", "B2,5"),
    ("D3,4", "A3,4"),
    ("D2,2^3", "A1,2^6"),
    ("A2,1 A1,1", "A1,1 A2,1"),
    ("O^4 E8,1", "O^4 E8,1"),
    ("O^0", "O^0"),
])
def test_aliases_and_canonical_order(text, expected):
    assert format_symbol(parse_symbol(text)) == expected


@pytest.mark.parametrize("bad", ["", "A0,1", "A1,0", "A1", "X3,1", "E9,1", "A1,1^0", "A1,1 O^3", "O3"])
def test_bad_symbols(bad):
    with pytest.raises(SymbolError):
        parse_symbol(bad)


factors = st.builds(lambda t, k: Factor(t, k), st.sampled_from(TYPES), st.integers(1, 60))


@given(st.integers(0, 5), st.lists(factors, max_size=6))
def test_format_parse_round_trip(f, fs):
    rs = RootSystem(f, fs)
    if rs.is_empty():
        return
    assert parse_symbol(format_symbol(rs)) == rs


@given(st.lists(factors, min_size=1, max_size=5))
def test_central_charge_is_sum(fs):
    rs = RootSystem(0, fs)
    expect = sum(Fraction(f.dim * f.level, f.level + f.dual_coxeter) for f in fs)
    assert rs.central_charge == expect


def test_known_balanced_examples():
    assert is_balanced(parse_symbol("E8,1^4"), 32)
    assert is_balanced(parse_symbol("A1,1^12 A3,2^4"), 32)
    assert not is_balanced(parse_symbol("E8,1^3 D8,1"), 32)   # ratio mismatch
    assert not is_balanced(parse_symbol("E8,1^4"), 40)
    assert is_balanced(parse_symbol("O^24"), 24)


@pytest.mark.parametrize("c", range(1, 7))
def test_enumeration_matches_brute_force(c):
    ours = {tuple(sorted((f.type.family, f.type.rank, f.level) for f in rs.factors)) for rs in enumerate_brs(c)}
    assert ours == brute_force_brs(c)


@pytest.mark.parametrize("c,f", [(c, f) for c in range(1, 10) for f in range(0, 3) if f <= c])
def test_abelian_shift_bijection(c, f):
    assert len(enumerate_brs(c, f)) == len(enumerate_brs(c + 1, f + 1))


def test_pure_abelian_element():
    assert enumerate_brs(5, 5) == {RootSystem(5)}
    assert all(rs.abelian_rank == 2 for rs in enumerate_brs(7, 2))


def test_fractional_central_charge_allowed():
    got = enumerate_brs(Fraction(1, 2) + 7, 0)
    assert all(rs.central_charge == Fraction(15, 2) and is_balanced(rs) for rs in got)


def test_sugawara_charge_equals_c_on_all_c32_systems():
    for rs in enumerate_brs(32):
        total = rs.abelian_rank + sum(factor_central_charge(f) for f in rs.factors)
        assert total == 32


def test_enumerate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_brs(3, 4)
    with pytest.raises(ValueError):
        enumerate_brs(0)


@settings(max_examples=30)
@given(st.integers(1, 8))
def test_every_enumerated_system_is_balanced(c):
    for rs in enumerate_brs(c):
        assert is_balanced(rs, c)
