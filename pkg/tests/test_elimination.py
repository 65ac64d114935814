import pytest
from hypothesis import given, settings, strategies as st

from balanced_voa.affine import graded_dims, product_graded_dims
from balanced_voa.elimination import (
    PreconditionError,
    TestConfig,
    character_test,
    dimension_test,
    expected_d2,
    jacobi_test,
    run_pipeline,
    vacuum_dim2,
)
from balanced_voa.rootsys import Factor, RootSystem, SimpleType, parse_symbol

SMALL = [SimpleType("A", n) for n in range(1, 4)] + [SimpleType("B", 2), SimpleType("G", 2), SimpleType("D", 4)]


@pytest.mark.parametrize("c,d1,want", [(32, 992, 385520), (32, 0, 139504), (40, 0, 20620), (24, 744, 196884)])
def test_expected_d2(c, d1, want):
    assert expected_d2(c, d1) == want


@pytest.mark.parametrize("symbol,c", [("E8,1^4", 32), ("E8,1^3", 24), ("E8,1^5", 40)])
def test_e8_powers_have_no_room_for_modules(symbol, c):
    # E8,1 has a single integrable module, so V is its own vacuum module
    rs = parse_symbol(symbol)
    assert vacuum_dim2(rs) == expected_d2(c, rs.dim)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(SMALL), st.integers(1, 3)), min_size=1, max_size=3))
def test_vacuum_dim2_is_product_coefficient(parts):
    rs = RootSystem(0, [Factor(t, k) for t, k in parts])
    series = [list(graded_dims(f, (0,) * f.type.rank, 2).dims) for f in rs.factors]
    assert vacuum_dim2(rs) == product_graded_dims(series, 2)[2]


@pytest.mark.parametrize("symbol", ["E8,1^4", "A1,1^32", "B2,2^8", "D4,8^2"])
def test_dimension_test_passes_known_survivors(symbol):
    assert dimension_test(parse_symbol(symbol)).status == "Passed"


def test_dimension_test_rules_out_row_303():
    v = dimension_test(parse_symbol("A1,1^6 E6,6"))
    assert v.ruled_out and v.stage == "Dim"


def test_label_cap_gives_inconclusive():
    v = dimension_test(parse_symbol("A1,64^3 A4,160"), TestConfig(label_cap=10))
    assert v.status == "Inconclusive" and v.stage == "Dim"


@pytest.mark.parametrize("symbol", ["A1,1^24", "A1,2^16", "A1,4^12", "D16,1 E8,1", "A2,1^12"])
def test_c24_holomorphic_theories_pass_dim_and_jac(symbol):
    rs = parse_symbol(symbol)
    assert dimension_test(rs).status == "Passed"
    assert jacobi_test(rs).status == "Passed"


def test_preconditions():
    with pytest.raises(PreconditionError):
        dimension_test(parse_symbol("O^1 A1,1^31"))
    with pytest.raises(PreconditionError):
        dimension_test(parse_symbol("E8,1^2"))
    with pytest.raises(PreconditionError):
        run_pipeline(parse_symbol("A1,1^16"))


def test_pipeline_stops_at_first_elimination():
    res = run_pipeline(parse_symbol("A1,1^6 E6,6"))
    assert [v.stage for v in res.stages] == ["Dim"]
    assert res.final.ruled_out and res.final.stage == "Dim"
    assert res.to_json()["final"] == "RuledOut(Dim)"


def test_pipeline_respects_stage_selection():
    res = run_pipeline(parse_symbol("E8,1^4"), TestConfig(stages=("jac",)))
    assert [v.stage for v in res.stages] == ["Jac"]
    assert res.final.status == "Passed" and res.final.stage is None


def test_character_test_e8_fourth_power():
    v = character_test(parse_symbol("E8,1^4"), N=3)
    assert v.status == "Passed"
