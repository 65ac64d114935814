import pytest
from hypothesis import given, settings, strategies as st

from balanced_voa.dgm import (
    LatticeCatalog,
    Realization,
    RealizationError,
    classify_realization,
    fixed_rank,
    image_of_type,
    latticeid_holds,
    orbifold_image,
    orbifold_preimages,
)
from balanced_voa.rootsys import Factor, RootSystem, SimpleType, enumerate_brs, factor_central_charge, format_symbol, parse_symbol

ADE_UP_TO_32 = [SimpleType("A", n) for n in range(1, 33)] + [SimpleType("D", n) for n in range(4, 33)] + \
    [SimpleType("E", n) for n in (6, 7, 8)]

CATALOGS = {32: LatticeCatalog.builtin(32)}


@pytest.mark.parametrize("source,image", [
    ("A1,1", "O^1"),
    ("A2,1", "A1,4"),
    ("A4,1", "B2,2"),
    ("A6,1", "B3,2"),
    ("A3,1", "A1,2^2"),      # D2 = A1^2
    ("A5,1", "A3,2"),        # D3 = A3
    ("A7,1", "D4,2"),
    ("D4,1", "A1,1^4"),
    ("D6,1", "A3,1^2"),
    ("D8,1", "D4,1^2"),
    ("D5,1", "B2,1^2"),
    ("D7,1", "B3,1^2"),
    ("E6,1", "C4,1"),
    ("E7,1", "A7,1"),
    ("E8,1", "D8,1"),
])
def test_table_rows(source, image):
    assert orbifold_image(parse_symbol(source)).root_system() == parse_symbol(image)


@pytest.mark.parametrize("t", ADE_UP_TO_32, ids=str)
def test_row_invariants(t):
    ab, fs = image_of_type(t)
    # central charge is preserved, the fixed rank matches, and the rank identity holds
    assert ab + sum(factor_central_charge(f) for f in fs) == t.rank
    assert fixed_rank(t) == ab + sum(f.type.rank for f in fs)
    assert latticeid_holds(t)


def test_worked_example_round_trip():
    src = parse_symbol("D4,1^3 A5,1^4")
    img = orbifold_image(src).root_system()
    assert img == parse_symbol("A1,1^12 A3,2^4")
    assert src in orbifold_preimages(img)
    assert classify_realization(img, CATALOGS).kind is Realization.OPEN


def test_preimages_of_d8():
    pre = orbifold_preimages(parse_symbol("D8,1"))
    assert parse_symbol("E8,1") in pre
    # a single D8,1 cannot come from D16 (that would give two copies)
    assert parse_symbol("D16,1") not in pre
    assert parse_symbol("D16,1") in orbifold_preimages(parse_symbol("D8,1^2"))


def test_preimages_of_a1_powers():
    assert parse_symbol("D4,1") in orbifold_preimages(parse_symbol("A1,1^4"))
    assert parse_symbol("D4,1^8") in orbifold_preimages(parse_symbol("A1,1^32"))


def test_preimage_of_b22_power():
    assert parse_symbol("A4,1^8") in orbifold_preimages(parse_symbol("B2,2^8"))


lattice_types = st.sampled_from([t for t in ADE_UP_TO_32 if t.rank <= 10])


@settings(max_examples=60, deadline=None)
@given(st.lists(lattice_types, min_size=1, max_size=4))
def test_preimage_round_trip(types):
    src = RootSystem(0, [Factor(t, 1) for t in types])
    img = orbifold_image(src)
    pre = orbifold_preimages(img.root_system())
    assert src in pre
    for p in pre:
        assert orbifold_image(p) == img


def test_fixed_rank_examples():
    assert fixed_rank(SimpleType("A", 5)) == 3
    assert fixed_rank(SimpleType("D", 4)) == 4
    assert fixed_rank(SimpleType("E", 7)) == 7
    with pytest.raises(RealizationError):
        fixed_rank(SimpleType("B", 3))


def test_image_rejects_bad_input():
    with pytest.raises(RealizationError):
        orbifold_image(parse_symbol("A1,2"))
    with pytest.raises(RealizationError):
        orbifold_image(parse_symbol("B3,1"))
    with pytest.raises(RealizationError):
        orbifold_image(parse_symbol("O^1 A2,1"))


@pytest.mark.parametrize("symbol,kind,witness", [
    ("A1,1^32", Realization.LATTICE, "A1,1^32"),
    ("E8,1^4", Realization.LATTICE, "E8,1^4"),
    ("B2,2^8", Realization.DGM, "A4,1^8"),
    ("A1,4^16", Realization.DGM, "A2,1^16"),
    ("D4,1^8", Realization.LATTICE, "D4,1^8"),
    ("A1,1^12 A3,2^4", Realization.OPEN, None),
    ("O^32", Realization.LATTICE, "O^32"),
    ("E8,1^3", Realization.NOT_APPLICABLE, None),
])
def test_classification(symbol, kind, witness):
    got = classify_realization(parse_symbol(symbol), CATALOGS)
    assert got.kind is kind
    assert (format_symbol(got.witness) if got.witness else None) == witness


def test_missing_catalog_gives_open():
    got = classify_realization(parse_symbol("B2,2^8"), {})
    assert got.kind is Realization.OPEN and "no lattice catalog" in got.notes[0]


def test_rank_40_is_open():
    rs = next(r for r in enumerate_brs(40) if all(f.level == 1 and f.type.is_ade for f in r.factors))
    assert classify_realization(rs, CATALOGS).kind is Realization.OPEN


def test_dgm_rows_use_complete_preimages():
    from balanced_voa.cli import load_appendix
    for row in load_appendix():
        if row.realization != "dgm":
            continue
        got = classify_realization(row.root_system, CATALOGS)
        assert got.kind is Realization.DGM, row.symbol
        assert got.witness.lie_rank == 32


def test_catalog_parsing(tmp_path):
    p = tmp_path / "cat.txt"
    p.write_text("# demo\nrank=8\nE8,1\nA2,1^4  # comment\n")
    cat = LatticeCatalog.load(p)
    assert cat.rank == 8 and parse_symbol("A2,1^4") in cat and not cat.complete
    p.write_text("E8,1\n")
    with pytest.raises(RealizationError):
        LatticeCatalog.load(p)
    p.write_text("rank=8\nB4,1\n")
    with pytest.raises(RealizationError):
        LatticeCatalog.load(p)
    p.write_text("rank=8\nE7,1\n")
    with pytest.raises(RealizationError):
        LatticeCatalog.load(p)


def test_fixture_realizations_match_classifier():
    from balanced_voa.cli import _REALIZATION_CODE, load_appendix
    rows = [r for r in load_appendix() if r.verdict == "pass"]
    assert len(rows) == 19
    for row in rows:
        assert _REALIZATION_CODE[classify_realization(row.root_system, CATALOGS).kind] == row.realization, row.symbol
