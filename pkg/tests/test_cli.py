import csv
import io
import json

import pytest

from balanced_voa.cli import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    FixtureError,
    load_appendix,
    run,
)
from balanced_voa.rootsys import enumerate_brs, format_symbol, parse_symbol


def test_fixture_self_consistency():
    rows = load_appendix()
    assert len(rows) == 449
    assert sum(r.verdict == "pass" for r in rows) == 19
    assert sum(r.verdict == "pass" and r.dim_v1 >= 56 for r in rows) == 18
    tallies = {v: sum(r.verdict == v for r in rows) for v in ("X_dim", "X_jac", "X_char", "unknown", "pass")}
    assert tallies == {"X_dim": 122, "X_jac": 245, "X_char": 25, "unknown": 38, "pass": 19}


def test_fixture_matches_enumeration():
    fixture = sorted(format_symbol(r.root_system) for r in load_appendix())
    assert fixture == sorted(format_symbol(r) for r in enumerate_brs(32))


def test_enumerate_csv():
    code, out = run(["enumerate", "--c", "32", "--f", "0", "--format", "csv"])
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 449
    assert list(rows[0]) == ["index", "dim_v1", "symbol", "verdict", "realization"]
    assert all(parse_symbol(r["symbol"]).dim == int(r["dim_v1"]) for r in rows)


def test_enumerate_json_and_text_agree():
    _, js = run(["enumerate", "--c", "8", "--format", "json"])
    _, txt = run(["enumerate", "--c", "8"])
    assert json.loads(js) == txt.split("\n")[:-1]
    assert len(json.loads(js)) == 16


def test_derive_identities_c40():
    code, out = run(["derive-identities", "--c", "40"])
    assert code == EXIT_OK
    for const in ("496", "20620", "-248", "60", "1560", "4*", "-5*", "-32", "-80", "360", "-60", "-1200"):
        assert const in out


def test_derive_identities_c32_and_c24():
    assert run(["derive-identities", "--c", "32"])[0] == EXIT_OK
    code, out = run(["derive-identities", "--c", "24"])
    assert code == EXIT_OK and "196884" in out


def test_classify():
    code, out = run(["classify", "A1,1^12 A3,2^4", "B2,2^8", "A1,1^32"])
    assert code == EXIT_OK
    assert out.splitlines() == ["A1,1^12 A3,2^4\tOpen", "B2,2^8\tDGM\tA4,1^8", "A1,1^32\tLattice\tA1,1^32"]


def test_classify_with_custom_catalog(tmp_path):
    cat = tmp_path / "c.txt"
    cat.write_text("rank=32\nD4,1^3 A5,1^4\n")
    code, out = run(["classify", "--catalog", str(cat), "--format", "json", "A1,1^12 A3,2^4"])
    assert code == EXIT_OK
    assert json.loads(out)[0]["realization"] == "DGM"


def test_test_command_is_deterministic_without_timing():
    args = ["test", "E8,1^4", "A1,1^32", "--stages", "dim,jac", "--no-timing", "--format", "json"]
    code1, out1 = run(args)
    code2, out2 = run(args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    recs = json.loads(out1)
    assert [r["final"] for r in recs] == ["Passed", "Passed"]
    assert set(recs[0]) == {"symbol", "c", "f", "d1", "stages", "final"}
    assert set(recs[0]["stages"][0]) == {"name", "status", "detail", "millis"}


def test_usage_errors():
    assert run(["test", "--stages", "foo", "E8,1^4"])[0] == EXIT_USAGE
    assert run(["test"])[0] == EXIT_USAGE
    assert run(["bogus"])[0] == EXIT_USAGE
    assert run(["classify", "X9,1"])[0] == EXIT_USAGE
    assert run(["test", "A1,1^3"])[0] == EXIT_USAGE   # not c = 32 or 40


def test_verify_appendix_dim_rows():
    code, out = run(["verify-appendix", "--rows", "125", "126", "303", "371", "--stages", "dim", "--no-timing"])
    assert code == EXIT_MISMATCH   # row 303 is X(Jac) in the table but the dimension test already rules it out
    lines = out.splitlines()
    assert len(lines) == 4
    assert "MISMATCH" in lines[2] and all("ok" in lines[i] for i in (0, 1, 3))


def test_verify_appendix_agreeing_rows():
    code, _ = run(["verify-appendix", "--rows", "125", "126", "371", "--stages", "dim"])
    assert code == EXIT_OK


def test_bad_fixture(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("index,dim_v1,symbol,verdict,realization\n1,249,E8,1,pass,lat\n")
    with pytest.raises(FixtureError):
        load_appendix(p, expected_rows=None)
    p.write_text('index,dim_v1,symbol,verdict,realization\n1,992,"E8,1^4",X_dim,lat\n')
    with pytest.raises(FixtureError):
        load_appendix(p, expected_rows=None)
    p.write_text('index,dim_v1,symbol,verdict,realization\n1,992,"E8,1^4",pass,lat\n')
    assert len(load_appendix(p, expected_rows=None)) == 1
    assert run(["verify-appendix", "--fixture", str(p)])[0] == EXIT_USAGE   # 1 row, 449 expected
