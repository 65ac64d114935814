"""Command-line front end: enumerate, test, classify, derive-identities, verify-appendix."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .dgm import LatticeCatalog, Realization, RealizationError, classify_realization
from .elimination import (
    STAGES,
    STAGE_NAMES,
    PreconditionError,
    TestConfig,
    character_test,
    dimension_test,
    jacobi_test,
    run_pipeline,
)
from .feasibility import SearchBudget
from .qseries import derive_moment_identities
from .reference import compare_with_reference
from .rootsys import RootSystem, SymbolError, enumerate_brs, format_symbol, is_balanced, parse_symbol

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_MISMATCH = 0, 1, 2, 3

VERDICTS = ("X_dim", "X_jac", "X_char", "pass", "unknown")
REALIZATIONS = ("lat", "dgm", "open", "none")
_REALIZATION_CODE = {Realization.LATTICE: "lat", Realization.DGM: "dgm", Realization.OPEN: "open",
                     Realization.NOT_APPLICABLE: "none"}


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class AppendixRow:
    index: int
    dim_v1: int
    symbol: str
    verdict: str
    realization: str

    @property
    def root_system(self) -> RootSystem:
        return parse_symbol(self.symbol)


def builtin_fixture_path() -> Path:
    return Path(str(resources.files("balanced_voa").joinpath("data").joinpath("appendix_c32.csv")))


def load_appendix(path: str | Path | None = None, expected_rows: int | None = 449) -> list[AppendixRow]:
    """Read and validate the appendix fixture (CSV with index,dim_v1,symbol,verdict,realization)."""
    p = Path(path) if path is not None else builtin_fixture_path()
    if not p.exists():
        alt = builtin_fixture_path().parent / p.name
        if path is not None and alt.exists():
            p = alt
        else:
            raise FixtureError(f"fixture not found: {path}")
    rows: list[AppendixRow] = []
    with p.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["index", "dim_v1", "symbol", "verdict", "realization"]:
            raise FixtureError(f"{p}: unexpected header {reader.fieldnames}")
        for rec in reader:
            row = AppendixRow(int(rec["index"]), int(rec["dim_v1"]), rec["symbol"], rec["verdict"],
                              rec["realization"])
            _validate_row(row, p)
            rows.append(row)
    if [r.index for r in rows] != list(range(1, len(rows) + 1)):
        raise FixtureError(f"{p}: indices are not 1..{len(rows)}")
    if expected_rows is not None and len(rows) != expected_rows:
        raise FixtureError(f"{p}: {len(rows)} rows, expected {expected_rows}")
    return rows


def _validate_row(row: AppendixRow, where: Path) -> None:
    tag = f"{where}: row {row.index}"
    if row.verdict not in VERDICTS:
        raise FixtureError(f"{tag}: bad verdict {row.verdict!r}")
    if row.realization not in REALIZATIONS:
        raise FixtureError(f"{tag}: bad realization {row.realization!r}")
    if row.realization != "none" and row.verdict != "pass":
        raise FixtureError(f"{tag}: realization given for a row that is not a survivor")
    try:
        rs = parse_symbol(row.symbol)
    except SymbolError as exc:
        raise FixtureError(f"{tag}: {exc}") from None
    if rs.dim != row.dim_v1:
        raise FixtureError(f"{tag}: dim_v1 {row.dim_v1} but the symbol has dimension {rs.dim}")
    if not is_balanced(rs, 32):
        raise FixtureError(f"{tag}: {row.symbol} is not balanced at c = 32")


# ---------------------------------------------------------------- helpers

def _config(args) -> TestConfig:
    stages = tuple(s for s in STAGES if s in args.stages)
    return TestConfig(
        stages=stages,
        char_depth=args.char_depth,
        jacobi_label_cap=args.jacobi_label_cap,
        label_cap=args.label_cap,
        orbit_cap=args.orbit_cap,
        lattice_cap=args.lattice_cap,
        h_pairs=not args.single_h,
        search=SearchBudget(nodes=args.node_budget, seconds=args.time_budget),
    )


def _parallel_map(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map; worker processes when threads > 1 (the work is CPU-bound)."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _pipeline_job(job: tuple[str, TestConfig]) -> dict:
    symbol, config = job
    try:
        return run_pipeline(parse_symbol(symbol), config).to_json()
    except PreconditionError as exc:
        return {"symbol": symbol, "error": str(exc)}


def _strip_timing(rec: dict) -> dict:
    for st in rec.get("stages", []):
        st["millis"] = 0
    return rec


def _emit_json(obj, out) -> None:
    json.dump(obj, out, indent=2, sort_keys=False)
    out.write("\n")


def _parse_symbols(raw: Iterable[str]) -> list[RootSystem]:
    return [parse_symbol(s) for s in raw]


def _read_symbols(args) -> list[str]:
    syms = list(args.symbols or [])
    if getattr(args, "file", None):
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
        syms += [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return [s for s in syms if s]


# ---------------------------------------------------------------- commands

def cmd_enumerate(args, out) -> int:
    c = Fraction(args.c)
    systems = sorted(enumerate_brs(c, args.f), key=lambda r: (r.dim, format_symbol(r)))
    if args.format == "text":
        for rs in systems:
            out.write(format_symbol(rs) + "\n")
    elif args.format == "json":
        _emit_json([format_symbol(rs) for rs in systems], out)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index", "dim_v1", "symbol", "verdict", "realization"])
        for i, rs in enumerate(systems, 1):
            w.writerow([i, rs.dim, format_symbol(rs), "", ""])
    print(f"{len(systems)} balanced root systems with c = {c}, f = {args.f}", file=sys.stderr)
    return EXIT_OK


def cmd_test(args, out) -> int:
    symbols = [format_symbol(rs) for rs in _parse_symbols(_read_symbols(args))]
    if not symbols:
        print("no root systems given", file=sys.stderr)
        return EXIT_USAGE
    config = _config(args)
    results = _parallel_map(_pipeline_job, [(s, config) for s in symbols], args.threads)
    if args.no_timing:
        results = [_strip_timing(r) for r in results]
    if args.format == "json":
        _emit_json(results, out)
    else:
        for r in results:
            if "error" in r:
                out.write(f"{r['symbol']}\terror\t{r['error']}\n")
            else:
                stages = " ".join(f"{s['name']}:{s['status']}" for s in r["stages"])
                out.write(f"{r['symbol']}\t{r['final']}\t{stages}\n")
    return EXIT_USAGE if any("error" in r for r in results) else EXIT_OK


def _catalogs(args) -> dict[int, LatticeCatalog]:
    cats = {}
    if args.catalog:
        for path in args.catalog:
            cat = LatticeCatalog.load(path)
            cats[cat.rank] = cat
    elif not args.no_builtin_catalog:
        cats[32] = LatticeCatalog.builtin(32)
    return cats


def cmd_classify(args, out) -> int:
    systems = _parse_symbols(_read_symbols(args))
    if not systems:
        print("no root systems given", file=sys.stderr)
        return EXIT_USAGE
    cats = _catalogs(args)
    recs = []
    for rs in systems:
        rec = {"symbol": format_symbol(rs)}
        rec.update(classify_realization(rs, cats).to_json())
        recs.append(rec)
    if args.format == "json":
        _emit_json(recs, out)
    else:
        for r in recs:
            wit = f"\t{r['witness']}" if r["witness"] else ""
            out.write(f"{r['symbol']}\t{r['realization']}{wit}\n")
    return EXIT_OK


def cmd_derive_identities(args, out) -> int:
    ids = derive_moment_identities(args.c, args.j_max)
    for ident in ids.identities:
        out.write(f"j={ident.j}: {ident.pretty()}\n")
    if ids.not_derivable:
        out.write(f"not derivable from two-dimensional form spaces: j = {list(ids.not_derivable)}\n")
    if args.c == 24:
        return EXIT_OK
    problems = compare_with_reference(ids) if args.j_max is None else []
    for p in problems:
        print(f"MISMATCH {p}", file=sys.stderr)
    return EXIT_MISMATCH if problems else EXIT_OK


_STAGE_RUNNERS = {"dim": dimension_test, "jac": jacobi_test, "char": lambda rs, cfg: character_test(rs, config=cfg)}


def _verify_job(job: tuple[AppendixRow, tuple[str, ...], TestConfig]) -> dict:
    row, stages, config = job
    rs = row.root_system
    expect_stage = row.verdict[2:] if row.verdict.startswith("X_") else None
    rec = {"index": row.index, "symbol": row.symbol, "fixture": row.verdict, "stages": [], "mismatch": []}
    for st in stages:
        if expect_stage is not None and STAGES.index(st) > STAGES.index(expect_stage):
            break  # the fixture says an earlier stage already decided this row
        v = _STAGE_RUNNERS[st](rs, config)
        rec["stages"].append(v.to_json())
        if row.verdict == "unknown" or v.status == "Inconclusive":
            if v.ruled_out:
                break
            continue
        expected_out = expect_stage == st
        if v.ruled_out != expected_out:
            want = "RuledOut" if expected_out else "not RuledOut"
            rec["mismatch"].append(f"{STAGE_NAMES[st]}: fixture {want}, got {v.status}")
        if v.ruled_out:
            break
    return rec


def cmd_verify_appendix(args, out) -> int:
    rows = load_appendix(args.fixture)
    sel = [r for r in rows
           if r.dim_v1 >= args.min_dim_v1
           and (args.max_dim_v1 is None or r.dim_v1 <= args.max_dim_v1)
           and (not args.rows or r.index in args.rows)
           and (not args.verdicts or r.verdict in args.verdicts)]
    config = _config(args)
    stages = config.stages
    recs = _parallel_map(_verify_job, [(r, stages, config) for r in sel], args.threads)
    if args.no_timing:
        recs = [_strip_timing(r) for r in recs]
    bad = [r for r in recs if r["mismatch"]]
    if args.format == "json":
        _emit_json({"rows": recs, "checked": len(recs), "mismatches": len(bad)}, out)
    else:
        for r in recs:
            got = " ".join(f"{s['name']}:{s['status']}" for s in r["stages"])
            flag = "MISMATCH " + "; ".join(r["mismatch"]) if r["mismatch"] else "ok"
            out.write(f"{r['index']}\t{r['symbol']}\t{r['fixture']}\t{got}\t{flag}\n")
    print(f"checked {len(recs)} rows, {len(bad)} mismatches", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


# ---------------------------------------------------------------- parser

def _add_test_flags(p: argparse.ArgumentParser, default_stages: str) -> None:
    p.add_argument("--stages", default=default_stages,
                   type=lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
                   help="comma-separated subset of dim,jac,char")
    p.add_argument("--threads", type=int, default=1, help="worker processes across root systems")
    p.add_argument("--char-depth", type=int, default=3)
    p.add_argument("--node-budget", type=int, default=SearchBudget.nodes)
    p.add_argument("--time-budget", type=float, default=SearchBudget.seconds, help="seconds per feasibility problem")
    p.add_argument("--jacobi-label-cap", type=int, default=TestConfig.jacobi_label_cap,
                   help="use per-label variables when the label count is at most this, else orbit variables")
    p.add_argument("--label-cap", type=int, default=TestConfig.label_cap)
    p.add_argument("--orbit-cap", type=int, default=TestConfig.orbit_cap)
    p.add_argument("--lattice-cap", type=int, default=TestConfig.lattice_cap)
    p.add_argument("--single-h", action="store_true", help="Jacobi test with one-factor coweights only")
    p.add_argument("--no-timing", action="store_true", help="report 0 ms for every stage (byte-stable output)")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balanced-voa", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list balanced root systems")
    p.add_argument("--c", required=True, help="central charge (integer or fraction)")
    p.add_argument("--f", type=int, default=0, help="abelian rank")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("test", help="run the elimination pipeline")
    p.add_argument("symbols", nargs="*")
    p.add_argument("--file", help="read symbols from a file, one per line ('-' for stdin)")
    _add_test_flags(p, "dim,jac,char")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("classify", help="Lattice / DGM / Open lookup")
    p.add_argument("symbols", nargs="*")
    p.add_argument("--file")
    p.add_argument("--catalog", action="append", help="lattice catalog file (repeatable)")
    p.add_argument("--no-builtin-catalog", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("derive-identities", help="derive the weight-two moment identities")
    p.add_argument("--c", type=int, required=True, choices=(24, 32, 40))
    p.add_argument("--j-max", type=int, default=None)
    p.set_defaults(func=cmd_derive_identities)

    p = sub.add_parser("verify-appendix", help="compare stage verdicts with the appendix fixture")
    p.add_argument("--fixture", default=None, help="CSV fixture (default: the shipped appendix_c32.csv)")
    p.add_argument("--min-dim-v1", type=int, default=0)
    p.add_argument("--max-dim-v1", type=int, default=None)
    p.add_argument("--rows", type=int, nargs="*", help="restrict to these row indices")
    p.add_argument("--verdicts", nargs="*", choices=VERDICTS)
    _add_test_flags(p, "dim")
    p.set_defaults(func=cmd_verify_appendix)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    stages = getattr(args, "stages", None)
    if stages is not None:
        unknown = [s for s in stages if s not in STAGES]
        if unknown or not stages:
            print(f"bad --stages value; choose from {','.join(STAGES)}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args, out)
    except (SymbolError, FixtureError, RealizationError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report and map to the internal-error code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by the tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
