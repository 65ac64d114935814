"""Root systems of DGM orbifolds V_L^+ + (V_L^T)^+ and realization lookup.

For an even unimodular lattice L with root system a sum of ADE components
(all at level 1), the orbifold's weight-one space is the sum of the
theta-fixed subalgebras. Each component is replaced according to the
fixed table below; an A1 component leaves a one-dimensional abelian line
that does not survive into a balanced weight-one algebra.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .rootsys import Factor, RootSystem, SimpleType, format_symbol, is_balanced, normalize_type, parse_symbol

ADE = ("A", "D", "E")


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class OrbifoldImage:
    abelian_rank_contribution: int
    factors: tuple[Factor, ...]

    def root_system(self) -> RootSystem:
        return RootSystem(self.abelian_rank_contribution, self.factors)

    def __str__(self) -> str:
        return format_symbol(self.root_system())


def _typ(family: str, rank: int) -> list[SimpleType]:
    return normalize_type(family, rank)


def image_of_type(t: SimpleType) -> tuple[int, list[Factor]]:
    """(abelian contribution, level-k factors) for one level-1 ADE component."""
    if t.family not in ADE:
        raise RealizationError(f"{t} is not of type A, D or E")
    n = t.rank
    if t.family == "A":
        if n == 1:
            return 1, []
        if n == 2:
            return 0, [Factor(SimpleType("A", 1), 4)]
        if n % 2 == 0:
            return 0, [Factor(x, 2) for x in _typ("B", n // 2)]
        return 0, [Factor(x, 2) for x in _typ("D", (n + 1) // 2)]
    if t.family == "D":
        if n % 2 == 0:
            return 0, [Factor(x, 1) for x in _typ("D", n // 2)] * 2
        return 0, [Factor(x, 1) for x in _typ("B", n // 2)] * 2
    return 0, {6: [Factor(SimpleType("C", 4), 1)],
               7: [Factor(SimpleType("A", 7), 1)],
               8: [Factor(SimpleType("D", 8), 1)]}[n]


def _check_lattice_input(rs: RootSystem) -> None:
    if rs.abelian_rank:
        raise RealizationError("a lattice root system has no abelian part")
    for f in rs.factors:
        if f.level != 1 or f.type.family not in ADE:
            raise RealizationError(f"{f} is not an ADE factor at level 1")


def orbifold_image(lattice_rs: RootSystem) -> OrbifoldImage:
    _check_lattice_input(lattice_rs)
    ab = 0
    out: list[Factor] = []
    for f in lattice_rs.factors:
        a, fs = image_of_type(f.type)
        ab += a
        out.extend(fs)
    return OrbifoldImage(ab, tuple(sorted(out)))


def fixed_rank(t: SimpleType) -> int:
    """Lie rank of the theta-fixed subalgebra of a simple ADE algebra."""
    if t.family == "A":
        return (t.rank + 1) // 2
    if t.family == "D":
        return 2 * (t.rank // 2)
    if t.family == "E":
        return {6: 4, 7: 7, 8: 8}[t.rank]
    raise RealizationError(f"{t} is not of type A, D or E")


def latticeid_holds(t: SimpleType) -> bool:
    """Check rank(t) = dim L / (1 + h/k) for the image L of t (vacuous when rank 1).

    All components of an image share the same h/k, so the right side is the
    summed affine central charge of the image factors.
    """
    if t.rank < 2:
        return True
    _, fs = image_of_type(t)
    ratios = {Fraction(f.dual_coxeter, f.level) for f in fs}
    if len(ratios) != 1:
        return False
    dim = sum(f.dim for f in fs)
    return Fraction(t.rank) == dim / (1 + ratios.pop())


def _source_rules(max_rank: int) -> list[tuple[SimpleType, Counter]]:
    """Every ADE type up to max_rank with a nonempty image, as (source, image multiset)."""
    rules = []
    for fam, lo in (("A", 2), ("D", 4), ("E", 6)):
        hi = 8 if fam == "E" else max_rank
        for n in range(lo, hi + 1):
            t = SimpleType(fam, n)
            _, fs = image_of_type(t)
            rules.append((t, Counter(fs)))
    return rules


def orbifold_preimages(voa_rs: RootSystem) -> set[RootSystem]:
    """All level-1 ADE root systems whose orbifold image is voa_rs."""
    target = Counter(voa_rs.factors)
    # D4 -> D2^2 = A1^4 is the widest jump: a rank-r image factor needs sources up to rank 2r + 2
    max_rank = 2 * max((f.type.rank for f in voa_rs.factors), default=1) + 2
    by_output: dict[Factor, list[tuple[SimpleType, Counter]]] = {}
    for src, img in _source_rules(max_rank):
        for f in img:
            by_output.setdefault(f, []).append((src, img))
    found: set[RootSystem] = set()

    def rec(rest: Counter, chosen: list[SimpleType]) -> None:
        if not rest:
            srcs = chosen + [SimpleType("A", 1)] * voa_rs.abelian_rank
            found.add(RootSystem(0, [Factor(t, 1) for t in srcs]))
            return
        first = min(rest)
        for src, img in by_output.get(first, []):
            if all(rest[f] >= c for f, c in img.items()):
                rec(rest - img, chosen + [src])

    rec(target, [])
    return found


@dataclass(frozen=True)
class LatticeCatalog:
    rank: int
    entries: frozenset[RootSystem]
    complete: bool = False
    source: str = ""

    def __contains__(self, rs: RootSystem) -> bool:
        return rs in self.entries

    @classmethod
    def parse(cls, text: str, source: str = "") -> "LatticeCatalog":
        rank = None
        complete = False
        entries = set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("rank="):
                rank = int(line[5:])
                continue
            if line.startswith("complete="):
                complete = line[9:].strip().lower() in ("1", "true", "yes")
                continue
            rs = parse_symbol(line)
            try:
                _check_lattice_input(rs)
            except RealizationError as exc:
                raise RealizationError(f"{source}:{lineno}: {exc}") from None
            entries.add(rs)
        if rank is None:
            raise RealizationError(f"{source}: missing 'rank=' header")
        for rs in entries:
            if rs.lie_rank != rank:
                raise RealizationError(f"{source}: {format_symbol(rs)} has rank {rs.lie_rank}, not {rank}")
        return cls(rank, frozenset(entries), complete, source)

    @classmethod
    def load(cls, path: str | Path) -> "LatticeCatalog":
        p = Path(path)
        return cls.parse(p.read_text(), str(p))

    @classmethod
    def builtin(cls, rank: int = 32) -> "LatticeCatalog":
        name = f"catalog_rank{rank}.txt"
        try:
            text = resources.files("balanced_voa").joinpath("data").joinpath(name).read_text()
        except FileNotFoundError:
            raise RealizationError(f"no built-in catalog for rank {rank}") from None
        return cls.parse(text, name)


class Realization(str, Enum):
    LATTICE = "Lattice"
    DGM = "DGM"
    OPEN = "Open"
    NOT_APPLICABLE = "NotApplicable"


@dataclass
class Classification:
    kind: Realization
    witness: RootSystem | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "realization": self.kind.value,
            "witness": format_symbol(self.witness) if self.witness is not None else None,
            "notes": list(self.notes),
        }


def classify_realization(rs: RootSystem, catalogs: dict[int, LatticeCatalog] | None = None) -> Classification:
    """Lattice, DGM orbifold, or open, relative to the given catalogs (keyed by rank)."""
    c = rs.central_charge
    if c.denominator != 1 or int(c) not in (32, 40) or not is_balanced(rs, c):
        return Classification(Realization.NOT_APPLICABLE, notes=["needs a balanced root system with c = 32 or 40"])
    c = int(c)
    if not rs.factors and rs.abelian_rank == c:
        return Classification(Realization.LATTICE, rs, ["pure abelian: lattice theory by rank alone"])
    catalog = (catalogs or {}).get(c)
    notes = []
    if catalog is None:
        return Classification(Realization.OPEN, notes=[f"no lattice catalog for rank {c}"])
    level_one_ade = all(f.level == 1 and f.type.family in ADE for f in rs.factors)
    if level_one_ade and rs.abelian_rank == 0 and rs.lie_rank == c and rs in catalog:
        return Classification(Realization.LATTICE, rs, [f"found in {catalog.source or 'catalog'}"])
    if rs.abelian_rank:
        notes.append("abelian part present; a balanced DGM orbifold has none")
    else:
        pre = sorted(orbifold_preimages(rs))
        for p in pre:
            if p.lie_rank < c:
                notes.append(f"preimage {format_symbol(p)} has rank {p.lie_rank} < {c}; not complete")
                continue
            if p in catalog:
                return Classification(Realization.DGM, p, notes + [f"preimage {format_symbol(p)} is in the catalog"])
            notes.append(f"preimage {format_symbol(p)} is not in the catalog")
        if not pre:
            notes.append("no level-one ADE preimage")
    if not catalog.complete:
        notes.append("catalog is not exhaustive")
    return Classification(Realization.OPEN, notes=notes)
