"""Root-system symbols, the balance predicate and enumeration of BRS(c, f)."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Iterator

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")


class SymbolError(ValueError):
    """Raised for malformed root-system symbols or invalid types."""


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        if not _valid_type(self.family, self.rank):
            raise SymbolError(f"invalid simple type {self.family}{self.rank}")

    @property
    def dim(self) -> int:
        return type_dim(self.family, self.rank)

    @property
    def dual_coxeter(self) -> int:
        return type_dual_coxeter(self.family, self.rank)

    @property
    def is_ade(self) -> bool:
        return self.family in ("A", "D", "E")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _valid_type(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family == "B":
        return rank >= 2
    if family == "C":
        return rank >= 3
    if family == "D":
        return rank >= 4
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


def type_dim(family: str, rank: int) -> int:
    l = rank
    if family == "A":
        return l * l + 2 * l
    if family in ("B", "C"):
        return 2 * l * l + l
    if family == "D":
        return 2 * l * l - l
    return {("E", 6): 78, ("E", 7): 133, ("E", 8): 248, ("F", 4): 52, ("G", 2): 14}[(family, rank)]


def type_dual_coxeter(family: str, rank: int) -> int:
    l = rank
    if family == "A":
        return l + 1
    if family == "B":
        return 2 * l - 1
    if family == "C":
        return l + 1
    if family == "D":
        return 2 * l - 2
    return {("E", 6): 12, ("E", 7): 18, ("E", 8): 30, ("F", 4): 9, ("G", 2): 4}[(family, rank)]


def normalize_type(family: str, rank: int) -> list[SimpleType]:
    """Apply the low-rank aliases; D2 splits into two A1 factors."""
    if rank < 1:
        raise SymbolError(f"rank must be positive, got {family}{rank}")
    if family in ("B", "C") and rank == 1:
        return [SimpleType("A", 1)]
    if family == "C" and rank == 2:
        return [SimpleType("B", 2)]
    if family == "D" and rank == 2:
        return [SimpleType("A", 1), SimpleType("A", 1)]
    if family == "D" and rank == 3:
        return [SimpleType("A", 3)]
    return [SimpleType(family, rank)]


@dataclass(frozen=True, order=True)
class Factor:
    type: SimpleType
    level: int

    def __post_init__(self) -> None:
        if self.level < 1:
            raise SymbolError(f"level must be positive, got {self.level}")

    @property
    def dim(self) -> int:
        return self.type.dim

    @property
    def dual_coxeter(self) -> int:
        return self.type.dual_coxeter

    def __str__(self) -> str:
        return f"{self.type},{self.level}"


def factor_central_charge(factor: Factor) -> Fraction:
    return Fraction(factor.dim * factor.level, factor.level + factor.dual_coxeter)


class RootSystem:
    """O^f times a multiset of level-k simple factors, stored in canonical order."""

    __slots__ = ("abelian_rank", "factors", "_key")

    def __init__(self, abelian_rank: int = 0, factors: Iterable[Factor] = ()) -> None:
        if abelian_rank < 0:
            raise SymbolError("abelian rank must be nonnegative")
        self.abelian_rank = abelian_rank
        self.factors: tuple[Factor, ...] = tuple(sorted(factors))
        self._key = (abelian_rank, self.factors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: RootSystem) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return f"RootSystem({format_symbol(self)!r})"

    @property
    def dim(self) -> int:
        return self.abelian_rank + sum(f.dim for f in self.factors)

    @property
    def central_charge(self) -> Fraction:
        return self.abelian_rank + sum((factor_central_charge(f) for f in self.factors), Fraction(0))

    @property
    def lie_rank(self) -> int:
        return self.abelian_rank + sum(f.type.rank for f in self.factors)

    def groups(self) -> list[tuple[Factor, int]]:
        """Distinct factors with their multiplicities, in canonical order."""
        out: list[tuple[Factor, int]] = []
        for f in self.factors:
            if out and out[-1][0] == f:
                out[-1] = (f, out[-1][1] + 1)
            else:
                out.append((f, 1))
        return out

    def is_empty(self) -> bool:
        return self.abelian_rank == 0 and not self.factors


def is_balanced(rs: RootSystem, c: Fraction | int | None = None) -> bool:
    """Balance test; if c is given the system must also have central charge c."""
    if rs.is_empty():
        raise ValueError("the empty root system has no balance condition")
    cc = rs.central_charge
    if c is not None and cc != c:
        return False
    d, f = rs.dim, rs.abelian_rank
    if not rs.factors:
        return cc == d == f
    return all((cc - f) * Fraction(x.dual_coxeter, x.level) == d - cc for x in rs.factors)


def is_pure_power(rs: RootSystem) -> bool:
    return len(set(rs.factors)) <= 1


# ---------------------------------------------------------------- symbols

_TOKEN = re.compile(r"([A-G])(\d+),(\d+)(?:\^(\d+))?")
_ABELIAN = re.compile(r"O\^(\d+)")


def parse_symbol(text: str) -> RootSystem:
    f = 0
    factors: list[Factor] = []
    pos = 0
    first = True
    for m in re.finditer(r"\S+", text):
        tok, pos = m.group(), m.start()
        if first and tok.startswith("O"):
            am = _ABELIAN.fullmatch(tok)
            if not am:
                raise SymbolError(f"bad abelian part {tok!r} at position {pos}")
            f = int(am.group(1))
            first = False
            continue
        first = False
        fm = _TOKEN.fullmatch(tok)
        if not fm:
            raise SymbolError(f"bad factor {tok!r} at position {pos}")
        family, rank, level = fm.group(1), int(fm.group(2)), int(fm.group(3))
        mult = int(fm.group(4)) if fm.group(4) is not None else 1
        if level == 0 or mult == 0:
            raise SymbolError(f"zero level or multiplicity in {tok!r} at position {pos}")
        try:
            types = normalize_type(family, rank)
        except SymbolError as exc:
            raise SymbolError(f"{exc} at position {pos}") from None
        for t in types:
            factors.extend([Factor(t, level)] * mult)
    if first:
        raise SymbolError("empty symbol")
    return RootSystem(f, factors)


def format_symbol(rs: RootSystem) -> str:
    parts = [f"O^{rs.abelian_rank}"] if rs.abelian_rank or not rs.factors else []
    for fac, n in rs.groups():
        parts.append(str(fac) + (f"^{n}" if n > 1 else ""))
    return " ".join(parts)


# ---------------------------------------------------------------- enumeration

def candidate_types(max_rank: int) -> Iterator[SimpleType]:
    """All canonical simple types, classical ones up to max_rank."""
    for l in range(1, max_rank + 1):
        yield SimpleType("A", l)
    for fam, lo in (("B", 2), ("C", 3), ("D", 4)):
        for l in range(lo, max_rank + 1):
            yield SimpleType(fam, l)
    for t in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)):
        yield SimpleType(*t)


def _multisets(items: list[tuple[int, Factor]], total: int) -> Iterator[list[Factor]]:
    """Multisets of factors (weights = dims) summing to total, each once."""
    items = sorted(items, key=lambda t: t[0], reverse=True)
    n = len(items)
    # reach[i] bit s set iff s is a sum of items[i:] with repetition
    reach = [0] * (n + 1)
    mask = (1 << (total + 1)) - 1
    reach[n] = 1
    for i in range(n - 1, -1, -1):
        w = items[i][0]
        r = reach[i + 1]
        s = r
        while True:
            s2 = (r | (s << w)) & mask
            if s2 == s:
                break
            s = s2
        reach[i] = s

    chosen: list[Factor] = []

    def rec(i: int, rem: int) -> Iterator[list[Factor]]:
        if rem == 0:
            yield list(chosen)
            return
        if i == n or not (reach[i] >> rem) & 1:
            return
        w, fac = items[i]
        k = 0
        while k * w <= rem:
            if (reach[i + 1] >> (rem - k * w)) & 1:
                yield from rec(i + 1, rem - k * w)
            chosen.append(fac)
            k += 1
        del chosen[len(chosen) - k:]

    yield from rec(0, total)


def _enumerate_semisimple(c: Fraction) -> set[RootSystem]:
    max_rank = floor(c) + 1
    types = list(candidate_types(max_rank))
    hmax = max(t.dual_coxeter for t in types)
    out: set[RootSystem] = set()
    d = floor(c) + 1
    while d <= c * (1 + hmax):
        ratio = (d - c) / c  # common value of h/k
        items = []
        for t in types:
            k = Fraction(t.dual_coxeter) / ratio
            if k.denominator == 1 and t.dim <= d:
                items.append((t.dim, Factor(t, int(k))))
        for fs in _multisets(items, d):
            out.add(RootSystem(0, fs))
        d += 1
    return out


def enumerate_brs(c: Fraction | int, f: int = 0) -> set[RootSystem]:
    c = Fraction(c)
    if c <= 0 or c < f or f < 0:
        raise ValueError(f"need c > 0 and 0 <= f <= c, got c={c}, f={f}")
    if c == f:
        return {RootSystem(f)}
    if f > 0:
        return {RootSystem(rs.abelian_rank + f, rs.factors) for rs in enumerate_brs(c - f, 0)}
    return _enumerate_semisimple(c)
