"""The dimension, Jacobi-form and character tests, and the per-system pipeline."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .affine import (
    ModuleOrbit,
    graded_dims,
    module_orbits,
    product_graded_dims,
    vacuum_depth2_dim,
    vacuum_depth2_moments,
    vacuum_moment_products,
    DEFAULT_LABEL_CAP,
    DEFAULT_LATTICE_CAP,
)
from .feasibility import (
    FeasibilityResult,
    LinearSystem,
    SearchBudget,
    has_nonneg_integer_solution,
    partition_exists,
)
from .liealg import (
    ResourceLimitError,
    adjoint_weights,
    coweight_multiple,
    lie_data,
    moments,
    power_sums_product,
    weight_system,
    weyl_dim,
    DEFAULT_ORBIT_CAP,
)
from .qseries import MomentIdentitySet, derive_moment_identities, zv_character
from .rootsys import Factor, RootSystem, format_symbol, is_balanced

STAGES = ("dim", "jac", "char")
# c = 24 is accepted so the machinery can be checked against Schellekens' list.
SUPPORTED_C = (24, 32, 40)
D2_CONSTANTS = {24: (0, 196884), 32: (248, 139504), 40: (496, 20620)}
STAGE_NAMES = {"dim": "Dim", "jac": "Jac", "char": "Char"}


@dataclass
class Verdict:
    status: str                 # "Passed" | "RuledOut" | "Inconclusive"
    stage: str | None = None    # "Dim" | "Jac" | "Char" | None
    detail: str = ""
    elapsed: float = 0.0
    witness: list[int] | None = None

    @property
    def ruled_out(self) -> bool:
        return self.status == "RuledOut"

    def to_json(self) -> dict:
        return {"name": self.stage, "status": self.status, "detail": self.detail,
                "millis": int(round(self.elapsed * 1000))}


@dataclass
class TestConfig:
    __test__ = False   # keep pytest from collecting it
    stages: tuple[str, ...] = STAGES
    char_depth: int = 3
    include_weight_one: bool = False
    jacobi_label_cap: int = 4000
    label_cap: int = DEFAULT_LABEL_CAP
    orbit_cap: int = DEFAULT_ORBIT_CAP
    lattice_cap: int = DEFAULT_LATTICE_CAP
    module_dim_cap: int = 5_000_000
    h_pairs: bool = True
    search: SearchBudget = field(default_factory=SearchBudget)


@dataclass
class PipelineResult:
    rs: RootSystem
    stages: list[Verdict]
    final: Verdict

    def to_json(self) -> dict:
        return {
            "symbol": format_symbol(self.rs),
            "c": str(self.rs.central_charge),
            "f": self.rs.abelian_rank,
            "d1": self.rs.dim,
            "stages": [v.to_json() for v in self.stages],
            "final": self.final.status if self.final.stage is None else f"{self.final.status}({self.final.stage})",
        }


class PreconditionError(ValueError):
    pass


def _check(rs: RootSystem) -> int:
    if rs.abelian_rank:
        raise PreconditionError("the tests need a semisimple root system (f = 0)")
    c = rs.central_charge
    if c not in SUPPORTED_C:
        raise PreconditionError(f"central charge {c} is not one of 24, 32, 40")
    if not is_balanced(rs, c):
        raise PreconditionError("root system is not balanced")
    return int(c)


def expected_d2(c: int, d1: int) -> int:
    z = zv_character(c, d1, 2)
    d2 = z[2]
    slope, const = D2_CONSTANTS[c]
    check = d2 - (slope * d1 + const)
    if check != 0:
        raise ArithmeticError("character constant mismatch")
    return int(d2)


def vacuum_dim2(rs: RootSystem) -> int:
    """dim of the depth-two space of the vacuum module of the tensor product."""
    dims = [f.dim for f in rs.factors]
    cross = (sum(dims) ** 2 - sum(d * d for d in dims)) // 2
    return sum(vacuum_depth2_dim(f) for f in rs.factors) + cross


def _timed(stage: str, fn, *args) -> Verdict:
    t0 = time.monotonic()
    try:
        v = fn(*args)
    except ResourceLimitError as exc:
        v = Verdict("Inconclusive", STAGE_NAMES[stage], f"resource cap: {exc}")
    v.elapsed = time.monotonic() - t0
    return v


def _from_feasibility(stage: str, res: FeasibilityResult, nvars: int) -> Verdict:
    name = STAGE_NAMES[stage]
    if res.infeasible:
        return Verdict("RuledOut", name, f"{nvars} variables; infeasible at {res.stage}: {res.detail}")
    if res.feasible:
        return Verdict("Passed", name, f"{nvars} variables; feasible ({res.detail})", witness=res.witness)
    return Verdict("Inconclusive", name, f"{nvars} variables; {res.detail}")


# ---------------------------------------------------------------- dimension test

def dimension_test(rs: RootSystem, config: TestConfig | None = None) -> Verdict:
    config = config or TestConfig()
    return _timed("dim", _dimension_test, rs, config)


def _dimension_test(rs: RootSystem, config: TestConfig) -> Verdict:
    c = _check(rs)
    d1 = rs.dim
    m = expected_d2(c, d1) - vacuum_dim2(rs)
    orbits = module_orbits(rs, 2, 2, integral_only=True, cap=config.label_cap)
    parts = sorted({o.top_dim for o in orbits})
    if config.include_weight_one:
        for o in module_orbits(rs, 1, 1, integral_only=True, cap=config.label_cap):
            parts.append(_orbit_graded_dims(rs, o, 1, config.lattice_cap)[1])
    ok = partition_exists(m, parts)
    detail = f"m={m}, {len(parts)} distinct part sizes"
    if not ok:
        return Verdict("RuledOut", "Dim", detail)
    return Verdict("Passed", "Dim", detail)


# ---------------------------------------------------------------- Jacobi test

HChoice = tuple[tuple[int, int, tuple[int, ...]], ...]  # (group, copy, coroot vector)


def _basis_vectors(f: Factor) -> list[tuple[int, ...]]:
    data = lie_data(f.type)
    n = data.rank
    out = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    out.append(data.theta_coroot)
    out.extend(coweight_multiple(data, i) for i in range(n))
    seen, uniq = set(), []
    for v in out:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    return uniq


def default_h_choices(groups: list[tuple[Factor, int]], pairs: bool = True) -> list[HChoice]:
    slots = []
    for g, (f, n) in enumerate(groups):
        for copy in range(min(n, 2)):
            slots.append((g, copy, f))
    out: list[HChoice] = []
    for g, (f, n) in enumerate(groups):
        for v in _basis_vectors(f):
            out.append(((g, 0, v),))
    if pairs:
        for (g1, c1, f1), (g2, c2, f2) in combinations(slots, 2):
            if g1 == g2 and not (c1 == 0 and c2 == 1):
                continue
            for v1 in _basis_vectors(f1):
                for v2 in _basis_vectors(f2):
                    out.append(((g1, c1, v1), (g2, c2, v2)))
    return out


@lru_cache(maxsize=None)
def _module_power_sums(f: Factor, lam: tuple[int, ...], h: tuple[int, ...], J: int, cap: int) -> tuple[int, ...]:
    data = lie_data(f.type)
    if not any(h):
        return (weyl_dim(data, lam),) + (0,) * J
    ws = _weight_system_cached(f.type, lam, cap)
    return tuple(moments(ws, h, J))


@lru_cache(maxsize=None)
def _weight_system_cached(t, lam, cap):
    return weight_system(lie_data(t), lam, cap=cap)


def _group_average(f: Factor, n: int, part: Sequence[tuple[tuple[int, ...], int]],
                   support: Sequence[tuple[int, tuple[int, ...]]], J: int, cap: int) -> list[Fraction]:
    """Average power sums over arrangements of a group's weight multiset.

    The recursion assigns weights to the supported copies one at a time,
    counting choices with integer multiplicities; the unsupported copies
    contribute only their dimensions. One division by the number of
    ordered choices happens at the end.
    """
    data = lie_data(f.type)
    if n == 1 and len(support) == 1:
        lam = part[0][0] if part else tuple([0] * data.rank)
        return [Fraction(x) for x in _module_power_sums(f, lam, support[0][1], J, cap)]
    zero = tuple([0] * data.rank)
    weights = [w for w, _ in part]
    counts = [c for _, c in part]
    if n - sum(counts):
        weights.append(zero)
        counts.append(n - sum(counts))
    dims = [weyl_dim(data, w) for w in weights]
    vecs = [v for _, v in support]
    memo: dict = {}

    def rec(i: int, cnt: tuple[int, ...]) -> list[int]:
        key = (i, cnt)
        if key in memo:
            return memo[key]
        if i == len(vecs):
            prod = 1
            for d, c in zip(dims, cnt):
                prod *= d ** c
            res = [prod] + [0] * J
        else:
            res = [0] * (J + 1)
            for k, c in enumerate(cnt):
                if not c:
                    continue
                p = _module_power_sums(f, weights[k], vecs[i], J, cap)
                rest = rec(i + 1, cnt[:k] + (c - 1,) + cnt[k + 1:])
                prodv = power_sums_product(p, rest)
                res = [a + c * b for a, b in zip(res, prodv)]
        memo[key] = res
        return res

    ways = 1
    for i in range(len(vecs)):
        ways *= n - i
    return [Fraction(x, ways) for x in rec(0, tuple(counts))]


def _orbit_power_sums(groups, orbit: ModuleOrbit, h: HChoice, J: int, cap: int) -> list[Fraction]:
    out: list = [1] + [0] * J
    for g, ((f, n), part) in enumerate(zip(groups, orbit.parts)):
        support = [(copy, v) for (gg, copy, v) in h if gg == g]
        if not support:
            data = lie_data(f.type)
            dim = 1
            for w, cnt in part:
                dim *= weyl_dim(data, w) ** cnt
            out = [dim * x for x in out]
        else:
            p = _group_average(f, n, part, support, J, cap)
            if all(x.denominator == 1 for x in p):
                p = [int(x) for x in p]
            out = power_sums_product(out, p)
    return [Fraction(x) for x in out]


def _h_vectors(groups, h: HChoice) -> list[list[tuple[int, ...]]]:
    """Per group, per copy: the coroot vector (zero where h vanishes)."""
    out = []
    for g, (f, n) in enumerate(groups):
        zero = tuple([0] * f.type.rank)
        vecs = [zero] * n
        for gg, copy, v in h:
            if gg == g:
                vecs[copy] = v
        out.append(vecs)
    return out


def _vacuum_and_adjoint(groups, h: HChoice, J: int) -> tuple[list[int], list[int], int]:
    """Power sums of V_2 vacuum part and of V_1, and <h,h>."""
    adj_all, vac_all = [], []
    norm = 0
    for (f, n), vecs in zip(groups, _h_vectors(groups, h)):
        data = lie_data(f.type)
        for v in vecs:
            adj = moments(adjoint_weights(data), v, J)
            vac = vacuum_depth2_moments(f, v, J)
            adj_all.append(adj)
            vac_all.append(vac)
            norm += f.level * data.coroot_norm(v)
    s1 = [sum(col) for col in zip(*adj_all)]
    vac2 = vacuum_moment_products(adj_all, vac_all)
    return s1, vac2, norm


def build_jacobi_system(rs: RootSystem, config: TestConfig,
                        h_choices: list[HChoice] | None = None,
                        identities: MomentIdentitySet | None = None):
    c = _check(rs)
    ids = identities or _identities(c)
    J = max(max(j for j, _ in i.lhs) for i in ids.identities)
    d1 = rs.dim
    d2 = expected_d2(c, d1)
    grouped = rs.groups()
    orbits = module_orbits(rs, 2, 2, integral_only=True, cap=config.label_cap)
    nlabels = sum(o.size for o in orbits)
    if nlabels <= config.jacobi_label_cap:
        groups = [(f, 1) for f in rs.factors]
        orbits = module_orbits(rs, 2, 2, integral_only=True, cap=config.label_cap, groups=groups)
        mode = "labels"
    else:
        groups = grouped
        mode = "orbits"
    for o in orbits:
        if o.top_dim > config.module_dim_cap:
            raise ResourceLimitError(f"module top of dimension {o.top_dim} exceeds cap")
    m = d2 - vacuum_dim2(rs)
    A: list[list[Fraction]] = [[Fraction(o.top_dim) for o in orbits]]
    b: list[Fraction] = [Fraction(m)]
    hs = h_choices if h_choices is not None else default_h_choices(groups, config.h_pairs)
    seen_rows = set()
    for h in hs:
        s1, vac2, N = _vacuum_and_adjoint(groups, h, J)
        ps = [_orbit_power_sums(groups, o, h, J, config.module_dim_cap) for o in orbits]
        for ident in ids.identities:
            if ident.j == 0:
                continue
            coefs = [(j, cf * Fraction(N) ** a) for (j, a), cf in ident.lhs.items()]
            row = [sum((cf * p[j] for j, cf in coefs), Fraction(0)) for p in ps]
            rhs = ident.evaluate_rhs(d1, s1, N)
            rhs -= sum((cf * vac2[j] * Fraction(N) ** a for (j, a), cf in ident.lhs.items()), Fraction(0))
            key = (tuple(row), rhs)
            if key in seen_rows or (not any(row) and rhs == 0):
                continue
            seen_rows.add(key)
            A.append(row)
            b.append(rhs)
    upper = [Fraction(m // o.top_dim) if m >= 0 else Fraction(0) for o in orbits]
    return LinearSystem(A, b, upper=upper), orbits, mode


@lru_cache(maxsize=None)
def _identities(c: int) -> MomentIdentitySet:
    return derive_moment_identities(c)


def jacobi_test(rs: RootSystem, config: TestConfig | None = None,
                h_choices: list[HChoice] | None = None) -> Verdict:
    config = config or TestConfig()
    return _timed("jac", _jacobi_test, rs, config, h_choices)


def _jacobi_test(rs: RootSystem, config: TestConfig, h_choices) -> Verdict:
    sys, orbits, mode = build_jacobi_system(rs, config, h_choices)
    if not orbits:
        ok = all(x == 0 for x in sys.b)
        return Verdict("Passed" if ok else "RuledOut", "Jac", "no weight-2 modules", witness=[] if ok else None)
    res = has_nonneg_integer_solution(sys, config.search)
    v = _from_feasibility("jac", res, len(orbits))
    v.detail += f"; {len(sys.A)} rows; variables are {mode}"
    return v


# ---------------------------------------------------------------- character test

def _orbit_graded_dims(rs: RootSystem, orbit: ModuleOrbit, depth: int, cap: int) -> list[int]:
    parts = []
    for (f, n), part in zip(rs.groups(), orbit.parts):
        for w, cnt in part:
            gd = graded_dims(f, w, depth, cap).dims
            parts.extend([gd] * cnt)
        placed = sum(cnt for _, cnt in part)
        vac = graded_dims(f, tuple([0] * f.type.rank), depth, cap).dims
        parts.extend([vac] * (n - placed))
    return product_graded_dims(parts, depth)


def build_character_system(rs: RootSystem, config: TestConfig):
    c = _check(rs)
    N = config.char_depth
    z = zv_character(c, rs.dim, N)
    vac = _orbit_graded_dims(rs, ModuleOrbit(tuple(() for _ in rs.groups()), Fraction(0), 1, 1), N,
                             config.lattice_cap)
    if vac[1] != z[1]:
        raise ArithmeticError("vacuum depth-one dimension differs from dim V_1")
    hmin = 1 if config.include_weight_one else 2
    orbits = module_orbits(rs, hmin, N, integral_only=True, cap=config.label_cap)
    cols = []
    for o in orbits:
        h = int(o.conformal_weight)
        gd = _orbit_graded_dims(rs, o, N - h, config.lattice_cap)
        cols.append([0] * h + gd)
    A = [[Fraction(col[n]) for col in cols] for n in range(2, N + 1)]
    b = [Fraction(z[n] - vac[n]) for n in range(2, N + 1)]
    upper = []
    for col in cols:
        bound = None
        for n in range(2, N + 1):
            if col[n] > 0:
                v = Fraction((z[n] - vac[n]) // col[n]) if z[n] >= vac[n] else Fraction(0)
                bound = v if bound is None else min(bound, v)
        upper.append(bound)
    return LinearSystem(A, b, upper=upper), orbits


def character_test(rs: RootSystem, N: int | None = None, config: TestConfig | None = None) -> Verdict:
    config = config or TestConfig()
    if N is not None:
        config = TestConfig(**{**config.__dict__, "char_depth": N})
    return _timed("char", _character_test, rs, config)


def _character_test(rs: RootSystem, config: TestConfig) -> Verdict:
    sys, orbits = build_character_system(rs, config)
    if not orbits:
        ok = all(x == 0 for x in sys.b)
        return Verdict("Passed" if ok else "RuledOut", "Char", "no modules in range", witness=[] if ok else None)
    res = has_nonneg_integer_solution(sys, config.search)
    v = _from_feasibility("char", res, len(orbits))
    v.detail += f"; depth {config.char_depth}"
    return v


# ---------------------------------------------------------------- pipeline

def run_pipeline(rs: RootSystem, config: TestConfig | None = None) -> PipelineResult:
    config = config or TestConfig()
    _check(rs)
    runners = {
        "dim": lambda: dimension_test(rs, config),
        "jac": lambda: jacobi_test(rs, config),
        "char": lambda: character_test(rs, config=config),
    }
    verdicts: list[Verdict] = []
    inconclusive: Verdict | None = None
    for stage in STAGES:
        if stage not in config.stages:
            continue
        v = runners[stage]()
        verdicts.append(v)
        if v.ruled_out:
            return PipelineResult(rs, verdicts, v)
        if v.status == "Inconclusive" and inconclusive is None:
            inconclusive = v
    total = sum(v.elapsed for v in verdicts)
    if inconclusive is not None:
        final = Verdict("Inconclusive", inconclusive.stage, inconclusive.detail, total)
    else:
        final = Verdict("Passed", None, "all enabled stages feasible", total)
    return PipelineResult(rs, verdicts, final)
