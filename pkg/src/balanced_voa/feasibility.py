"""Exact feasibility: partitions, integer solvability, rational LP, integer search."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from heapq import heappop, heappush
from math import ceil, floor, gcd
from typing import Sequence

Num = Fraction


@dataclass
class LinearSystem:
    """A m = b with lower[i] <= m_i <= upper[i] (upper None means +infinity)."""

    A: list[list[Fraction]]
    b: list[Fraction]
    lower: list[Fraction] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.A = [[Fraction(x) for x in row] for row in self.A]
        self.b = [Fraction(x) for x in self.b]
        n = self.num_vars
        if any(len(row) != n for row in self.A) or len(self.b) != len(self.A):
            raise ValueError("inconsistent dimensions")
        if not self.lower:
            self.lower = [Fraction(0)] * n
        if not self.upper:
            self.upper = [None] * n
        self.lower = [Fraction(x) for x in self.lower]
        self.upper = [None if x is None else Fraction(x) for x in self.upper]
        for lo, up in zip(self.lower, self.upper):
            if up is not None and up < lo:
                raise ValueError("lower bound exceeds upper bound")

    @property
    def num_vars(self) -> int:
        if self.A:
            return len(self.A[0])
        return max(len(self.lower), len(self.upper))

    def residual(self, x: Sequence) -> list[Fraction]:
        return [sum((a * v for a, v in zip(row, x)), Fraction(0)) - bi for row, bi in zip(self.A, self.b)]

    def satisfied_by(self, x: Sequence) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(r != 0 for r in self.residual(x)):
            return False
        return all(lo <= v and (up is None or v <= up) for v, lo, up in zip(x, self.lower, self.upper))

    def to_json(self) -> dict:
        return {
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
            "lower": [str(x) for x in self.lower],
            "upper": [None if x is None else str(x) for x in self.upper],
        }


@dataclass
class FeasibilityResult:
    status: str  # "infeasible" | "feasible" | "unknown"
    stage: str   # "rational" | "integrality" | "lp" | "dp" | "search"
    witness: list[int] | None = None
    detail: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- partitions

def frobenius_upper_bound(D: Sequence[int]) -> int:
    """An upper bound for the Frobenius number of a coprime set.

    Uses the two-generator value (a-1)(b-1)-1 for the smallest coprime pair,
    which bounds the Frobenius number of any superset, else the Schur bound
    (min-1)(max-1)-1.
    """
    s = sorted(set(D))
    best = None
    for i, a in enumerate(s):
        for b in s[i + 1:]:
            if gcd(a, b) == 1:
                v = (a - 1) * (b - 1) - 1
                best = v if best is None else min(best, v)
    if best is None:
        best = (s[0] - 1) * (s[-1] - 1) - 1
    return best


def frobenius_number(D: Sequence[int]) -> int:
    """Exact Frobenius number of a coprime set (-1 when 1 is a part).

    Shortest paths over residues modulo the smallest part: the least
    representable value in each residue class, minus that part, maximized.
    """
    parts = sorted(set(int(x) for x in D if x > 0))
    if not parts or reduce(gcd, parts) != 1:
        raise ValueError("parts must be coprime")
    a = parts[0]
    if a == 1:
        return -1
    dist = [None] * a
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heappop(heap)
        if d != dist[r]:
            continue
        for p in parts[1:]:
            nd, nr = d + p, (r + p) % a
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                heappush(heap, (nd, nr))
    return max(dist) - a


def partition_exists(m: int, D: Sequence[int]) -> bool:
    """Is m a nonnegative integer combination of the parts D?"""
    if m < 0:
        return False
    if m == 0:
        return True
    D = sorted(set(int(x) for x in D if x > 0))
    if not D:
        return False
    g = reduce(gcd, D)
    if m % g:
        return False
    m //= g
    D = [x // g for x in D]
    if D[0] == 1 or m > frobenius_upper_bound(D):
        return True
    mask = (1 << (m + 1)) - 1
    reach = 1
    for d in D:
        # closure of reach under adding d, by doubling the shift
        step = d
        while step <= m:
            reach |= (reach << step) & mask
            step *= 2
        # one more pass guarantees closure for multiples not of the form 2^k d
        prev = -1
        while prev != reach:
            prev = reach
            reach |= (reach << d) & mask
    return bool((reach >> m) & 1)


def _closure(reach: int, d: int, mask: int, limit: int) -> int:
    """Close a bitset under adding d any number of times, by doubling the shift."""
    step = d
    while step <= limit:
        reach |= (reach << step) & mask
        step *= 2
    return reach


def _coin_witness(reach: int, coins: Sequence[int], m: int) -> list[int]:
    """Counts per coin summing to m, read off a closed reachability bitset."""
    counts = [0] * len(coins)
    while m:
        for i, c in enumerate(coins):
            if c <= m and (reach >> (m - c)) & 1:
                counts[i] += 1
                m -= c
                break
        else:  # pragma: no cover - reach was not closed
            raise ArithmeticError("coin reconstruction failed")
    return counts


# ---------------------------------------------------------------- linear algebra


def _rref(A: list[list[Fraction]], b: list[Fraction]) -> tuple[list[list[Fraction]], list[Fraction], list[int]] | None:
    """Reduced row echelon form of [A | b]; None if inconsistent."""
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    piv: list[int] = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][col]
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        piv.append(col)
        r += 1
        if r == len(rows):
            break
    for row in rows[r:]:
        if row[-1] != 0:
            return None
    rows = rows[:r]
    return [row[:-1] for row in rows], [row[-1] for row in rows], piv


def _integer_rows(A: list[list[Fraction]], b: list[Fraction]) -> tuple[list[list[int]], list[int]]:
    out_A, out_b = [], []
    for row, bi in zip(A, b):
        den = 1
        for x in row + [bi]:
            den = den * x.denominator // gcd(den, x.denominator)
        out_A.append([int(x * den) for x in row])
        out_b.append(int(bi * den))
    return out_A, out_b


def integer_solution_lattice(sys: LinearSystem) -> tuple[list[int], list[list[int]]] | None:
    """All integer solutions of A m = b as x0 + span_Z(kernel), or None.

    Column-style Hermite reduction: unimodular column operations, recorded
    in U, bring A to a lower echelon form H; H y = b is solved by forward
    substitution and the columns of U beyond the pivots span the kernel.
    """
    n = sys.num_vars
    unit = [[int(i == j) for i in range(n)] for j in range(n)]
    if not sys.A:
        return [0] * n, unit
    red = _rref(sys.A, sys.b)
    if red is None:
        return None
    A, b, _ = red
    if not A:
        return [0] * n, unit
    M, rhs = _integer_rows(A, b)
    m = len(M)
    # column j = (A column j, U column j)
    cols = [[M[i][j] for i in range(m)] + unit[j] for j in range(n)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for i in range(m):
        active = [j for j in range(r, n) if cols[j][i] != 0]
        while len(active) > 1:
            j0 = min(active, key=lambda j: abs(cols[j][i]))
            p = cols[j0][i]
            for j in active:
                if j != j0:
                    q = cols[j][i] // p
                    if q:
                        c0 = cols[j0]
                        cols[j] = [x - q * y for x, y in zip(cols[j], c0)]
            active = [j for j in range(r, n) if cols[j][i] != 0]
        if active:
            j = active[0]
            cols[r], cols[j] = cols[j], cols[r]
            pivots.append((i, r))
            r += 1
    y: list[int] = []
    pi = 0
    for i in range(m):
        res = rhs[i] - sum(cols[k][i] * y[k] for k in range(len(y)))
        if pi < len(pivots) and pivots[pi][0] == i:
            p = cols[pivots[pi][1]][i]
            if res % p:
                return None
            y.append(res // p)
            pi += 1
        elif res != 0:
            return None
    x0 = [sum(y[k] * cols[k][m + j] for k in range(len(y))) for j in range(n)]
    kernel = [cols[k][m:] for k in range(r, n)]
    return x0, kernel


def has_integral_solution(sys: LinearSystem) -> bool:
    """Does A m = b have an integer solution (signs unrestricted)?"""
    return integer_solution_lattice(sys) is not None


# ---------------------------------------------------------------- bounded simplex

INF = None


class _Simplex:
    """Bounded-variable primal simplex in exact arithmetic with Bland's rule.

    Rows are A x = b, every variable has a finite lower bound and an optional
    upper bound.  Artificial variables give the Phase I start.
    """

    def __init__(self, A: list[list[Fraction]], b: list[Fraction], lo: list[Fraction],
                 up: list[Fraction | None], max_pivots: int = 200_000) -> None:
        m, n = len(A), (len(A[0]) if A else len(lo))
        self.m, self.n = m, n
        self.lo = list(lo) + [Fraction(0)] * m
        self.up: list[Fraction | None] = list(up) + [None] * m
        self.at_upper = [False] * (n + m)
        rows = []
        beta = []
        for i in range(m):
            rhs = b[i] - sum((A[i][j] * lo[j] for j in range(n) if A[i][j] and lo[j]), Fraction(0))
            sign = -1 if rhs < 0 else 1
            row = [x * sign for x in A[i]] + [Fraction(int(k == i)) for k in range(m)]
            rows.append(row)
            beta.append(rhs * sign)
        self.T = rows
        self.beta = beta
        self.basis = [n + i for i in range(m)]
        self.max_pivots = max_pivots
        self.pivots = 0

    def _value_nonbasic(self, j: int) -> Fraction:
        return self.up[j] if self.at_upper[j] else self.lo[j]  # type: ignore[return-value]

    def solution(self) -> list[Fraction]:
        x = [self._value_nonbasic(j) for j in range(self.n + self.m)]
        for i, bv in enumerate(self.basis):
            x[bv] = self.beta[i]
        return x

    def _run(self, c: list[Fraction]) -> str:
        """Maximize c.x from the current feasible basis. Returns 'optimal' or 'unbounded'."""
        N = self.n + self.m
        T, basis = self.T, self.basis
        while True:
            cb = [c[bv] for bv in basis]
            isbasic = set(basis)
            enter = -1
            direction = 0
            for j in range(N):
                if j in isbasic:
                    continue
                if self.up[j] is not None and self.up[j] == self.lo[j]:
                    continue
                d = c[j] - sum((cb[i] * T[i][j] for i in range(self.m) if cb[i] and T[i][j]), Fraction(0))
                if d > 0 and not self.at_upper[j]:
                    enter, direction = j, 1
                    break
                if d < 0 and self.at_upper[j]:
                    enter, direction = j, -1
                    break
            if enter < 0:
                return "optimal"
            j = enter
            theta: Fraction | None = None
            leave_row = -1
            leave_to_upper = False
            for i in range(self.m):
                t = T[i][j]
                if not t:
                    continue
                change = -direction * t  # d(beta_i)/d(theta)
                bv = basis[i]
                if change < 0:
                    lim = (self.beta[i] - self.lo[bv]) / (-change)
                    to_up = False
                elif self.up[bv] is not None:
                    lim = (self.up[bv] - self.beta[i]) / change
                    to_up = True
                else:
                    continue
                if theta is None or lim < theta or (lim == theta and bv < basis[leave_row]):
                    theta, leave_row, leave_to_upper = lim, i, to_up
            span = None if self.up[j] is None else self.up[j] - self.lo[j]
            if theta is None and span is None:
                return "unbounded"
            self.pivots += 1
            if self.pivots > self.max_pivots:
                raise BudgetExceeded("simplex pivot limit")
            if span is not None and (theta is None or span <= theta):
                for i in range(self.m):
                    if T[i][j]:
                        self.beta[i] -= direction * T[i][j] * span
                self.at_upper[j] = not self.at_upper[j]
                continue
            assert theta is not None
            for i in range(self.m):
                if T[i][j]:
                    self.beta[i] -= direction * T[i][j] * theta
            r = leave_row
            old = basis[r]
            entering_value = self._value_nonbasic(j) + direction * theta
            self.at_upper[old] = leave_to_upper
            piv = T[r][j]
            if piv != 1:
                T[r] = [x / piv for x in T[r]]
            pr = T[r]
            for i in range(self.m):
                if i != r:
                    f = T[i][j]
                    if f:
                        T[i] = [x - f * y for x, y in zip(T[i], pr)]
            basis[r] = j
            self.beta[r] = entering_value
            self.at_upper[j] = False

    def phase1(self) -> bool:
        N = self.n + self.m
        c = [Fraction(0)] * self.n + [Fraction(-1)] * self.m
        self._run(c)
        x = self.solution()
        if any(x[self.n + i] != 0 for i in range(self.m)):
            return False
        for i in range(self.m):
            self.up[self.n + i] = Fraction(0)
        del N
        return True

    def maximize(self, obj: Sequence[Fraction]) -> tuple[str, Fraction | None]:
        c = list(obj) + [Fraction(0)] * self.m
        status = self._run(c)
        if status == "unbounded":
            return status, None
        x = self.solution()
        return status, sum((a * v for a, v in zip(obj, x)), Fraction(0))


@dataclass
class LPResult:
    status: str  # "max" | "infeasible" | "unbounded"
    value: Fraction | None = None
    witness: list[Fraction] | None = None


def _prepared(sys: LinearSystem) -> tuple[list[list[Fraction]], list[Fraction]] | None:
    if not sys.A:
        return [], []
    red = _rref(sys.A, sys.b)
    if red is None:
        return None
    return red[0], red[1]


def lp_optimize(sys: LinearSystem, objective: Sequence[Fraction | int]) -> LPResult:
    prep = _prepared(sys)
    if prep is None:
        return LPResult("infeasible")
    A, b = prep
    s = _Simplex(A, b, sys.lower, sys.upper)
    if not s.phase1():
        return LPResult("infeasible")
    obj = [Fraction(x) for x in objective]
    status, val = s.maximize(obj)
    if status == "unbounded":
        return LPResult("unbounded")
    return LPResult("max", val, s.solution()[: sys.num_vars])


def lp_max(sys: LinearSystem, objective_var: int) -> LPResult:
    obj = [Fraction(int(j == objective_var)) for j in range(sys.num_vars)]
    return lp_optimize(sys, obj)


# ---------------------------------------------------------------- integer search

@dataclass
class SearchBudget:
    nodes: int = 20_000
    seconds: float = 600.0
    tighten: bool = True


def _tighten(A, b, lo, up, deadline: float) -> tuple[list, list] | None:
    """Per-variable LP bounds, reusing one Phase I basis. None if LP-infeasible."""
    s = _Simplex(A, b, lo, up)
    if not s.phase1():
        return None
    n = len(lo)
    lo, up = list(lo), list(up)
    for j in range(n):
        if time.monotonic() > deadline:
            raise BudgetExceeded("time limit during bound tightening")
        e = [Fraction(int(k == j)) for k in range(n)]
        st, v = s.maximize(e)
        if st == "optimal":
            nv = Fraction(floor(v))
            if up[j] is None or nv < up[j]:
                up[j] = nv
        st, v = s.maximize([-x for x in e])
        if st == "optimal":
            nv = Fraction(ceil(-v))
            if nv > lo[j]:
                lo[j] = nv
        if up[j] is not None and up[j] < lo[j]:
            return None
    return lo, up


def merge_duplicate_columns(sys: LinearSystem) -> tuple[LinearSystem, list[list[int]]]:
    """Collapse variables whose columns coincide; their bounds add up.

    Returns the reduced system and, for each reduced variable, the
    original indices it stands for.
    """
    n = sys.num_vars
    classes: dict[tuple, list[int]] = {}
    for j in range(n):
        classes.setdefault(tuple(row[j] for row in sys.A), []).append(j)
    members = list(classes.values())
    A = [[row[g[0]] for g in members] for row in sys.A]
    lower = [sum((max(Fraction(0), sys.lower[j]) for j in g), Fraction(0)) for g in members]
    upper = [None if any(sys.upper[j] is None for j in g) else sum((sys.upper[j] for j in g), Fraction(0))
             for g in members]
    return LinearSystem(A, list(sys.b), lower, upper), members


def _split_witness(sys: LinearSystem, members: list[list[int]], w: Sequence[int]) -> list[int]:
    x = [0] * sys.num_vars
    for g, total in zip(members, w):
        for j in g:
            x[j] = int(max(Fraction(0), sys.lower[j]))
            total -= x[j]
        for j in g:
            room = total if sys.upper[j] is None else min(total, int(sys.upper[j]) - x[j])
            x[j] += room
            total -= room
        assert total == 0
    return x


DP_WORK_CAP = 4 * 10**9  # bit operations allowed for the two-row generating-function stage


FROBENIUS_EXACT_LIMIT = 200_000  # smallest part above which the cheap bound is used


def _frobenius(parts: tuple[int, ...]) -> int:
    if min(parts) <= FROBENIUS_EXACT_LIMIT:
        return frobenius_number(parts)
    return frobenius_upper_bound(parts)


def _coin_solution(m: int, coins: Sequence[int]) -> list[int] | None:
    """Counts per coin summing to m, or None; large targets are first
    reduced with the biggest coin down to just above the Frobenius bound."""
    counts = [0] * len(coins)
    if m == 0:
        return counts
    if m < 0 or not coins:
        return None
    g = reduce(gcd, coins)
    if m % g:
        return None
    red = [c // g for c in coins]
    t = m // g
    F = _frobenius(tuple(red))
    big = max(range(len(red)), key=lambda i: red[i])
    if t > F + red[big]:
        k = (t - F - 1) // red[big]
        counts[big] += k
        t -= k * red[big]
    mask = (1 << (t + 1)) - 1
    reach = 1
    for c in red:
        reach = _closure(reach, c, mask, t)
    if not (reach >> t) & 1:
        return None
    for i, k in enumerate(_coin_witness(reach, red, t)):
        counts[i] += k
    return counts


def _two_row_dp(sys: LinearSystem) -> FeasibilityResult | None:
    """Exact decision for two rows with nonnegative coefficients.

    Columns with a positive first entry are processed by a knapsack over
    the first-row sum whose cells are bitsets of the "deficit" against
    the steepest second/first ratio; the remaining columns only touch
    the second row and form an ordinary coin problem. When every possible
    second-row remainder lies beyond the Frobenius bound of those coins,
    deficits are only tracked modulo the relevant gcd. Returns None when
    the shape does not apply or the work estimate exceeds DP_WORK_CAP.
    """
    if len(sys.A) != 2 or any(lo != 0 for lo in sys.lower):
        return None
    den = 1
    for row, bi in zip(sys.A, sys.b):
        for x in list(row) + [bi]:
            den = den * x.denominator // gcd(den, x.denominator)
    r1 = [int(x * den) for x in sys.A[0]]
    r2 = [int(x * den) for x in sys.A[1]]
    b1, b2 = int(sys.b[0] * den), int(sys.b[1] * den)
    if min(r1 + r2) < 0 or b1 < 0 or b2 < 0:
        return None
    P = [j for j in range(len(r1)) if r1[j] > 0]
    Z = [j for j in range(len(r1)) if r1[j] == 0 and r2[j] > 0]
    # upper bounds must be implied by the equations for the unbounded knapsack to be exact
    for j in P + Z:
        u = sys.upper[j]
        implied = min(bi // a for a, bi in ((r1[j], b1), (r2[j], b2)) if a > 0)
        if u is not None and u < implied:
            return None
    coins = [r2[j] for j in Z]

    def finish(xp: dict[int, int]) -> FeasibilityResult | None:
        x = [0] * len(r1)
        for j, v in xp.items():
            x[j] = v
        rest = b2 - sum(r2[j] * v for j, v in xp.items())
        sol = _coin_solution(rest, coins)
        if sol is None:
            return None
        for j, v in zip(Z, sol):
            x[j] += v
        if not sys.satisfied_by(x):
            raise ArithmeticError("two-row witness failed verification")
        return FeasibilityResult("feasible", "dp", x, detail="two-row generating function")

    if not P:
        if b1:
            return FeasibilityResult("infeasible", "dp", detail="first row unreachable")
        res = finish({})
        return res or FeasibilityResult("infeasible", "dp", detail="second row not a partition")
    g1 = reduce(gcd, [r1[j] for j in P])
    if b1 % g1:
        return FeasibilityResult("infeasible", "dp", detail="first row gcd")
    lam = max(Fraction(r2[j], r1[j]) for j in P)
    L, M = lam.numerator, lam.denominator
    defs = [L * r1[j] - M * r2[j] for j in P]
    gd = reduce(gcd, defs) or 1
    S = b1 // g1
    steps = [r1[j] // g1 for j in P]
    dsteps = [d // gd for d in defs]
    # M * (second-row remainder) = base + gd * D, D the total deficit
    base = M * b2 - L * b1
    modulus = None
    if coins:
        gz = reduce(gcd, coins)
        zc = [c // gz for c in coins]
        F = _frobenius(tuple(zc))
        if base >= 0 and base // M > F * gz:
            modulus = M * gz // gcd(M * gz, gd)
    if modulus is not None:
        bits = modulus
        full = (1 << bits) - 1

        def shift(v: int, d: int) -> int:
            d %= bits
            return ((v << d) | (v >> (bits - d))) & full if d else v
    else:
        bits = int(max(Fraction(d, a) for d, a in zip(dsteps, steps)) * S) + 1
        full = (1 << bits) - 1

        def shift(v: int, d: int) -> int:
            return (v << d) & full
    if (S + 1) * len(P) * (bits // 64 + 1) > DP_WORK_CAP:
        return None
    reach = [0] * (S + 1)
    reach[0] = 1
    for a, d in zip(steps, dsteps):
        for t in range(a, S + 1):
            prev = reach[t - a]
            if prev:
                reach[t] |= shift(prev, d)
    final = reach[S]
    if not final:
        return FeasibilityResult("infeasible", "dp", detail="first row unreachable")
    candidates = []
    k = 0
    v = final
    while v:
        if v & 1:
            if modulus is not None:
                ok = (base + gd * k) % (M * gz) == 0
            else:
                num = base + gd * k
                ok = num >= 0 and num % M == 0
            if ok:
                candidates.append(k)
        v >>= 1
        k += 1
    for k in candidates:
        xp: dict[int, int] = {}
        s_left, d_left = S, k
        while s_left:
            for idx, (a, d) in enumerate(zip(steps, dsteps)):
                if a > s_left:
                    continue
                prev = (d_left - d) % bits if modulus is not None else d_left - d
                if prev >= 0 and (reach[s_left - a] >> prev) & 1:
                    xp[P[idx]] = xp.get(P[idx], 0) + 1
                    s_left -= a
                    d_left = prev
                    break
            else:  # pragma: no cover
                raise ArithmeticError("knapsack reconstruction failed")
        res = finish(xp)
        if res is not None:
            return res
        if modulus is not None:  # pragma: no cover - beyond the Frobenius bound every residue completes
            raise ArithmeticError("residue class failed to complete")
    return FeasibilityResult("infeasible", "dp",
                             detail=f"{len(candidates)} admissible deficits, none completes the second row")


LATTICE_DIM_LIMIT = 12  # kernel dimension up to which the lattice enumeration replaces branch and bound


def _reduced_kernel(kernel: list[list[int]]) -> list[list[int]]:
    if len(kernel) < 2:
        return kernel
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[ZZ(v) for v in row] for row in kernel], (len(kernel), len(kernel[0])), ZZ)
    return [[int(v) for v in row] for row in dm.lll().to_list()]


def _lattice_search(sys: LinearSystem, A, b, lo, up, lattice, budget: SearchBudget,
                    deadline: float) -> FeasibilityResult:
    """Enumerate x = x0 + K t over an LLL-reduced kernel basis K.

    At every node the exact LP range of each unfixed coordinate of t is
    computed (with the fixed coordinates imposed as equalities on x); the
    coordinate with the fewest integer values is branched on next.
    """
    n = sys.num_vars
    x0, kernel = lattice
    K = _reduced_kernel(kernel)
    k = len(K)
    if k == 0:
        if sys.satisfied_by(x0):
            return FeasibilityResult("feasible", "search", list(x0), detail="unique integer solution")
        return FeasibilityResult("infeasible", "search", detail="unique integer solution violates bounds")
    # t = T (x - x0) with T = (K K^T)^{-1} K, K stored row-wise
    gram = [[Fraction(sum(a * c for a, c in zip(K[i], K[j]))) for j in range(k)] for i in range(k)]
    ginv = _inverse_matrix(gram)
    T = [[sum((ginv[i][l] * K[l][j] for l in range(k)), Fraction(0)) for j in range(n)] for i in range(k)]
    offs = [sum((T[i][j] * x0[j] for j in range(n)), Fraction(0)) for i in range(k)]
    nodes = 0

    def ranges(fixed: dict[int, int]) -> dict[int, tuple[int, int]] | None:
        nonlocal nodes
        rows = list(A) + [T[i] for i in fixed]
        rhs = list(b) + [v + offs[i] for i, v in fixed.items()]
        nodes += 1
        red = _rref(rows, rhs)
        if red is None:
            return None
        s = _Simplex(red[0], red[1], lo, up)
        if not s.phase1():
            return None
        out = {}
        for i in range(k):
            if i in fixed:
                continue
            st, hi = s.maximize(T[i])
            st2, neg = s.maximize([-x for x in T[i]])
            if st != "optimal" or st2 != "optimal":
                raise BudgetExceeded("unbounded lattice direction")
            out[i] = (ceil(-neg - offs[i]), floor(hi - offs[i]))
        return out

    def dfs(fixed: dict[int, int]) -> list[int] | None:
        if nodes >= budget.nodes:
            raise BudgetExceeded(f"node budget {budget.nodes} exhausted")
        if time.monotonic() > deadline:
            raise BudgetExceeded("time budget exhausted")
        if len(fixed) == k:
            x = [x0[j] + sum(fixed[i] * K[i][j] for i in range(k)) for j in range(n)]
            return x if sys.satisfied_by(x) else None
        rg = ranges(fixed)
        if rg is None:
            return None
        i, (a, z) = min(rg.items(), key=lambda kv: kv[1][1] - kv[1][0])
        for v in range(a, z + 1):
            res = dfs({**fixed, i: v})
            if res is not None:
                return res
        return None

    w = dfs({})
    if w is not None:
        return FeasibilityResult("feasible", "search", w, detail=f"lattice enumeration, {nodes} nodes")
    return FeasibilityResult("infeasible", "search", detail=f"lattice enumeration exhausted after {nodes} nodes")


def _inverse_matrix(M: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(M)]
    for c in range(k):
        p = next(r for r in range(c, k) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[k:] for row in aug]


def has_nonneg_integer_solution(sys: LinearSystem, budget: SearchBudget | None = None) -> FeasibilityResult:
    """Decide whether ``sys`` has a nonnegative integer solution.

    Duplicate columns are merged first. The solver then tries, in order, a
    rational consistency check, an integrality check over the lattice of
    integer solutions, the LP relaxation, a two-row generating-function DP,
    bound tightening, and finally a lattice or branch-and-bound search. Only
    the search can run out of budget, in which case the status is "unknown".
    """
    if sys.A and sys.num_vars:
        red, members = merge_duplicate_columns(sys)
        if len(members) < sys.num_vars:
            res = _solve(red, budget)
            if res.witness is not None:
                res.witness = _split_witness(sys, members, res.witness)
                if not sys.satisfied_by(res.witness):
                    raise ArithmeticError("expanded witness failed verification")
            return res
    return _solve(sys, budget)


def _solve(sys: LinearSystem, budget: SearchBudget | None = None) -> FeasibilityResult:
    budget = budget or SearchBudget()
    deadline = time.monotonic() + budget.seconds
    n = sys.num_vars
    lo = [max(Fraction(0), x) for x in sys.lower]
    up = list(sys.upper)
    if any(u is not None and u < l for l, u in zip(lo, up)):
        return FeasibilityResult("infeasible", "lp", detail="empty bound box")
    if n == 0:
        ok = all(bi == 0 for bi in sys.b)
        return FeasibilityResult("feasible" if ok else "infeasible", "rational", [] if ok else None)
    prep = _prepared(sys)
    if prep is None:
        return FeasibilityResult("infeasible", "rational", detail="inconsistent over the rationals")
    A, b = prep
    lattice = integer_solution_lattice(sys)
    if lattice is None:
        return FeasibilityResult("infeasible", "integrality", detail="no integer solution")
    try:
        root = _Simplex(A, b, lo, up)
        if not root.phase1():
            return FeasibilityResult("infeasible", "lp", detail="LP relaxation infeasible")
        x0 = root.solution()[:n]
        if all(v.denominator == 1 for v in x0):
            w = [int(v) for v in x0]
            if sys.satisfied_by(w):
                return FeasibilityResult("feasible", "lp", w, detail="integral LP vertex")
        dp = _two_row_dp(sys)
        if dp is not None:
            return dp
        if budget.tighten:
            t = _tighten(A, b, lo, up, deadline)
            if t is None:
                return FeasibilityResult("infeasible", "lp", detail="LP relaxation infeasible")
            lo, up = t
        if len(lattice[1]) <= LATTICE_DIM_LIMIT and all(u is not None for u in up):
            return _lattice_search(sys, A, b, lo, up, lattice, budget, deadline)
        nodes = 0
        stack = [(lo, up)]
        while stack:
            if nodes >= budget.nodes:
                return FeasibilityResult("unknown", "search", detail=f"node budget {budget.nodes} exhausted")
            if time.monotonic() > deadline:
                return FeasibilityResult("unknown", "search", detail="time budget exhausted")
            nodes += 1
            l, u = stack.pop()
            s = _Simplex(A, b, l, u)
            if not s.phase1():
                continue
            x = s.solution()[:n]
            frac = [(abs(v - round(v)), j) for j, v in enumerate(x) if v.denominator != 1]
            if not frac:
                w = [int(v) for v in x]
                if sys.satisfied_by(w):
                    return FeasibilityResult("feasible", "search", w, detail=f"{nodes} nodes")
                raise ArithmeticError("integral LP vertex failed verification")
            _, j = max(frac)
            v = x[j]
            down_u = list(u)
            down_u[j] = Fraction(floor(v))
            up_l = list(l)
            up_l[j] = Fraction(ceil(v))
            children = [(l, down_u), (up_l, u)]
            if v - floor(v) > Fraction(1, 2):
                children.reverse()
            stack.extend(reversed(children))
        return FeasibilityResult("infeasible", "search", detail=f"search exhausted after {nodes} nodes")
    except BudgetExceeded as exc:
        return FeasibilityResult("unknown", "search", detail=str(exc))
