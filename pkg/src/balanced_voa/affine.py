"""Level-k affine data: integrable weights, conformal weights, graded dimensions."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, isqrt, lcm
from typing import Iterator, Sequence

from .liealg import (
    LieData,
    ResourceLimitError,
    Weight,
    WeightSystem,
    adjoint_weights,
    formal_weyl_dim,
    lie_data,
    power_sums_product,
    power_sums_sym2,
    moments,
    sym2_weights,
    weight_system,
    weyl_dim,
)
from .rootsys import Factor, RootSystem

DEFAULT_LATTICE_CAP = 5_000_000
DEFAULT_LABEL_CAP = 2_000_000


@dataclass(frozen=True)
class GradedDims:
    offset: Fraction
    dims: tuple[int, ...]


@dataclass(frozen=True)
class ModuleLabel:
    weights: tuple[Weight, ...]


def _data(factor: Factor) -> LieData:
    return lie_data(factor.type)


def integrable_weights(factor: Factor) -> list[Weight]:
    data = _data(factor)
    a = data.comarks
    out: list[Weight] = []

    def rec(i: int, budget: int, acc: list[int]) -> None:
        if i == len(a):
            out.append(tuple(acc))
            return
        for x in range(budget // a[i] + 1):
            acc.append(x)
            rec(i + 1, budget - x * a[i], acc)
            acc.pop()

    rec(0, factor.level, [])
    return out


def conformal_weight(factor: Factor, lam: Sequence[int]) -> Fraction:
    data = _data(factor)
    two_rho_plus = tuple(x + 2 for x in lam)
    return data.form(lam, two_rho_plus) / (2 * (factor.level + data.dual_coxeter))


def weights_below(factor: Factor, hmax: Fraction | int) -> list[tuple[Weight, Fraction]]:
    """Integrable weights with conformal weight <= hmax, with their conformal weights.

    The fundamental-weight Gram matrix has positive entries, so raising any
    label raises (lam, lam + 2 rho); that gives the pruning.
    """
    data = _data(factor)
    n = data.rank
    den = lcm(*[x.denominator for row in data.weight_gram for x in row])
    G = [[int(x * den) for x in row] for row in data.weight_gram]
    a = data.comarks
    kappa = factor.level + data.dual_coxeter
    bound = 2 * kappa * Fraction(hmax) * den
    out: list[tuple[Weight, Fraction]] = []
    lam = [0] * n
    # (lam, lam + 2 rho) * den, kept up to date as labels change
    g2rho = [2 * sum(row) for row in G]

    def value() -> int:
        return sum(lam[i] * (sum(G[i][j] * lam[j] for j in range(n)) + g2rho[i]) for i in range(n) if lam[i])

    def rec(i: int, budget: int) -> None:
        if i == n:
            out.append((tuple(lam), Fraction(value(), 2 * kappa * den)))
            return
        for x in range(budget // a[i] + 1):
            lam[i] = x
            if x and value() > bound:
                break
            rec(i + 1, budget - x * a[i])
        lam[i] = 0

    rec(0, factor.level)
    return out


# ---------------------------------------------------------------- Gannon's formula

def _ldl(K: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """K = L diag(D) L^T with L unit lower triangular (exact)."""
    n = len(K)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = Fraction(K[j][j]) - sum(L[j][k] ** 2 * D[k] for k in range(j))
        for i in range(j + 1, n):
            L[i][j] = (K[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def _ellipsoid_points(K: Sequence[Sequence[int]], center: Sequence[Fraction], radius: Fraction,
                      cap: int) -> Iterator[tuple[int, ...]]:
    """Integer beta with (beta - center)^T K (beta - center) <= radius, exactly.

    Fincke-Pohst recursion from the last coordinate down, using the LDL^T
    factorization: Q = sum_j D_j (y_j + sum_{i>j} L_ij y_i)^2 with y = beta - center.
    """
    n = len(K)
    L, D = _ldl(K)
    y = [Fraction(0)] * n
    beta = [0] * n
    count = 0

    def rec(j: int, rem: Fraction) -> Iterator[tuple[int, ...]]:
        nonlocal count
        shift = sum((L[i][j] * y[i] for i in range(j + 1, n)), Fraction(0))
        # need D_j (beta_j - center_j + shift)^2 <= rem
        mid = center[j] - shift
        q = rem / D[j]
        s = isqrt(q.numerator // q.denominator)
        lo = (mid - s - 1).__floor__()
        hi = (mid + s + 1).__ceil__()
        for b in range(lo, hi + 1):
            t = b - mid
            r2 = rem - D[j] * t * t
            if r2 < 0:
                continue
            beta[j] = b
            y[j] = b - center[j]
            count += 1
            if count > cap:
                raise ResourceLimitError(f"lattice enumeration exceeded {cap} nodes")
            if j == 0:
                yield tuple(beta)
            else:
                yield from rec(j - 1, r2)

    if radius < 0:
        return
    yield from rec(n - 1, Fraction(radius))


def _gl_power(d: int, N: int) -> list[int]:
    """Coefficients of prod_n (1 - q^n)^(-d) up to q^N."""
    out = [1] + [0] * N
    for n in range(1, N + 1):
        # multiply by (1 - q^n)^(-d) = sum_m C(d+m-1, m) q^{nm}
        new = [0] * (N + 1)
        for m in range(0, N // n + 1):
            c = _binom(d + m - 1, m)
            for i in range(N + 1 - n * m):
                if out[i]:
                    new[i + n * m] += c * out[i]
        out = new
    return out


def _binom(a: int, b: int) -> int:
    if b == 0:
        return 1
    r = 1
    for i in range(b):
        r = r * (a - i) // (i + 1)
    return r


_GD_CACHE: dict[tuple, tuple[int, ...]] = {}
_GD_LOCK = threading.Lock()


def graded_dims(factor: Factor, lam: Sequence[int], depth: int,
                lattice_cap: int = DEFAULT_LATTICE_CAP) -> GradedDims:
    lam = tuple(lam)
    key = (factor, lam, depth)
    with _GD_LOCK:
        hit = _GD_CACHE.get(key)
    data = _data(factor)
    hl = conformal_weight(factor, lam)
    offset = hl - Fraction(factor.dim * factor.level, factor.level + data.dual_coxeter) / 24
    if hit is not None:
        return GradedDims(offset, hit)
    kappa = factor.level + data.dual_coxeter
    K = data.coroot_gram
    n = data.rank
    x = [v + 1 for v in lam]  # lam + rho in Dynkin labels
    # |x + kappa nu(beta)|^2 = |x|^2 + 2 kappa beta.x + kappa^2 beta^T K beta
    # = kappa^2 (beta - c)^T K (beta - c) + |x|^2 - |x|^2_K-part, with c = -K^{-1} x / kappa
    from .liealg import _inverse
    Kinv = _inverse([[Fraction(v) for v in row] for row in K])
    center = [-sum(Kinv[i][j] * x[j] for j in range(n)) / kappa for i in range(n)]
    xx = data.form(x, x)
    const = xx - kappa * kappa * sum(center[i] * K[i][j] * center[j] for i in range(n) for j in range(n))
    rho2 = data.form([1] * n, [1] * n)
    bound = 2 * kappa * (hl + depth) + rho2  # |gamma + rho|^2 <= bound
    radius = (bound - const) / (kappa * kappa)
    theta = [0] * (depth + 1)
    for beta in _ellipsoid_points(K, center, radius, lattice_cap):
        shift = [sum(K[i][j] * beta[i] for i in range(n)) for j in range(n)]
        gamma = tuple(l + kappa * s for l, s in zip(lam, shift))
        gp = [g + 1 for g in gamma]
        e = (data.form(gp, gp) - rho2) / (2 * kappa) - hl
        if e.denominator != 1:
            raise ArithmeticError("non-integral exponent in Gannon sum")
        e = int(e)
        if 0 <= e <= depth:
            theta[e] += int(formal_weyl_dim(data, gamma))
    gl = _gl_power(factor.dim, depth)
    dims = tuple(sum(theta[i] * gl[m - i] for i in range(m + 1)) for m in range(depth + 1))
    if any(v < 0 for v in dims):
        raise ArithmeticError(f"negative graded dimension for {factor} {lam}: {dims}")
    with _GD_LOCK:
        _GD_CACHE[key] = dims
    return GradedDims(offset, dims)


# ---------------------------------------------------------------- vacuum depth two

def vacuum_depth2(factor: Factor) -> WeightSystem:
    data = _data(factor)
    adj = adjoint_weights(data)
    ws = sym2_weights(data, adj).combine(adj)
    if factor.level == 1:
        ws = ws.combine(weight_system(data, tuple(2 * x for x in data.theta)), sign=-1)
    return ws


def vacuum_depth2_dim(factor: Factor) -> int:
    d = factor.dim
    out = d * (d + 1) // 2 + d
    if factor.level == 1:
        data = _data(factor)
        out -= weyl_dim(data, tuple(2 * x for x in data.theta))
    return out


def vacuum_depth2_moments(factor: Factor, h: Sequence[int], J: int) -> list[int]:
    """Power sums of the depth-two vacuum space without materializing Sym^2."""
    data = _data(factor)
    p = moments(adjoint_weights(data), h, J)
    out = [a + b for a, b in zip(power_sums_sym2(p), p)]
    if factor.level == 1:
        q = moments(weight_system(data, tuple(2 * x for x in data.theta)), h, J)
        out = [a - b for a, b in zip(out, q)]
    return out


# ---------------------------------------------------------------- modules of given weight

@dataclass(frozen=True)
class ModuleOrbit:
    """Orbit of module labels under permutations of identical factors.

    parts[g] lists (weight, count) pairs of nonzero weights placed on the copies
    of group g; the remaining copies carry the zero weight.
    """

    parts: tuple[tuple[tuple[Weight, int], ...], ...]
    conformal_weight: Fraction
    top_dim: int
    size: int

    def labels(self, rs: RootSystem) -> list[ModuleLabel]:
        import itertools
        per_group = []
        for (fac, n), part in zip(rs.groups(), self.parts):
            pool: list[Weight] = []
            for w, c in part:
                pool.extend([w] * c)
            zero = tuple([0] * fac.type.rank)
            pool.extend([zero] * (n - len(pool)))
            per_group.append(sorted(set(itertools.permutations(pool))))
        out = []
        for combo in itertools.product(*per_group):
            out.append(ModuleLabel(tuple(w for grp in combo for w in grp)))
        return out


def module_orbits(rs: RootSystem, hmin: Fraction | int, hmax: Fraction | int,
                  integral_only: bool = True, cap: int = DEFAULT_LABEL_CAP,
                  groups: list[tuple[Factor, int]] | None = None) -> list[ModuleOrbit]:
    """Orbits of labels with total conformal weight in [hmin, hmax].

    By default labels are identified under permutations of identical factors;
    passing groups = [(f, 1) for f in rs.factors] gives one orbit per label.
    """
    hmax = Fraction(hmax)
    groups = rs.groups() if groups is None else groups
    per_group_weights = []
    for fac, _n in groups:
        data = _data(fac)
        ws = [(w, h, weyl_dim(data, w)) for w, h in weights_below(fac, hmax) if any(w)]
        ws.sort(key=lambda t: (t[1], t[0]))
        per_group_weights.append(ws)

    results: list[ModuleOrbit] = []

    def group_choices(g: int, budget: Fraction) -> Iterator[tuple[tuple, Fraction, int, int]]:
        """Multisets of nonzero weights for group g with total weight <= budget."""
        fac, n = groups[g]
        cands = per_group_weights[g]
        chosen: list[tuple[Weight, int]] = []

        def rec(i: int, slots: int, used: Fraction, dim: int, size_num: int) -> Iterator:
            yield (tuple(chosen), used, dim, size_num)
            for j in range(i, len(cands)):
                w, h, wd = cands[j]
                if used + h > budget:
                    break
                maxc = slots
                c = 1
                while c <= maxc and used + c * h <= budget:
                    chosen.append((w, c))
                    yield from rec(j + 1, slots - c, used + c * h, dim * wd ** c, size_num * factorial(c))
                    chosen.pop()
                    c += 1

        for part, used, dim, denom in rec(0, n, Fraction(0), 1, 1):
            placed = sum(c for _, c in part)
            size = factorial(n) // (denom * factorial(n - placed))
            yield part, used, dim, size

    # Visit groups so that the single-copy group with the most candidate weights
    # comes last; its weight is then looked up from the conformal weight still
    # needed instead of scanned.
    G = len(groups)
    order = list(range(G))
    singles = [g for g in range(G) if groups[g][1] == 1]
    lookup = None
    if integral_only and singles:
        last = max(singles, key=lambda g: len(per_group_weights[g]))
        order.remove(last)
        order.append(last)
        lookup = {}
        for w, h, wd in per_group_weights[last]:
            lookup.setdefault(h, []).append((w, wd))
    slots: list = [()] * G
    work = [0]
    work_cap = 1000 * cap + 1_000_000

    def emit(used: Fraction, dim: int, size: int) -> None:
        results.append(ModuleOrbit(tuple(slots), used, dim, size))
        if len(results) > cap:
            raise ResourceLimitError(f"more than {cap} module orbits")

    def rec_groups(pos: int, used: Fraction, dim: int, size: int) -> None:
        work[0] += 1
        if work[0] > work_cap:
            raise ResourceLimitError(f"module enumeration exceeded {work_cap} steps")
        if pos == G:
            if used >= hmin and (not integral_only or used.denominator == 1):
                emit(used, dim, size)
            return
        g = order[pos]
        if pos == G - 1 and lookup is not None:
            t = max(ceil(hmin), ceil(used))
            while t <= hmax:
                need = t - used
                if need == 0:
                    slots[g] = ()
                    emit(used, dim, size)
                else:
                    for w, wd in lookup.get(need, ()):
                        slots[g] = ((w, 1),)
                        emit(used + need, dim * wd, size)
                t += 1
            slots[g] = ()
            return
        for part, u, dm, sz in group_choices(g, hmax - used):
            slots[g] = part
            rec_groups(pos + 1, used + u, dim * dm, size * sz)
        slots[g] = ()

    rec_groups(0, Fraction(0), 1, 1)
    results.sort(key=lambda o: (o.conformal_weight, o.parts))
    return results


def modules_with_conformal_weight(rs: RootSystem, target: int, collapse: bool = False,
                                  cap: int = DEFAULT_LABEL_CAP):
    if rs.abelian_rank:
        raise ValueError("modules_with_conformal_weight needs a semisimple root system")
    orbits = module_orbits(rs, target, target, integral_only=False, cap=cap)
    if collapse:
        return orbits
    labels: list[ModuleLabel] = []
    for o in orbits:
        labels.extend(o.labels(rs))
        if len(labels) > cap:
            raise ResourceLimitError(f"more than {cap} module labels")
    return labels


def product_graded_dims(parts: Sequence[Sequence[int]], depth: int) -> list[int]:
    out = [1] + [0] * depth
    for p in parts:
        new = [0] * (depth + 1)
        for i, a in enumerate(out):
            if a:
                for j in range(depth + 1 - i):
                    if j < len(p):
                        new[i + j] += a * p[j]
        out = new
    return out


def vacuum_moment_products(adj: Sequence[Sequence[int]], vac: Sequence[Sequence[int]]) -> list[int]:
    """Depth-two vacuum power sums of a tensor product.

    adj[i] and vac[i] are the power sums of g_i and of L(k_i,0)_2 under h;
    the depth-two space is sum_i L_i,2 plus sum_{i<j} g_i (x) g_j.
    """
    J = len(adj[0]) if adj else 0
    out = [0] * J
    for v in vac:
        out = [a + b for a, b in zip(out, v)]
    total = [0] * J
    sq = [0] * J
    for a in adj:
        total = [x + y for x, y in zip(total, a)]
        sq = [x + y for x, y in zip(sq, power_sums_product(a, a))]
    cross = [(x - y) // 2 for x, y in zip(power_sums_product(total, total), sq)]
    return [a + b for a, b in zip(out, cross)]
