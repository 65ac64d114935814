"""Finite-dimensional simple Lie algebras: roots, weights and weight moments.

Weights are tuples of Dynkin labels.  Elements h of the Cartan subalgebra are
taken in the coroot lattice and written in the basis of simple coroots, so that
mu(h) = sum_i n_i * mu_i is an integer for every integral weight mu.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from typing import Iterable, Sequence

import numpy as np

from .rootsys import SimpleType

Weight = tuple[int, ...]


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded."""


def _simple_root_gram(t: SimpleType) -> list[list[Fraction]]:
    """Gram matrix of simple roots (Bourbaki numbering), long roots of norm 2."""
    n, fam = t.rank, t.family
    B = [[Fraction(0)] * n for _ in range(n)]

    def link(i: int, j: int, v: Fraction | int) -> None:
        B[i][j] = B[j][i] = Fraction(v)

    if fam == "A":
        for i in range(n):
            B[i][i] = Fraction(2)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif fam == "B":
        for i in range(n):
            B[i][i] = Fraction(2)
        B[n - 1][n - 1] = Fraction(1)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif fam == "C":
        for i in range(n):
            B[i][i] = Fraction(1)
        B[n - 1][n - 1] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, Fraction(-1, 2))
        link(n - 2, n - 1, -1)
    elif fam == "D":
        for i in range(n):
            B[i][i] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 3, n - 1, -1)
    elif fam == "E":
        for i in range(n):
            B[i][i] = Fraction(2)
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif fam == "F":
        B[0][0] = B[1][1] = Fraction(2)
        B[2][2] = B[3][3] = Fraction(1)
        link(0, 1, -1)
        link(1, 2, -1)
        link(2, 3, Fraction(-1, 2))
    elif fam == "G":
        B[0][0] = Fraction(2, 3)
        B[1][1] = Fraction(2)
        link(0, 1, -1)
    else:  # pragma: no cover - SimpleType validates
        raise ValueError(t)
    return B


def _inverse(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True, eq=False)
class LieData:
    type: SimpleType
    gram: tuple[tuple[Fraction, ...], ...]            # (alpha_i, alpha_j)
    cartan_matrix: tuple[tuple[int, ...], ...]        # a_ij = <alpha_i^vee, alpha_j>
    simple_root_labels: tuple[Weight, ...]            # Dynkin labels of alpha_j
    positive_roots: tuple[tuple[int, ...], ...]       # in the simple-root basis
    positive_root_labels: tuple[Weight, ...]
    positive_coroots: tuple[tuple[Fraction, ...], ...]  # in the simple-coroot basis
    weight_gram: tuple[tuple[Fraction, ...], ...]     # (omega_i, omega_j)
    coroot_gram: tuple[tuple[int, ...], ...]          # (alpha_i^vee, alpha_j^vee)
    highest_root: tuple[int, ...]
    comarks: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @property
    def dual_coxeter(self) -> int:
        return 1 + sum(self.comarks)

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def fundamental_weights(self) -> tuple[Weight, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @property
    def theta(self) -> Weight:
        return self.root_to_labels(self.highest_root)

    @property
    def theta_coroot(self) -> tuple[int, ...]:
        return self.comarks

    def root_to_labels(self, coeffs: Sequence[int]) -> Weight:
        n = self.rank
        return tuple(sum(self.cartan_matrix[i][j] * coeffs[j] for j in range(n)) for i in range(n))

    def form(self, a: Sequence, b: Sequence) -> Fraction:
        """(a, b) for weights given by Dynkin labels."""
        G = self.weight_gram
        n = self.rank
        return sum((a[i] * G[i][j] * b[j] for i in range(n) for j in range(n) if a[i] and b[j]), Fraction(0))

    def coroot_norm(self, n: Sequence[int]) -> int:
        K = self.coroot_gram
        r = self.rank
        return sum(n[i] * K[i][j] * n[j] for i in range(r) for j in range(r))

    def adjoint_weight(self) -> Weight:
        return self.theta


@lru_cache(maxsize=None)
def lie_data(t: SimpleType) -> LieData:
    n = t.rank
    B = _simple_root_gram(t)
    cartan = tuple(tuple(int(2 * B[i][j] / B[i][i]) for j in range(n)) for i in range(n))
    labels = tuple(tuple(cartan[i][j] for i in range(n)) for j in range(n))

    # positive roots by root strings
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            pair = [sum(cartan[i][k] * beta[k] for k in range(n)) for i in range(n)]
            for i in range(n):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - pair[i] > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    pos = sorted(roots, key=lambda r: (sum(r), r))

    root_labels = [tuple(sum(cartan[i][k] * r[k] for k in range(n) if r[k]) for i in range(n)) for r in pos]
    half = [B[i][i] / 2 for i in range(n)]
    coroots = []
    for r, lab in zip(pos, root_labels):
        # (beta, beta) = sum_i r_i (alpha_i, beta) and (alpha_i, beta) = |alpha_i|^2/2 <beta, alpha_i^vee>
        nr = sum((r[i] * half[i] * lab[i] for i in range(n) if r[i] and lab[i]), Fraction(0))
        coroots.append(tuple(Fraction(r[i]) * B[i][i] / nr for i in range(n)))
    coroots = tuple(coroots)
    D = [B[i][i] / 2 for i in range(n)]
    Binv = _inverse(B)
    wg = tuple(tuple(D[i] * Binv[i][j] * D[j] for j in range(n)) for i in range(n))
    cg = tuple(tuple(int(4 * B[i][j] / (B[i][i] * B[j][j])) for j in range(n)) for i in range(n))
    theta = pos[-1]
    comarks = tuple(int(theta[i] * B[i][i] / 2) for i in range(n))
    data = LieData(
        type=t,
        gram=tuple(map(tuple, B)),
        cartan_matrix=cartan,
        simple_root_labels=labels,
        positive_roots=tuple(pos),
        positive_root_labels=tuple(root_labels),
        positive_coroots=coroots,
        weight_gram=wg,
        coroot_gram=cg,
        highest_root=theta,
        comarks=comarks,
    )
    return data


# ---------------------------------------------------------------- dimensions

def weyl_dim(data: LieData, lam: Sequence[int]) -> int:
    if any(x < 0 for x in lam):
        raise ValueError(f"weight {tuple(lam)} is not dominant")
    return _weyl_dim_cached(data.type, tuple(lam))


@lru_cache(maxsize=None)
def _integer_coroots(t: SimpleType) -> tuple[tuple[tuple[int, ...], ...], int]:
    cvs = tuple(tuple(int(c) for c in cv) for cv in lie_data(t).positive_coroots)
    den = 1
    for cv in cvs:
        den *= sum(cv)
    return cvs, den


@lru_cache(maxsize=None)
def _weyl_dim_cached(t: SimpleType, lam: Weight) -> int:
    cvs, den = _integer_coroots(t)
    shifted = [x + 1 for x in lam]
    num = 1
    for cv in cvs:
        num *= sum(c * x for c, x in zip(cv, shifted))
    return num // den


def formal_weyl_dim(data: LieData, lam: Sequence[int]) -> Fraction:
    """The Weyl dimension product evaluated at an arbitrary weight."""
    num, den = Fraction(1), Fraction(1)
    for cv in data.positive_coroots:
        num *= sum(c * (x + 1) for c, x in zip(cv, lam))
        den *= sum(cv)
    return num / den


def reflect(data: LieData, lam: Sequence[int], i: int) -> Weight:
    a = lam[i]
    col = data.simple_root_labels[i]
    return tuple(x - a * y for x, y in zip(lam, col))


def dominant_representative(data: LieData, lam: Sequence[int]) -> tuple[Weight, int]:
    """Dominant weight in the Weyl orbit of lam and the parity of reflections used."""
    lam = tuple(lam)
    count = 0
    while True:
        i = next((i for i, x in enumerate(lam) if x < 0), -1)
        if i < 0:
            return lam, count
        lam = reflect(data, lam, i)
        count += 1


def signed_dominant(data: LieData, gamma: Sequence[int]) -> tuple[int, Weight | None]:
    shifted = tuple(x + 1 for x in gamma)
    nu, count = dominant_representative(data, shifted)
    if any(x == 0 for x in nu):
        return 0, None
    return (-1) ** count, tuple(x - 1 for x in nu)


# ---------------------------------------------------------------- weight systems

@dataclass(frozen=True, eq=False)
class WeightSystem:
    """Weight multiset stored by dominant representatives."""

    data: LieData
    dominant: dict[Weight, int]

    @property
    def dim(self) -> int:
        return sum(m * orbit_size(self.data, mu) for mu, m in self.dominant.items())

    @property
    def entries(self) -> dict[Weight, int]:
        out: dict[Weight, int] = {}
        for mu, m in self.dominant.items():
            for nu in weyl_orbit(self.data, mu):
                out[nu] = m
        return out

    @classmethod
    def from_entries(cls, data: LieData, entries: dict[Weight, int] | Counter) -> WeightSystem:
        dom = {mu: m for mu, m in entries.items() if m and all(x >= 0 for x in mu)}
        return cls(data, dom)

    def combine(self, other: WeightSystem, sign: int = 1) -> WeightSystem:
        out = Counter(self.dominant)
        for mu, m in other.dominant.items():
            out[mu] += sign * m
        if any(v < 0 for v in out.values()):
            raise ValueError("negative multiplicity")
        return WeightSystem(self.data, {k: v for k, v in out.items() if v})


def weyl_orbit(data: LieData, mu: Sequence[int], cap: int | None = None) -> list[Weight]:
    mu, _ = dominant_representative(data, mu)
    seen = {mu}
    queue = deque([mu])
    out = [mu]
    while queue:
        lam = queue.popleft()
        for i, x in enumerate(lam):
            if x > 0:
                nu = reflect(data, lam, i)
                if nu not in seen:
                    seen.add(nu)
                    out.append(nu)
                    queue.append(nu)
                    if cap is not None and len(out) > cap:
                        raise ResourceLimitError(f"Weyl orbit of {mu} exceeds {cap}")
    return out


@lru_cache(maxsize=None)
def orbit_size(data: LieData, mu: Weight) -> int:
    """Size of the Weyl orbit; closed form for classical types."""
    mu, _ = dominant_representative(data, mu)
    fam = data.type.family
    if fam in "ABCD":
        v = _orth_coords(data, mu)
        return _classical_orbit_count(fam, v)
    return len(weyl_orbit(data, mu))


def _classical_orbit_count(fam: str, v: Sequence[int]) -> int:
    from math import factorial
    if fam == "A":
        cnt = Counter(v)
        r = factorial(len(v))
        for c in cnt.values():
            r //= factorial(c)
        return r
    absv = Counter(abs(x) for x in v)
    r = factorial(len(v))
    for c in absv.values():
        r //= factorial(c)
    nonzero = sum(1 for x in v if x)
    r *= 2 ** nonzero
    if fam == "D" and nonzero == len(v) and nonzero > 0:
        r //= 2
    return r


def dominant_weights_below(data: LieData, lam: Weight) -> list[Weight]:
    seen = {lam}
    queue = deque([lam])
    while queue:
        mu = queue.popleft()
        for a in data.positive_root_labels:
            nu = tuple(x - y for x, y in zip(mu, a))
            if nu not in seen and all(x >= 0 for x in nu):
                seen.add(nu)
                queue.append(nu)
    return list(seen)


def weight_system(data: LieData, lam: Sequence[int], cap: int | None = None) -> WeightSystem:
    """Freudenthal recursion over dominant weights (memoized; treat the result as read-only)."""
    return _weight_system(data, tuple(lam), cap)


@lru_cache(maxsize=4096)
def _weight_system(data: LieData, lam: Weight, cap: int | None) -> WeightSystem:
    dimension = weyl_dim(data, lam)
    if cap is not None and dimension > cap:
        raise ResourceLimitError(f"weight system of {lam} has dimension {dimension} > {cap}")
    doms = dominant_weights_below(data, lam)
    cinv = _inverse([[Fraction(x) for x in row] for row in data.cartan_matrix])

    def depth(mu: Weight) -> Fraction:
        diff = [a - b for a, b in zip(lam, mu)]
        return sum(sum(cinv[i][j] * diff[j] for j in range(len(diff))) for i in range(len(diff)))

    doms.sort(key=depth)
    lr = tuple(x + 1 for x in lam)
    top = data.form(lr, lr)
    mult: dict[Weight, int] = {lam: 1}
    roots = data.positive_root_labels
    for mu in doms[1:]:
        total = Fraction(0)
        for a in roots:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                rep, _ = dominant_representative(data, nu)
                m = mult.get(rep, 0)
                if not m:
                    break
                total += data.form(nu, a) * m
                k += 1
        mr = tuple(x + 1 for x in mu)
        val = 2 * total / (top - data.form(mr, mr))
        if val.denominator != 1:
            raise ArithmeticError("non-integral Freudenthal multiplicity")
        if val:
            mult[mu] = int(val)
    return WeightSystem(data, mult)


def adjoint_weights(data: LieData) -> WeightSystem:
    return weight_system(data, data.theta)


def tensor_weights(ws1: WeightSystem, ws2: WeightSystem) -> WeightSystem:
    out: Counter = Counter()
    e2 = ws2.entries
    for mu, m in ws1.entries.items():
        for nu, n in e2.items():
            out[tuple(a + b for a, b in zip(mu, nu))] += m * n
    return WeightSystem.from_entries(ws1.data, out)


def sym2_weights(data: LieData, ws: WeightSystem | None = None) -> WeightSystem:
    ws = adjoint_weights(data) if ws is None else ws
    items = list(ws.entries.items())
    out: Counter = Counter()
    for a, (mu, m) in enumerate(items):
        out[tuple(2 * x for x in mu)] += m * (m + 1) // 2
        for nu, n in items[a + 1:]:
            out[tuple(x + y for x, y in zip(mu, nu))] += m * n
    return WeightSystem.from_entries(data, out)


# ---------------------------------------------------------------- Cartan elements and moments

@dataclass(frozen=True)
class CartanElement:
    """h = sum_i n_i alpha_i^vee on one simple factor."""

    factor_index: int
    coroot_coordinates: tuple[int, ...]

    def pairing(self, mu: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.coroot_coordinates, mu))

    def norm(self, data: LieData, level: int) -> int:
        """<h, h> = k (h, h); an even integer since the coroot lattice is even."""
        return level * data.coroot_norm(self.coroot_coordinates)


def power_sums_product(p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Power sums of X (+) Y with weights added, from those of X and Y."""
    J = min(len(p), len(q))
    return [sum(comb(j, i) * p[i] * q[j - i] for i in range(j + 1)) for j in range(J)]


def power_sums_sym2(p: Sequence[int]) -> list[int]:
    J = len(p)
    out = []
    for j in range(J):
        s = sum(comb(j, i) * p[i] * p[j - i] for i in range(j + 1)) + (2 ** j) * p[j]
        out.append(s // 2)
    return out


def _orth_coords(data: LieData, mu: Sequence[int]) -> tuple[int, ...]:
    """Doubled orthogonal coordinates of a weight (classical types)."""
    fam, n = data.type.family, data.rank
    if fam in "AC":
        size = n + 1 if fam == "A" else n
        out = []
        acc = 0
        for k in range(size - 1, -1, -1):
            if k < n:
                acc += mu[k]
            out.append(2 * acc)
        return tuple(reversed(out))
    if fam == "B":
        out = []
        acc = 0
        for k in range(n - 2, -1, -1):
            acc += mu[k]
            out.append(2 * acc + mu[n - 1])
        return tuple(reversed(out)) + (mu[n - 1],)
    if fam == "D":
        spin = mu[n - 2] + mu[n - 1]
        out = []
        acc = 0
        for k in range(n - 3, -1, -1):
            acc += mu[k]
            out.append(2 * acc + spin)
        return tuple(reversed(out)) + (spin, mu[n - 1] - mu[n - 2])
    raise ValueError(fam)


def _orth_coroot(data: LieData, h: Sequence[int]) -> tuple[int, ...]:
    """Orthogonal coordinates of h = sum n_i alpha_i^vee (classical types)."""
    fam, n = data.type.family, data.rank
    nn = list(h)
    if fam == "A":
        ext = [0] + nn + [0]
        return tuple(ext[k + 1] - ext[k] for k in range(n + 1))
    prev = [0] + nn
    e = [nn[k] - prev[k] for k in range(n)]
    if fam == "B":
        e[n - 1] = 2 * nn[n - 1] - nn[n - 2]
    elif fam == "D":
        e[n - 2] = nn[n - 2] + nn[n - 1] - nn[n - 3]
        e[n - 1] = nn[n - 1] - nn[n - 2]
    return tuple(e)


def _classical_orbit_moments(fam: str, v: Sequence[int], e: Sequence[int], J: int) -> list[int]:
    """Power sums sum_{x in W v} (x . e)^j, j <= J, by DP over coordinates."""
    signed = fam != "A"
    vals = sorted(Counter(abs(x) if signed else x for x in v).items())
    keys = [a for a, _ in vals]
    start = tuple(c for _, c in vals)
    parity_target = sum(1 for x in v if x < 0) % 2
    track_parity = fam == "D" and all(x != 0 for x in v) and len(v) > 0
    states: dict[tuple, list[int]] = {(start, 0): [1] + [0] * J}
    binom = [[comb(j, i) for i in range(j + 1)] for j in range(J + 1)]
    for ek in e:
        nxt: dict[tuple, list[int]] = {}
        for (counts, par), p in states.items():
            for idx, c in enumerate(counts):
                if not c:
                    continue
                rem = counts[:idx] + (c - 1,) + counts[idx + 1:]
                a = keys[idx]
                opts = [(a, 0)] if (not signed or a == 0) else [(a, 0), (-a, 1)]
                for x, flip in opts:
                    t = x * ek
                    if t == 0:
                        q = p
                    else:
                        pw = [1]
                        for _ in range(J):
                            pw.append(pw[-1] * t)
                        q = [sum(binom[j][i] * p[i] * pw[j - i] for i in range(j + 1)) for j in range(J + 1)]
                    key = (rem, (par ^ flip) if track_parity else 0)
                    acc = nxt.get(key)
                    if acc is None:
                        nxt[key] = list(q)
                    else:
                        for j in range(J + 1):
                            acc[j] += q[j]
        states = nxt
    total = [0] * (J + 1)
    for (_, par), p in states.items():
        if track_parity and par != parity_target:
            continue
        for j in range(J + 1):
            total[j] += p[j]
    return total


DEFAULT_ORBIT_CAP = 2_000_000


@lru_cache(maxsize=64)
def _orbit_array(data: LieData, mu: Weight, orbit_cap: int) -> np.ndarray:
    # exceptional orbits are enumerated once and reused for every h
    return np.array(weyl_orbit(data, mu, cap=orbit_cap), dtype=np.int64)


@lru_cache(maxsize=200_000)
def orbit_moments(data: LieData, mu: Weight, h: tuple[int, ...], J: int,
                  orbit_cap: int = DEFAULT_ORBIT_CAP) -> tuple[int, ...]:
    """sum over the Weyl orbit of mu of mu'(h)^j for j = 0..J."""
    mu, _ = dominant_representative(data, mu)
    if not any(h):
        return (orbit_size(data, mu),) + (0,) * J
    fam = data.type.family
    if fam in "ABCD":
        p = _classical_orbit_moments(fam, _orth_coords(data, mu), _orth_coroot(data, h), J)
        return tuple(x // (1 << j) for j, x in enumerate(p))
    vals = _orbit_array(data, mu, orbit_cap) @ np.array(h, dtype=np.int64)
    uniq, counts = np.unique(vals, return_counts=True)
    u = [int(x) for x in uniq]
    c = [int(x) for x in counts]
    return tuple(sum(ci * ui ** j for ui, ci in zip(u, c)) for j in range(J + 1))


def orbit_moments_bfs(data: LieData, mu: Weight, h: Sequence[int], J: int) -> list[int]:
    """Reference implementation by explicit orbit enumeration."""
    out = [0] * (J + 1)
    for nu in weyl_orbit(data, mu):
        x = sum(a * b for a, b in zip(nu, h))
        for j in range(J + 1):
            out[j] += x ** j
    return out


def moments(ws: WeightSystem, h: CartanElement | Sequence[int], j_max: int) -> list[int]:
    """S^j = sum_mu m_mu mu(h)^j for j = 0..j_max."""
    hv = tuple(h.coroot_coordinates if isinstance(h, CartanElement) else h)
    out = [0] * (j_max + 1)
    for mu, m in ws.dominant.items():
        p = orbit_moments(ws.data, mu, hv, j_max)
        for j in range(j_max + 1):
            out[j] += m * p[j]
    return out


def coweight_multiple(data: LieData, i: int) -> tuple[int, ...]:
    """Smallest positive multiple of the i-th fundamental coweight lying in the coroot lattice."""
    # fundamental coweight omega_i^vee has simple-coroot coordinates given by
    # the i-th column of the inverse of the transposed Cartan matrix.
    n = data.rank
    K = [[Fraction(data.cartan_matrix[j][k]) for k in range(n)] for j in range(n)]
    Kinv = _inverse(K)
    # (omega_i^vee, alpha_j) = delta_ij and <alpha_k^vee, alpha_j> = a_kj
    # so omega_i^vee = sum_k x_k alpha_k^vee with sum_k x_k a_kj = delta_ij
    x = Kinv[i]
    den = lcm(*[f.denominator for f in x])
    return tuple(int(f * den) for f in x)

