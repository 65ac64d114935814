"""Exact q-series, level-one modular forms and the moment identities."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence


@dataclass(frozen=True)
class QSeries:
    """sum_n coeffs[n] q^(offset + n), known for n < len(coeffs)."""

    offset: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def make(cls, coeffs: Iterable, offset: Fraction | int = 0) -> QSeries:
        return cls(Fraction(offset), tuple(Fraction(c) for c in coeffs))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def coefficient(self, exponent: Fraction | int) -> Fraction:
        n = Fraction(exponent) - self.offset
        if n.denominator != 1:
            return Fraction(0)
        if n > self.precision:
            raise ValueError(f"exponent {exponent} beyond precision")
        return self[int(n)]

    def truncate(self, N: int) -> QSeries:
        return QSeries(self.offset, self.coeffs[: N + 1])

    def _aligned(self, other: QSeries) -> tuple[list[Fraction], list[Fraction], Fraction]:
        diff = other.offset - self.offset
        if diff.denominator != 1:
            raise ValueError("offsets differ by a non-integer")
        d = int(diff)
        lo = min(self.offset, other.offset)
        a = list(self.coeffs)
        b = list(other.coeffs)
        if d > 0:
            b = [Fraction(0)] * d + b
        elif d < 0:
            a = [Fraction(0)] * (-d) + a
        return a, b, lo

    def __add__(self, other: QSeries | int | Fraction) -> QSeries:
        if not isinstance(other, QSeries):
            other = QSeries.make([other]).pad_like(self)
        a, b, lo = self._aligned(other)
        n = min(len(a), len(b))
        return QSeries(lo, tuple(x + y for x, y in zip(a[:n], b[:n])))

    __radd__ = __add__

    def pad_like(self, other: QSeries) -> QSeries:
        """Constant series extended with zeros to the precision of other."""
        top = other.offset + other.precision
        n = int(top - self.offset) + 1 if (top - self.offset).denominator == 1 else len(self.coeffs)
        return QSeries(self.offset, self.coeffs + (Fraction(0),) * max(0, n - len(self.coeffs)))

    def __neg__(self) -> QSeries:
        return QSeries(self.offset, tuple(-x for x in self.coeffs))

    def __sub__(self, other: QSeries | int | Fraction) -> QSeries:
        return self + (-other)

    def __rsub__(self, other: int | Fraction) -> QSeries:
        return (-self) + other

    def __mul__(self, other: QSeries | int | Fraction) -> QSeries:
        if not isinstance(other, QSeries):
            o = Fraction(other)
            return QSeries(self.offset, tuple(x * o for x in self.coeffs))
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[k - i] for i in range(k + 1) if a[i] and b[k - i]), Fraction(0)) for k in range(n)]
        return QSeries(self.offset + other.offset, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> QSeries:
        a = self.coeffs
        if not a or a[0] == 0:
            raise ZeroDivisionError("leading coefficient must be nonzero")
        inv = [1 / a[0]]
        for k in range(1, len(a)):
            s = sum((a[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0))
            inv.append(-s / a[0])
        return QSeries(-self.offset, tuple(inv))

    def __truediv__(self, other: QSeries | int | Fraction) -> QSeries:
        if not isinstance(other, QSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, e: int) -> QSeries:
        if e < 0:
            return self.inverse() ** (-e)
        out = QSeries(self.offset * 0, (Fraction(1),) + (Fraction(0),) * self.precision)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        try:
            a, b, _ = self._aligned(other)
        except ValueError:
            return False
        n = min(len(a), len(b))
        return a[:n] == b[:n]

    def __hash__(self) -> int:  # pragma: no cover - not used as a key
        return hash((self.offset, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}*q^({self.offset + i})")
        return "QSeries(" + " + ".join(terms) + f" + O(q^({self.offset + len(self.coeffs)})))"


# ---------------------------------------------------------------- modular forms

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, by the standard recurrence."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def _sigma(k: int, n: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein(k: int, N: int) -> QSeries:
    if k < 2 or k % 2:
        raise ValueError("Eisenstein series need even weight k >= 2")
    c = -Fraction(2 * k) / bernoulli(k)
    return QSeries.make([1] + [c * _sigma(k - 1, n) for n in range(1, N + 1)])


def eisenstein_normalized(k: int, N: int) -> QSeries:
    """hat E_k = -B_k / k! * E_k."""
    return eisenstein(k, N) * (-bernoulli(k) / factorial(k))


def euler_power(e: int, N: int) -> QSeries:
    """prod_{n>=1} (1 - q^n)^e to precision N (no q^(e/24) prefactor)."""
    out = [Fraction(0)] * (N + 1)
    out[0] = Fraction(1)
    if e >= 0:
        for n in range(1, N + 1):
            for _ in range(e):
                for i in range(N, n - 1, -1):
                    out[i] -= out[i - n]
        return QSeries.make(out)
    return euler_power(-e, N).inverse()


def eta_power(e: int, N: int) -> QSeries:
    s = euler_power(e, N)
    return QSeries(Fraction(e, 24), s.coeffs)


def delta(N: int) -> QSeries:
    return eta_power(24, N)


def delta_from_eisenstein(N: int) -> QSeries:
    return (eisenstein(4, N) ** 3 - eisenstein(6, N) ** 2) / 1728


def j_invariant(N: int) -> QSeries:
    """J = E4^3 / Delta - 744, coefficients of q^-1 .. q^N."""
    e4 = eisenstein(4, N + 1)
    d = delta_from_eisenstein(N + 2)
    d = QSeries(Fraction(1), d.coeffs[1:])
    j = (e4 ** 3) / d
    return j - QSeries.make([0, 744], -1).pad_like(j)


def zv_character(c: int, d1: int, N: int) -> QSeries:
    """Character of a holomorphic VOA of central charge c in {24, 32, 40} with dim V_1 = d1.

    With k = c/8 this is E4^(k-3) (J + d1 - 248(k-3)) / eta^(8(k-3)). The
    c = 24 case is plain J + d1 and serves as a validation target.
    """
    if c not in (24, 32, 40):
        raise ValueError(f"unsupported central charge {c}")
    k = c // 8 - 3
    j = j_invariant(N + 1)
    body = j + QSeries.make([0, d1 - 248 * k], -1).pad_like(j)
    if k == 0:
        return body.truncate(N)
    out = eisenstein(4, N + 1) ** k * body / eta_power(8 * k, N + 1)
    return out.truncate(N)


def modular_form_basis(weight: int, N: int) -> list[QSeries]:
    """Echelonized basis of M_weight(SL2(Z)) from monomials E4^a E6^b."""
    if weight < 0 or weight % 2:
        raise ValueError("weight must be even and nonnegative")
    e4, e6 = eisenstein(4, N), eisenstein(6, N)
    mons = []
    for b in range(weight // 6 + 1):
        rest = weight - 6 * b
        if rest % 4 == 0:
            mons.append((e4 ** (rest // 4)) * (e6 ** b))
    rows = [list(m.coeffs) for m in mons]
    # reduced row echelon form
    piv_cols = []
    r = 0
    for col in range(N + 1):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
        if r == len(rows):
            break
    return [QSeries.make(row) for row in rows[:r]]


def classical_dimension(weight: int) -> int:
    if weight < 0 or weight % 2:
        return 0
    if weight == 2:
        return 0
    return weight // 12 + (0 if weight % 12 == 2 else 1)


# ---------------------------------------------------------------- moment identities
#
# Monomials are keyed (n, j, a): S_n^j * <h,h>^a, with S_n^0 = d_n and
# (0, 0, a) standing for <h,h>^a alone.

Mono = tuple[int, int, int]


@dataclass(frozen=True)
class MomentIdentity:
    """sum lhs[(j, a)] S_2^j N^a = sum rhs[(n, j, a)] S_n^j N^a (n in {0, 1}, N = <h,h>)."""

    j: int
    lhs: dict
    rhs: dict

    def evaluate_rhs(self, d1: int | Fraction, s1: Sequence, N: int | Fraction) -> Fraction:
        """Right side with S_1^j taken from s1 (s1[0] is ignored in favour of d1)."""
        tot = Fraction(0)
        for (n, j, a), c in self.rhs.items():
            if n == 0:
                v = Fraction(1)
            elif j == 0:
                v = Fraction(d1)
            else:
                v = Fraction(s1[j])
            tot += c * v * Fraction(N) ** a
        return tot

    def pretty(self) -> str:
        def term(c: Fraction, s: str) -> str:
            return f"{c}{'*' + s if s else ''}"

        def mono(n: int, j: int, a: int) -> str:
            parts = []
            if n:
                parts.append(f"S{n}^{j}" if j else f"d{n}")
            if a:
                parts.append("N" if a == 1 else f"N^{a}")
            return "*".join(parts)

        lhs = " + ".join(term(c, mono(2, j, a)) for (j, a), c in sorted(self.lhs.items(), reverse=True))
        rhs = " + ".join(term(c, mono(n, j, a)) for (n, j, a), c in
                         sorted(self.rhs.items(), key=lambda t: (-t[0][0], -t[0][1], t[0][2])))
        return f"{lhs} = {rhs}"


@dataclass(frozen=True)
class MomentIdentitySet:
    central_charge: int
    identities: tuple[MomentIdentity, ...]
    not_derivable: tuple[int, ...] = field(default=())


def _lin_add(acc: dict, key, val: Fraction) -> None:
    if val:
        nv = acc.get(key, Fraction(0)) + val
        if nv:
            acc[key] = nv
        else:
            acc.pop(key, None)


def _p_coefficient(c: int, j: int, t: int, e2: QSeries, phi: QSeries) -> dict:
    """Coefficient of Y^j q^t in exp(-Y^2 N E2/24) * Phi * sum_n q^n sum_j S_n^j Y^j/j!."""
    e2p = [QSeries.make([1] + [0] * t)]
    for _ in range(j // 2):
        e2p.append(e2p[-1] * e2)
    out: dict = {}
    for i in range(j // 2 + 1):
        jj = j - 2 * i
        pref = Fraction(-1, 24) ** i / factorial(i) / factorial(jj)
        for n in range(t + 1):
            w = sum((e2p[i][r] * phi[t - n - r] for r in range(t - n + 1)), Fraction(0))
            if not w:
                continue
            if n == 0:
                if jj == 0:
                    _lin_add(out, (0, 0, i), pref * w)
            else:
                _lin_add(out, (n, jj, i), pref * w)
    return out


def derive_moment_identities(c: int, j_max: int | None = None, N: int = 12) -> MomentIdentitySet:
    if c not in (24, 32, 40):
        raise ValueError("moment identities are derived for c = 24, 32 and 40")
    if j_max is None:
        j_max = 6 if c == 40 else 10
    e2 = eisenstein(2, N)
    phi = euler_power(c, N)
    raw: dict[int, dict] = {}
    missing: list[int] = []
    for j in range(0, j_max + 1, 2):
        w = c // 2 + j
        basis = modular_form_basis(w, N)
        if len(basis) != 2:
            missing.append(j)
            continue
        # echelon basis g0 = 1 + 0 q + x q^2, g1 = q + y q^2
        x, y = basis[0][2], basis[1][2]
        rel: dict = {}
        for k, v in _p_coefficient(c, j, 2, e2, phi).items():
            _lin_add(rel, k, v)
        for k, v in _p_coefficient(c, j, 0, e2, phi).items():
            _lin_add(rel, k, -x * v)
        for k, v in _p_coefficient(c, j, 1, e2, phi).items():
            _lin_add(rel, k, -y * v)
        raw[j] = rel  # rel == 0

    solved: dict[int, dict] = {}  # S_2^j = expression (no S_2 terms) for derivable j
    identities = []
    for j in sorted(raw):
        rel = dict(raw[j])
        # substitute lower solved S_2 moments
        changed = True
        while changed:
            changed = False
            for (n, jj, a), v in list(rel.items()):
                if n == 2 and jj < j and jj in solved:
                    del rel[(n, jj, a)]
                    for (n2, j2, a2), v2 in solved[jj].items():
                        _lin_add(rel, (n2, j2, a2 + a), v * v2)
                    changed = True
        lhs = {(jj, a): v for (n, jj, a), v in rel.items() if n == 2}
        rhs = {k: -v for k, v in rel.items() if k[0] != 2}
        if set(lhs) == {(j, 0)}:
            lead = lhs[(j, 0)]
            solved[j] = {k: v / lead for k, v in rhs.items()}
        lhs, rhs = _normalize(lhs, rhs)
        identities.append(MomentIdentity(j, lhs, rhs))
    return MomentIdentitySet(c, tuple(identities), tuple(missing))


def _normalize(lhs: dict, rhs: dict) -> tuple[dict, dict]:
    from math import gcd, lcm
    vals = list(lhs.values()) + list(rhs.values())
    den = lcm(*[v.denominator for v in vals])
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    scale = Fraction(den, g)
    top = max(lhs)
    if lhs[top] < 0:
        scale = -scale
    return ({k: v * scale for k, v in lhs.items()}, {k: v * scale for k, v in rhs.items()})
