"""Published moment-identity constants, kept apart from the derivation path.

Each entry is (j, lhs, rhs) in the MomentIdentity key format:
lhs maps (j, a) -> coefficient of S_2^j N^a, rhs maps (n, j, a) -> coefficient
of S_n^j N^a with n = 0 the constant term and (1, 0, a) standing for d_1 N^a.
"""
from __future__ import annotations

from fractions import Fraction

from .qseries import MomentIdentitySet

REFERENCE_IDENTITIES: dict[int, list[tuple[int, dict, dict]]] = {
    32: [
        (0, {(0, 0): 1}, {(1, 0, 0): 248, (0, 0, 0): 139504}),
        (2, {(2, 0): 1}, {(1, 2, 0): -496, (1, 0, 1): 60, (0, 0, 1): 16440}),
        (4, {(4, 0): 1}, {(1, 4, 0): 488, (1, 2, 1): -504, (1, 0, 2): 36, (0, 0, 2): 5328}),
        (6, {(6, 0): 1}, {(1, 6, 0): -256, (1, 4, 1): 900, (1, 2, 2): -540, (1, 0, 3): 30,
                          (0, 0, 3): 2640}),
        (10, {(10, 0): 4, (8, 1): -15},
         {(1, 10, 0): -64, (1, 8, 1): -120, (1, 6, 2): 5040, (1, 4, 3): -12600, (1, 2, 4): 6300,
          (1, 0, 5): -315, (0, 0, 5): -20160}),
    ],
    40: [
        (0, {(0, 0): 1}, {(1, 0, 0): 496, (0, 0, 0): 20620}),
        (2, {(2, 0): 1}, {(1, 2, 0): -248, (1, 0, 1): 60, (0, 0, 1): 1560}),
        (6, {(6, 0): 4, (4, 1): -5},
         {(1, 6, 0): -32, (1, 4, 1): -80, (1, 2, 2): 360, (1, 0, 3): -60, (0, 0, 3): -1200}),
    ],
}


def _frac(d: dict) -> dict:
    return {k: Fraction(v) for k, v in d.items() if v}


def compare_with_reference(ids: MomentIdentitySet) -> list[str]:
    """Human-readable differences between derived and published identities (empty if equal)."""
    ref = REFERENCE_IDENTITIES.get(ids.central_charge)
    if ref is None:
        return [f"no published constants for c = {ids.central_charge}"]
    got = {i.j: i for i in ids.identities}
    problems = []
    for j, lhs, rhs in ref:
        ident = got.get(j)
        if ident is None:
            problems.append(f"j={j}: not derived")
            continue
        if _frac(ident.lhs) != _frac(lhs) or _frac(ident.rhs) != _frac(rhs):
            problems.append(f"j={j}: derived {ident.pretty()}")
    extra = sorted(set(got) - {j for j, _, _ in ref})
    if extra:
        problems.append(f"derived identities without a published counterpart: j = {extra}")
    return problems
