"""Closed Reeb orbit counts from Betti data, and a registry of known spaces.

Every count here is conditional: it assumes the Reeb flow has only finitely
many closed orbits, which cannot be decided from cohomology.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import List, Optional, Sequence, Tuple

from .cohomology import basic_betti_from_betti

HYPOTHESIS = (
    "conditional on the Reeb flow having finitely many closed orbits; "
    "the count equals the total basic Betti number under that hypothesis"
)


def orbit_count_from_basic(basic_betti: Sequence[int]) -> int:
    """Total basic Betti number, read as a closed-orbit count."""
    bb = list(basic_betti)
    if not bb or bb[0] != 1:
        raise ValueError("basic Betti numbers must start with 1")
    if bb != bb[::-1]:
        raise ValueError("basic Betti numbers must be symmetric")
    if any(b < 0 for b in bb):
        raise ValueError("basic Betti numbers must be nonnegative")
    return sum(bb)


def min_orbit_bound(dim: int) -> int:
    """``n + 1`` for a manifold of dimension ``2n + 1``."""
    if dim < 3 or dim % 2 == 0:
        raise ValueError(f"need an odd dimension >= 3, got {dim}")
    return (dim - 1) // 2 + 1


def cpn_characterization(betti: Sequence[int]) -> bool:
    """Betti numbers of ``CP^n x S^1`` (``n >= 1``) with matching basic recursion."""
    b = list(betti)
    if len(b) < 4 or len(b) % 2 or any(x != 1 for x in b):
        return False
    rec = basic_betti_from_betti(b)
    return rec.ok and list(rec.values) == [1 - p % 2 for p in range(len(b) - 1)]


@dataclass(frozen=True)
class OrbitVerdict:
    dim: int
    basic_betti: Tuple[int, ...]
    count: Optional[int]
    lower_bound: int
    meets_bound: Optional[bool]
    cpn_like: bool
    hypothesis: str
    reason: str = ""


def orbit_verdict(betti: Sequence[int]) -> OrbitVerdict:
    b = list(betti)
    dim = len(b) - 1
    rec = basic_betti_from_betti(b)
    bound = min_orbit_bound(dim)
    if not rec.ok:
        return OrbitVerdict(dim, rec.values, None, bound, None, False, HYPOTHESIS, rec.reason)
    count = orbit_count_from_basic(rec.values)
    return OrbitVerdict(dim, rec.values, count, bound, count >= bound, cpn_characterization(b), HYPOTHESIS)


# registry -----------------------------------------------------------------


@dataclass(frozen=True)
class KnownSpace:
    name: str
    family: str
    betti: Tuple[int, ...]
    basic_betti: Optional[Tuple[int, ...]]
    closed_orbit_count: Optional[int]
    k_cosymplectic: bool
    source: str


def _alternating(n: int) -> Tuple[int, ...]:
    return tuple(1 - p % 2 for p in range(n))


def _cpn_entry(n: int) -> KnownSpace:
    return KnownSpace(
        f"CP^{n} x S^1",
        "cpn",
        (1,) * (2 * n + 2),
        _alternating(2 * n + 1),
        n + 1,
        True,
        f"Kunneth: H*(CP^{n}) = R[x]/x^{n + 1} with |x| = 2, tensored with H*(S^1)",
    )


def _quadric_entry(m: int) -> KnownSpace:
    note = " (the conic, isomorphic to CP^1)" if m == 1 else ""
    return KnownSpace(
        f"Q^{2 * m - 1} x S^1",
        "quadric",
        (1,) * (4 * m),
        _alternating(4 * m - 1),
        2 * m,
        True,
        f"odd-dimensional complex quadric{note}: H*(Q^{2 * m - 1}) = R[x]/x^{2 * m}, "
        f"the real cohomology of CP^{2 * m - 1} although the spaces are not homeomorphic",
    )


def _torus_entry(k: int) -> KnownSpace:
    betti = tuple(comb(k, p) for p in range(k + 1))
    odd = k % 2 == 1
    basic = tuple(comb(k - 1, p) for p in range(k)) if odd else None
    return KnownSpace(
        f"T^{k}",
        "torus",
        betti,
        basic,
        sum(basic) if basic else None,
        odd,
        "flat torus: binomial Betti numbers; orbit count is hypothetical since linear flows have none or infinitely many",
    )


def registry() -> List[KnownSpace]:
    out = [_cpn_entry(n) for n in range(1, 9)]
    out += [_quadric_entry(m) for m in range(1, 5)]
    out += [_torus_entry(k) for k in range(1, 8)]
    out.append(
        KnownSpace("KT", "nilmanifold", (1, 3, 4, 3, 1), None, None, False,
                   "Kodaira-Thurston nilmanifold, [e1,e2] = -e4: b1 = 3")
    )
    out.append(
        KnownSpace("KT x S^1", "nilmanifold", (1, 4, 7, 7, 4, 1), (1, 3, 4, 3, 1), 12, True,
                   "Kodaira-Thurston times a circle: b1 = 4, K-cosymplectic but not coKahler")
    )
    return out


def lookup(name: str) -> KnownSpace:
    for s in registry():
        if s.name == name:
            return s
    raise KeyError(name)
