"""Invariant and basic cohomology, the splitting check, duality and Lefschetz.

Cohomology here is always the cohomology of invariant forms on a
:class:`~cosy.liealg.LieModel`. For nilpotent models this equals de Rham
cohomology of the compact quotient; otherwise reports carry the
``invariant_cohomology_only`` flag.

Class representatives are picked greedily in lexicographic basis order from a
fixed cocycle basis, so every matrix below is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .acms import ACMStructure, K_COSYMPLECTIC, classify
from .exterior import KForm, Vector, basis_indices, contract, top_coefficient, wedge, wedge_power
from .liealg import LieModel, ce_d, d_matrix, is_nilpotent, lie_derivative, require_jacobi

Vec = List[Fraction]


@dataclass(frozen=True)
class Complex:
    """A finite cochain complex of invariant forms.

    ``bases[p]`` lists the forms spanning degree ``p``; ``diffs[p]`` is the
    matrix of ``d`` from degree ``p`` to ``p + 1`` in those bases.
    """

    dim: int
    bases: Tuple[Tuple[KForm, ...], ...]
    diffs: Tuple[linalg.Matrix, ...]

    def dims(self) -> List[int]:
        return [len(b) for b in self.bases]

    def rank(self, p: int) -> int:
        if p < 0 or p >= len(self.diffs):
            return 0
        return linalg.rank(self.diffs[p])

    def betti(self) -> List[int]:
        dims = self.dims()
        return [dims[p] - self.rank(p) - self.rank(p - 1) for p in range(len(dims))]

    def is_complex(self) -> bool:
        for p in range(len(self.diffs) - 1):
            a, b = self.diffs[p + 1], self.diffs[p]
            if a and a[0] and b and b[0] and any(any(r) for r in linalg.matmul(a, b)):
                return False
        return True

    def form(self, p: int, coords: Sequence[Fraction]) -> KForm:
        out = KForm.zero(self.dim, p)
        for c, f in zip(coords, self.bases[p]):
            if c:
                out = out + f * c
        return out


def _coords_in(basis: Sequence[KForm], a: KForm) -> Vec:
    """Coordinates of ``a`` in the span of ``basis`` (which must contain it)."""
    if not basis:
        if not a.is_zero():
            raise ValueError("form is not in the span of an empty basis")
        return []
    rows = len(basis_indices(a.dim, a.degree))
    m = linalg.columns([f.to_vector() for f in basis], rows)
    x = linalg.solve(m, a.to_vector())
    if x is None:
        raise ValueError(f"{a} is not in the span of the given forms")
    return x


def invariant_complex(L: LieModel) -> Complex:
    n = L.dim
    bases = tuple(tuple(KForm.basis(n, *I) for I in basis_indices(n, p)) for p in range(n + 1))
    diffs = tuple(d_matrix(L, p) for p in range(n + 1))
    return Complex(n, bases, diffs)


def betti(L: LieModel) -> List[int]:
    """Betti numbers of the Chevalley-Eilenberg complex."""
    require_jacobi(L)
    return invariant_complex(L).betti()


def _subspace_complex(L: LieModel, conditions) -> Complex:
    """Subcomplex cut out by linear conditions on each degree.

    ``conditions(a)`` returns a list of forms that must all vanish.
    """
    n = L.dim
    bases = []
    for p in range(n + 1):
        full = [KForm.basis(n, *I) for I in basis_indices(n, p)]
        rows: List[Vec] = []
        images = [conditions(f) for f in full]
        for k in range(len(images[0]) if images else 0):
            vecs = [img[k].to_vector() for img in images]
            for r in range(len(vecs[0]) if vecs and vecs[0] else 0):
                rows.append([v[r] for v in vecs])
        if rows:
            kernel = linalg.nullspace(rows, len(full))
        else:
            kernel = [[Fraction(int(i == j)) for i in range(len(full))] for j in range(len(full))]
        bases.append(tuple(KForm.from_vector(v, p, n) for v in kernel))
    diffs = []
    for p in range(n + 1):
        if p == n:
            diffs.append([])
            continue
        cols = [_coords_in(bases[p + 1], ce_d(L, f)) for f in bases[p]]
        diffs.append(linalg.columns(cols, len(bases[p + 1])))
    return Complex(n, tuple(bases), tuple(diffs))


def _check_reeb_data(L: LieModel, xi: Vector, eta: KForm) -> None:
    if eta.degree != 1 or eta.dim != L.dim or xi.dim != L.dim:
        raise ValueError(f"eta must be a 1-form and xi a vector on dimension {L.dim}")
    if eta(xi) != 1:
        raise ValueError(f"eta(xi) = {eta(xi)}, expected 1")
    if not ce_d(L, eta).is_zero():
        raise ValueError("eta is not closed")


def basic_complex(L: LieModel, xi: Vector, eta: KForm) -> Complex:
    """Invariant forms with ``iota_xi a = 0`` and ``iota_xi d a = 0``."""
    _check_reeb_data(L, xi, eta)
    return _subspace_complex(L, lambda a: [contract(xi, a), contract(xi, ce_d(L, a))])


def horizontal_dims(L: LieModel, xi: Vector) -> List[int]:
    """Dimensions of ``{a : iota_xi a = 0}`` per degree."""
    n = L.dim
    out = []
    for p in range(n + 1):
        full = [KForm.basis(n, *I) for I in basis_indices(n, p)]
        if p == 0:
            out.append(1)
            continue
        rows_len = len(basis_indices(n, p - 1))
        m = linalg.columns([contract(xi, f).to_vector() for f in full], rows_len)
        out.append(len(full) - linalg.rank(m))
    return out


def splitting_dims_ok(L: LieModel, xi: Vector) -> bool:
    """``dim Lambda^p = dim hor^p + dim hor^{p-1}`` in every degree."""
    from math import comb

    h = horizontal_dims(L, xi)
    return all(comb(L.dim, p) == h[p] + (h[p - 1] if p else 0) for p in range(L.dim + 1))


def basic_betti(L: LieModel, xi: Vector, eta: KForm) -> List[int]:
    """Betti numbers of the basic complex in degrees ``0 .. dim - 1``."""
    require_jacobi(L)
    b = basic_complex(L, xi, eta).betti()
    if b[-1] != 0:
        raise ArithmeticError("basic cohomology is nonzero in the top degree")
    return b[:-1]


def basic_betti_checks(bb: Sequence[int]) -> Dict[str, bool]:
    return {
        "b0_is_1": bool(bb) and bb[0] == 1,
        "top_is_1": bool(bb) and bb[-1] == 1,
        "symmetric": list(bb) == list(reversed(bb)),
    }


# representatives -----------------------------------------------------------


def _span_vectors(m: linalg.Matrix) -> List[Vec]:
    """Column vectors of ``m``."""
    if not m or not m[0]:
        return []
    return [list(c) for c in zip(*m)]


@dataclass(frozen=True)
class CohomologyBasis:
    """Cocycle representatives of ``H^p`` plus the boundaries they are taken modulo."""

    degree: int
    representatives: Tuple[KForm, ...]
    boundaries: Tuple[KForm, ...]

    def class_coordinates(self, a: KForm) -> Optional[Vec]:
        """Coordinates of the class of a cocycle ``a`` in the representative basis."""
        n = a.dim
        rows = len(basis_indices(n, a.degree))
        reps = [r.to_vector() for r in self.representatives]
        bnd = [b.to_vector() for b in self.boundaries]
        m = linalg.columns(reps + bnd, rows)
        if not reps and not bnd:
            return [] if a.is_zero() else None
        x = linalg.solve(m, a.to_vector())
        return None if x is None else x[: len(reps)]


def cohomology_basis(c: Complex, p: int) -> CohomologyBasis:
    """Representatives of ``H^p(c)`` chosen greedily from the RREF cocycle basis."""
    n = c.dim
    basis = c.bases[p]
    rows = len(basis_indices(n, p))
    d = c.diffs[p] if p < len(c.diffs) else []
    if d and d[0]:
        z = linalg.nullspace(d, len(basis))
    else:
        z = [[Fraction(int(i == j)) for i in range(len(basis))] for j in range(len(basis))]
    cocycles = [c.form(p, v) for v in z]
    if p > 0 and c.bases[p - 1] and c.diffs[p - 1] and c.diffs[p - 1][0]:
        bnd = [c.form(p, v) for v in _span_vectors(c.diffs[p - 1])]
    else:
        bnd = []
    bnd = [b for b in bnd if not b.is_zero()]
    chosen = linalg.independent_extension([b.to_vector() for b in bnd], [f.to_vector() for f in cocycles], rows)
    return CohomologyBasis(p, tuple(cocycles[i] for i in chosen), tuple(bnd))


def exact_forms(L: LieModel, p: int) -> List[KForm]:
    """Spanning set of ``d(Lambda^{p-1})``."""
    n = L.dim
    if p == 0:
        return []
    out = [ce_d(L, KForm.basis(n, *I)) for I in basis_indices(n, p - 1)]
    return [f for f in out if not f.is_zero()]


def _independent_mod(forms: Sequence[KForm], modulo: Sequence[KForm], dim: int, degree: int) -> bool:
    rows = len(basis_indices(dim, degree))
    base = [m.to_vector() for m in modulo]
    r0 = linalg.rank(linalg.columns(base, rows)) if base else 0
    allv = base + [f.to_vector() for f in forms]
    r1 = linalg.rank(linalg.columns(allv, rows)) if allv else 0
    return r1 - r0 == len(forms)


def verify_splitting(L: LieModel, xi: Vector, eta: KForm) -> bool:
    """Dimension identity plus independence of basic and ``eta ^ basic`` classes."""
    b = betti(L)
    bc = basic_complex(L, xi, eta)
    bb = bc.betti()
    n = L.dim
    reps = [cohomology_basis(bc, p).representatives for p in range(n + 1)]
    for p in range(n + 1):
        expected = bb[p] + (bb[p - 1] if p else 0)
        if b[p] != expected:
            return False
        forms = list(reps[p]) + ([wedge(eta, r) for r in reps[p - 1]] if p else [])
        if not _independent_mod(forms, exact_forms(L, p), n, p):
            return False
    return True


@dataclass(frozen=True)
class BasicBettiRecursion:
    values: Tuple[int, ...]
    ok: bool
    reason: str


def basic_betti_from_betti(b: Sequence[int]) -> BasicBettiRecursion:
    """Alternating sums ``sum_i (-1)^i b_{p-i}`` for ``p = 0 .. 2n``."""
    b = [int(x) for x in b]
    if len(b) < 2 or len(b) % 2:
        return BasicBettiRecursion(tuple(), False, f"expected an even-length Betti list, got length {len(b)}")
    top = len(b) - 2
    vals = []
    for p in range(top + 2):
        vals.append(sum((-1) ** i * b[p - i] for i in range(p + 1)))
    values, tail = vals[:-1], vals[-1]
    if b[0] != 1:
        return BasicBettiRecursion(tuple(values), False, f"b0 = {b[0]}, expected 1")
    neg = next((p for p, v in enumerate(values) if v < 0), None)
    if neg is not None:
        return BasicBettiRecursion(tuple(values), False, f"b{neg}(F) = {values[neg]} is negative")
    if tail != 0:
        return BasicBettiRecursion(tuple(values), False, f"top-degree basic Betti number {tail} is not zero")
    if values != list(reversed(values)):
        return BasicBettiRecursion(tuple(values), False, "basic Betti numbers are not symmetric")
    return BasicBettiRecursion(tuple(values), True, "")


# pairing and omega powers ------------------------------------------------


def pairing_matrices(L: LieModel, xi: Vector, eta: KForm) -> Dict[int, linalg.Matrix]:
    """``p -> [top coefficient of a_i ^ eta ^ t_j]`` over basic representatives."""
    bc = basic_complex(L, xi, eta)
    top = L.dim - 1
    reps = {p: cohomology_basis(bc, p).representatives for p in range(top + 1)}
    out = {}
    for p in range(top + 1):
        out[p] = [[top_coefficient(wedge(wedge(a, eta), t)) for t in reps[top - p]] for a in reps[p]]
    return out


def pairing_check(L: LieModel, xi: Vector, eta: KForm) -> bool:
    for m in pairing_matrices(L, xi, eta).values():
        size = len(m)
        if size and len(m[0]) != size:
            return False
        if size and linalg.rank(m) != size:
            return False
        if not size and any(m):
            return False
    return True


def omega_power_check(s: ACMStructure) -> bool:
    """Each ``omega^p`` (``1 <= p <= n``) is basic, closed and not basic-exact."""
    L = s.model
    bc = basic_complex(L, s.xi, s.eta)
    for p in range(1, s.n + 1):
        w = wedge_power(s.omega, p)
        if not contract(s.xi, w).is_zero():
            return False
        dw = ce_d(L, w)
        if not dw.is_zero():
            return False
        deg = 2 * p
        image = [bc.form(deg, v) for v in _span_vectors(bc.diffs[deg - 1])] if bc.bases[deg - 1] else []
        image = [f for f in image if not f.is_zero()]
        if not _independent_mod([w], image, L.dim, deg):
            return False
    return True


# Lefschetz ---------------------------------------------------------------


def lefschetz_operator(s: ACMStructure, a: KForm, k: int) -> KForm:
    """``omega^k ^ (omega ^ iota_xi a + eta ^ a)``.

    For fixed ``k`` this anticommutes with ``d`` on forms with
    ``L_xi a = 0`` when ``d eta = d omega = 0``.
    """
    inner = wedge(s.eta, a)
    if a.degree:
        inner = inner + wedge(s.omega, contract(s.xi, a))
    return wedge(wedge_power(s.omega, k), inner)


def lefschetz_map(s: ACMStructure, a: KForm) -> KForm:
    """The map from degree ``p`` to ``2n + 1 - p`` (defined for ``0 <= p <= n``)."""
    p = a.degree
    if not 0 <= p <= s.n:
        raise ValueError(f"Lefschetz map needs 0 <= degree <= {s.n}, got {p}")
    return lefschetz_operator(s, a, s.n - p)


def xi_invariant_complex(L: LieModel, xi: Vector) -> Complex:
    """Forms with ``L_xi a = 0``."""
    return _subspace_complex(L, lambda a: [lie_derivative(L, xi, a)])


def lefschetz_anticommutes(s: ACMStructure) -> bool:
    """``L_k(d a) = -d L_k(a)`` on every basis form of the ``xi``-invariant complex."""
    c = xi_invariant_complex(s.model, s.xi)
    for k in range(s.n + 1):
        for p in range(s.dim):
            for a in c.bases[p]:
                lhs = lefschetz_operator(s, ce_d(s.model, a), k)
                rhs = ce_d(s.model, lefschetz_operator(s, a, k))
                if lhs != -rhs:
                    return False
    return True


@dataclass(frozen=True)
class LefschetzKernelVector:
    """A class killed by the Lefschetz map, with a primitive for its image."""

    coefficients: Tuple[Fraction, ...]
    form: KForm
    image: KForm
    primitive: KForm

    def certified(self, L: LieModel) -> bool:
        return ce_d(L, self.primitive) == self.image


@dataclass(frozen=True)
class LefschetzMapResult:
    degree: int
    matrix: Tuple[Tuple[Fraction, ...], ...]
    rank: int
    is_isomorphism: bool
    source: Tuple[KForm, ...]
    kernel: Tuple[LefschetzKernelVector, ...]


def lefschetz_ranks(s: ACMStructure) -> List[LefschetzMapResult]:
    report = classify(s)
    if K_COSYMPLECTIC not in report.flags:
        raise ValueError("Lefschetz ranks need a K-cosymplectic structure")
    L = s.model
    full = invariant_complex(L)
    xi_c = xi_invariant_complex(L, s.xi)
    out = []
    for p in range(s.n + 1):
        q = s.dim - p
        src = cohomology_basis(xi_c, p).representatives
        tgt = cohomology_basis(full, q)
        cols = []
        for a in src:
            img = lefschetz_map(s, a)
            coords = tgt.class_coordinates(img)
            if coords is None:
                raise ArithmeticError(f"image of {a} is not closed")
            cols.append(coords)
        m = linalg.columns(cols, len(tgt.representatives))
        r = linalg.rank(m) if m and m[0] else 0
        iso = r == len(src) == len(tgt.representatives)
        kernel = []
        if len(src) and r < len(src):
            null = linalg.nullspace(m, len(src)) if m and m[0] else [
                [Fraction(int(i == j)) for i in range(len(src))] for j in range(len(src))
            ]
            for v in null:
                a = KForm.zero(s.dim, p)
                for c, f in zip(v, src):
                    if c:
                        a = a + f * c
                img = lefschetz_map(s, a)
                beta = _primitive(L, img)
                kernel.append(LefschetzKernelVector(tuple(v), a, img, beta))
        out.append(
            LefschetzMapResult(p, tuple(tuple(r_) for r_ in m), r, iso, tuple(src), tuple(kernel))
        )
    return out


def _primitive(L: LieModel, a: KForm) -> KForm:
    """Some ``b`` with ``d b = a``; raises if ``a`` is not exact."""
    p = a.degree
    if a.is_zero():
        return KForm.zero(L.dim, max(p - 1, 0))
    if p == 0:
        raise ValueError("a nonzero function is never exact")
    x = linalg.solve(d_matrix(L, p - 1), a.to_vector())
    if x is None:
        raise ValueError(f"{a} is not exact")
    return KForm.from_vector(x, p - 1, L.dim)


# report ------------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyReport:
    betti: Tuple[int, ...]
    basic_betti: Tuple[int, ...]
    splitting_ok: bool
    recursion_ok: bool
    pairing_nondegenerate: bool
    omega_powers_nontrivial: bool
    lefschetz: Tuple[LefschetzMapResult, ...]
    invariant_cohomology_only: bool
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def lefschetz_ranks(self) -> List[Tuple[int, bool]]:
        return [(r.rank, r.is_isomorphism) for r in self.lefschetz]


def cohomology_report(s: ACMStructure, with_lefschetz: bool = True) -> CohomologyReport:
    L = s.model
    b = betti(L)
    bb = basic_betti(L, s.xi, s.eta)
    notes = []
    k_cosymp = K_COSYMPLECTIC in classify(s).flags
    rec = basic_betti_from_betti(b)
    recursion_ok = rec.ok and list(rec.values) == bb
    if not rec.ok:
        notes.append(f"recursion: {rec.reason}")
    split = verify_splitting(L, s.xi, s.eta)
    pairing = pairing_check(L, s.xi, s.eta)
    powers = omega_power_check(s)
    lef: Tuple[LefschetzMapResult, ...] = ()
    if with_lefschetz:
        if k_cosymp:
            lef = tuple(lefschetz_ranks(s))
        else:
            notes.append("Lefschetz map skipped: structure is not K-cosymplectic")
    nil = is_nilpotent(L)
    if not nil:
        notes.append("model is not nilpotent: invariant cohomology may differ from de Rham cohomology")
    return CohomologyReport(tuple(b), tuple(bb), split, recursion_ok, pairing, powers, lef, not nil, tuple(notes))
