"""Exact multilinear algebra on a rational vector space of dimension ``n``.

Basis vectors are ``e_0 .. e_{n-1}`` internally; the dual basis ``e^0 ..``
spans the 1-forms. Human-facing output (``__repr__``, model files, the CLI)
is 1-based, so ``e^{12}`` means ``e^0 ^ e^1`` here.

Conventions
-----------
* Forms evaluate by determinants: ``(e^1 ^ e^2)(e_1, e_2) = 1``.
* ``contract(v, a)`` inserts ``v`` in the first slot.
* Endomorphism matrices act on column vectors: column ``j`` holds the
  coordinates of ``T(e_j)``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from . import linalg
from .linalg import to_fraction

Index = Tuple[int, ...]


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the permutation sorting ``idx``; 0 on repeated indices."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def basis_indices(n: int, p: int) -> List[Index]:
    """Strictly increasing index tuples of length ``p`` in lexicographic order."""
    return list(combinations(range(n), p))


class Vector:
    """Coordinates of a vector in the model basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def basis(cls, n: int, i: int) -> "Vector":
        return cls(int(k == i) for k in range(n))

    @classmethod
    def zero(cls, n: int) -> "Vector":
        return cls([0] * n)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other: "Vector"):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self.coeffs)

    def __mul__(self, c) -> "Vector":
        c = to_fraction(c)
        return Vector(c * a for a in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Vector":
        return self * (1 / to_fraction(c))

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        terms = [f"{_fmt(c)}*e{i + 1}" for i, c in enumerate(self.coeffs) if c]
        return "Vector(" + (" + ".join(terms) if terms else "0") + ")"


def _fmt(c: Fraction) -> str:
    return str(c) if c.denominator != 1 else str(c.numerator)


class KForm:
    """An exterior form of fixed degree with exact rational coefficients."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[Sequence[int], object] = ()):
        if degree < 0:
            raise ValueError("negative degree")
        store: Dict[Index, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for idx, c in items:
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"index {idx} out of range for dimension {dim}")
            sign, key = _sort_sign(idx)
            if sign == 0:
                continue
            store[key] = store.get(key, Fraction(0)) + sign * to_fraction(c)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(store.items()) if v != 0})

    def __setattr__(self, key, value):
        raise AttributeError("KForm is immutable")

    # constructors
    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree)

    @classmethod
    def constant(cls, dim: int, c) -> "KForm":
        return cls(dim, 0, {(): c})

    @classmethod
    def basis(cls, dim: int, *idx: int) -> "KForm":
        """``e^{i1} ^ ... ^ e^{ip}`` with 0-based indices."""
        return cls(dim, len(idx), {tuple(idx): 1})

    @classmethod
    def from_vector(cls, coeffs: Sequence, degree: int, dim: int) -> "KForm":
        """Inverse of :meth:`to_vector`."""
        return cls(dim, degree, dict(zip(basis_indices(dim, degree), coeffs)))

    @classmethod
    def one_form(cls, coeffs: Sequence) -> "KForm":
        coeffs = list(coeffs)
        return cls(len(coeffs), 1, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> "KForm":
        """2-form with ``a(e_i, e_j) = m[i][j]`` (``m`` must be antisymmetric)."""
        n = len(m)
        for i in range(n):
            for j in range(n):
                if to_fraction(m[i][j]) != -to_fraction(m[j][i]):
                    raise ValueError("matrix is not antisymmetric")
        return cls(n, 2, {(i, j): m[i][j] for i in range(n) for j in range(i + 1, n)})

    # coordinates
    def to_vector(self) -> List[Fraction]:
        return [self.coeffs.get(I, Fraction(0)) for I in basis_indices(self.dim, self.degree)]

    def to_matrix(self) -> linalg.Matrix:
        if self.degree != 2:
            raise ValueError("to_matrix needs a 2-form")
        m = linalg.zeros(self.dim, self.dim)
        for (i, j), c in self.coeffs.items():
            m[i][j] = c
            m[j][i] = -c
        return m

    def __getitem__(self, idx) -> Fraction:
        if isinstance(idx, int):
            idx = (idx,)
        sign, key = _sort_sign(idx)
        return sign * self.coeffs.get(key, Fraction(0))

    # arithmetic
    def _check(self, other: "KForm"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return KForm(self.dim, self.degree, out)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, c) -> "KForm":
        c = to_fraction(c)
        return KForm(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "KForm":
        return self * (1 / to_fraction(c))

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, KForm)
            and self.dim == other.dim
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, *vectors: Vector) -> Fraction:
        return evaluate(self, vectors)

    def __repr__(self):
        if not self.coeffs:
            return f"KForm(0, deg={self.degree})"
        terms = []
        for idx, c in self.coeffs.items():
            name = "e^" + ("".join(str(i + 1) for i in idx) if self.dim < 10 else ",".join(str(i + 1) for i in idx))
            if not idx:
                name = "1"
            terms.append(f"{_fmt(c)}*{name}")
        return "KForm(" + " + ".join(terms) + ")"


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    deg = a.degree + b.degree
    if deg > a.dim:
        return KForm.zero(a.dim, deg)
    out: Dict[Index, Fraction] = {}
    for I, x in a.coeffs.items():
        for J, y in b.coeffs.items():
            sign, key = _sort_sign(I + J)
            if sign:
                out[key] = out.get(key, Fraction(0)) + sign * x * y
    return KForm(a.dim, deg, out)


def wedge_power(a: KForm, k: int) -> KForm:
    if k < 0:
        raise ValueError("negative power")
    out = KForm.constant(a.dim, 1)
    for _ in range(k):
        out = wedge(out, a)
    return out


def contract(v: Vector, a: KForm) -> KForm:
    """Interior product; a 0-form contracts to the zero 0-form."""
    if v.dim != a.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {a.dim}")
    if a.degree == 0:
        return KForm.zero(a.dim, 0)
    out: Dict[Index, Fraction] = {}
    for I, c in a.coeffs.items():
        for pos, i in enumerate(I):
            if v[i]:
                key = I[:pos] + I[pos + 1:]
                out[key] = out.get(key, Fraction(0)) + (-1) ** pos * v[i] * c
    return KForm(a.dim, a.degree - 1, out)


def evaluate(a: KForm, vectors: Sequence[Vector]) -> Fraction:
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form evaluated on {len(vectors)} vectors")
    out = a
    for v in vectors:
        out = contract(v, out)
    return out.coeffs.get((), Fraction(0))


def top_coefficient(a: KForm) -> Fraction:
    """Coefficient of ``e^{1..n}``; the model's stand-in for integration."""
    if a.degree != a.dim:
        return Fraction(0)
    return a.coeffs.get(tuple(range(a.dim)), Fraction(0))


def pullback(a: KForm, p: linalg.Matrix) -> KForm:
    """Coefficients of ``a`` in the basis ``f_j = sum_i p[i][j] e_i``."""
    n = a.dim
    cols = [Vector(row[j] for row in p) for j in range(n)]
    out = {}
    for J in basis_indices(n, a.degree):
        out[J] = evaluate(a, [cols[j] for j in J])
    return KForm(n, a.degree, out)


class Endo:
    """A (1,1)-tensor given by its matrix on the model basis."""

    __slots__ = ("matrix",)

    def __init__(self, m: Sequence[Sequence]):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in m)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("endomorphism matrix must be square")
        object.__setattr__(self, "matrix", rows)

    def __setattr__(self, key, value):
        raise AttributeError("Endo is immutable")

    @classmethod
    def identity(cls, n: int) -> "Endo":
        return cls(linalg.identity(n))

    @classmethod
    def zero(cls, n: int) -> "Endo":
        return cls(linalg.zeros(n, n))

    @classmethod
    def from_columns(cls, cols: Sequence[Vector]) -> "Endo":
        n = len(cols)
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def rows(self) -> linalg.Matrix:
        return [list(r) for r in self.matrix]

    def column(self, j: int) -> Vector:
        return Vector(row[j] for row in self.matrix)

    def __call__(self, v: Vector) -> Vector:
        return apply_endo(self, v)

    def __matmul__(self, other: "Endo") -> "Endo":
        return endo_compose(self, other)

    def __add__(self, other: "Endo") -> "Endo":
        return endo_add(self, other)

    def __sub__(self, other: "Endo") -> "Endo":
        return endo_add(self, endo_scale(other, -1))

    def __neg__(self) -> "Endo":
        return endo_scale(self, -1)

    def __mul__(self, c) -> "Endo":
        return endo_scale(self, c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Endo) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def transpose(self) -> "Endo":
        return Endo(linalg.transpose(self.rows()))

    def __repr__(self):
        return "Endo(" + repr([[_fmt(x) for x in r] for r in self.matrix]) + ")"


def apply_endo(t: Endo, v: Vector) -> Vector:
    if t.dim != v.dim:
        raise ValueError(f"dimension mismatch: {t.dim} vs {v.dim}")
    return Vector(linalg.matvec(t.rows(), list(v)))


def endo_compose(s: Endo, t: Endo) -> Endo:
    """``s o t`` (apply ``t`` first)."""
    if s.dim != t.dim:
        raise ValueError(f"dimension mismatch: {s.dim} vs {t.dim}")
    return Endo(linalg.matmul(s.rows(), t.rows()))


def endo_add(s: Endo, t: Endo) -> Endo:
    if s.dim != t.dim:
        raise ValueError(f"dimension mismatch: {s.dim} vs {t.dim}")
    return Endo([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(s.matrix, t.matrix)])


def endo_scale(t: Endo, c) -> Endo:
    c = to_fraction(c)
    return Endo([[c * a for a in r] for r in t.matrix])


def outer(alpha: KForm, v: Vector) -> Endo:
    """The rank-one tensor ``alpha (x) v : X -> alpha(X) v``."""
    if alpha.degree != 1:
        raise ValueError("outer product needs a 1-form")
    a = alpha.to_vector()
    return Endo([[v[i] * a[j] for j in range(v.dim)] for i in range(v.dim)])
