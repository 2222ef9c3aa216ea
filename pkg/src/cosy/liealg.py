"""Invariant calculus on a Lie-algebra model.

A :class:`LieModel` stands for a compact homogeneous space through its Lie
algebra: invariant forms, vector fields and tensors have constant
coefficients, so every derivative of a coefficient function vanishes and the
whole calculus reduces to the structure constants.

Sign convention: for an invariant 1-form ``d a(X, Y) = -a([X, Y])``. With the
Kodaira-Thurston normal form ``[e1, e2] = -e4`` this gives ``d e^4 = e^{12}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg
from .exterior import Endo, KForm, Vector, basis_indices, contract, wedge
from .linalg import to_fraction


class JacobiError(ValueError):
    """Raised when an operation needs a genuine Lie algebra."""


class LieModel:
    """Finite-dimensional Lie algebra with rational structure constants.

    ``brackets`` maps 0-based pairs ``(i, j)`` with ``i < j`` to a mapping
    ``{k: c}`` so that ``[e_i, e_j] = sum_k c e_k``.
    """

    def __init__(self, dim: int, brackets: Mapping[Tuple[int, int], Mapping[int, object]] = (), label: str = ""):
        self.dim = dim
        self.label = label
        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        items = brackets.items() if isinstance(brackets, Mapping) else brackets
        for (i, j), coeffs in items:
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket indices must satisfy 0 <= i < j < dim, got ({i}, {j})")
            row = {int(k): to_fraction(c) for k, c in coeffs.items()}
            if any(not 0 <= k < dim for k in row):
                raise ValueError(f"bracket [{i},{j}] has an out-of-range target index")
            row = {k: c for k, c in sorted(row.items()) if c != 0}
            if row:
                table[(i, j)] = row
        self.brackets = table
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), row in table.items():
            for k, v in row.items():
                c[i][j][k] = v
                c[j][i][k] = -v
        self._c = c
        self._d1 = [self._d_basis_one_form(k) for k in range(dim)]

    def __repr__(self):
        return f"LieModel(dim={self.dim}, label={self.label!r}, brackets={len(self.brackets)})"

    def __eq__(self, other):
        return isinstance(other, LieModel) and self.dim == other.dim and self.brackets == other.brackets

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(v.items())) for k, v in sorted(self.brackets.items()))))

    @classmethod
    def abelian(cls, dim: int, label: str = "") -> "LieModel":
        return cls(dim, {}, label or f"T^{dim}")

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._c[i][j][k]

    def bracket(self, x: Vector, y: Vector) -> Vector:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                row = self._c[i][j]
                xy = x[i] * y[j]
                for k in range(n):
                    if row[k]:
                        out[k] += xy * row[k]
        return Vector(out)

    def ad(self, x: Vector) -> Endo:
        return Endo.from_columns([self.bracket(x, Vector.basis(self.dim, j)) for j in range(self.dim)])

    def is_abelian(self) -> bool:
        return not self.brackets

    def extend_central(self, label: str = "") -> "LieModel":
        """Product with a circle: append one central basis vector."""
        return LieModel(self.dim + 1, self.brackets, label or f"{self.label} x S^1")

    def change_basis(self, p: linalg.Matrix) -> "LieModel":
        """Structure constants in the basis ``f_j = sum_i p[i][j] e_i``."""
        n = self.dim
        pinv = linalg.inverse(p)
        f = [Vector(row[j] for row in p) for j in range(n)]
        table = {}
        for a in range(n):
            for b in range(a + 1, n):
                br = self.bracket(f[a], f[b])
                coords = linalg.matvec(pinv, list(br))
                table[(a, b)] = {k: c for k, c in enumerate(coords) if c}
        return LieModel(n, table, self.label)

    def _d_basis_one_form(self, k: int) -> KForm:
        return KForm(self.dim, 2, {(i, j): -row[k] for (i, j), row in self.brackets.items() if row.get(k)})


def check_jacobi(L: LieModel) -> Tuple[bool, Optional[Tuple[int, int, int]]]:
    """Whether the Jacobi identity holds; also the first violating triple (1-based)."""
    n = L.dim
    e = [Vector.basis(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                jac = (
                    L.bracket(e[i], L.bracket(e[j], e[k]))
                    + L.bracket(e[j], L.bracket(e[k], e[i]))
                    + L.bracket(e[k], L.bracket(e[i], e[j]))
                )
                if not jac.is_zero():
                    return False, (i + 1, j + 1, k + 1)
    return True, None


def require_jacobi(L: LieModel) -> None:
    ok, triple = check_jacobi(L)
    if not ok:
        raise JacobiError(f"Jacobi identity fails for basis triple {triple} in model {L.label!r}")


def lower_central_series_dims(L: LieModel) -> List[int]:
    n = L.dim
    current = [Vector.basis(n, i) for i in range(n)]
    dims = [n]
    while True:
        gens = [L.bracket(Vector.basis(n, i), v) for i in range(n) for v in current]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            dims.append(0)
            return dims
        m = linalg.transpose([list(g) for g in gens])
        r = linalg.rank(m)
        if r == dims[-1]:
            return dims
        dims.append(r)
        basis_rows, pivots = linalg.rref([list(g) for g in gens])
        current = [Vector(row) for row in basis_rows[:r]]


def is_nilpotent(L: LieModel) -> bool:
    return lower_central_series_dims(L)[-1] == 0


def ce_d(L: LieModel, a: KForm) -> KForm:
    """Chevalley-Eilenberg differential on invariant forms."""
    if a.dim != L.dim:
        raise ValueError(f"form of dimension {a.dim} on model of dimension {L.dim}")
    n = L.dim
    out = KForm.zero(n, a.degree + 1)
    if a.degree >= n:
        return out
    for I, c in a.coeffs.items():
        for pos, k in enumerate(I):
            dk = L._d1[k]
            if dk.is_zero():
                continue
            left = KForm.basis(n, *I[:pos])
            right = KForm.basis(n, *I[pos + 1:])
            term = wedge(wedge(left, dk), right)
            out = out + term * ((-1) ** pos * c)
    return out


def d_matrix(L: LieModel, p: int) -> linalg.Matrix:
    """Matrix of ``d: Lambda^p -> Lambda^{p+1}`` in lexicographic bases."""
    n = L.dim
    src = basis_indices(n, p)
    rows = len(basis_indices(n, p + 1)) if p + 1 <= n else 0
    cols = [ce_d(L, KForm.basis(n, *I)).to_vector() if p + 1 <= n else [] for I in src]
    return linalg.columns(cols, rows)


class Metric:
    """A symmetric positive-definite bilinear form on the model."""

    def __init__(self, m: Sequence[Sequence]):
        rows = linalg.matrix(m)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("metric matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
        if not linalg.is_positive_definite(rows):
            raise ValueError("metric is not positive definite")
        self.matrix = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(linalg.identity(n))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Metric":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def rows(self) -> linalg.Matrix:
        return [list(r) for r in self.matrix]

    def __call__(self, x: Vector, y: Vector) -> Fraction:
        return sum((x[i] * self.matrix[i][j] * y[j] for i in range(self.dim) if x[i] for j in range(self.dim) if y[j]), Fraction(0))

    def flat(self, x: Vector) -> KForm:
        """The 1-form ``g(x, .)``."""
        return KForm.one_form(linalg.matvec(self.rows(), list(x)))

    def __eq__(self, other):
        return isinstance(other, Metric) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Metric({[[str(x) for x in r] for r in self.matrix]})"


@dataclass(frozen=True)
class Connection:
    """``gamma[i][j]`` holds ``nabla_{e_i} e_j``."""

    model: LieModel
    gamma: Tuple[Tuple[Vector, ...], ...]

    def christoffel(self, i: int, j: int, k: int) -> Fraction:
        return self.gamma[i][j][k]

    def covariant(self, x: Vector, y: Vector) -> Vector:
        """``nabla_x y`` for invariant fields."""
        n = self.model.dim
        out = Vector.zero(n)
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if y[j]:
                    out = out + self.gamma[i][j] * (x[i] * y[j])
        return out

    def nabla_vector(self, y: Vector) -> Endo:
        """The endomorphism ``X -> nabla_X y``."""
        n = self.model.dim
        return Endo.from_columns([self.covariant(Vector.basis(n, i), y) for i in range(n)])

    def nabla_form(self, a: KForm) -> List[KForm]:
        """``nabla_{e_i} a`` for a 1-form with constant coefficients."""
        if a.degree != 1:
            raise ValueError("nabla_form handles 1-forms")
        n = self.model.dim
        out = []
        for i in range(n):
            out.append(KForm.one_form([-a(self.gamma[i][j]) for j in range(n)]))
        return out

    def torsion_free(self) -> bool:
        L = self.model
        n = L.dim
        e = [Vector.basis(n, i) for i in range(n)]
        return all(self.gamma[i][j] - self.gamma[j][i] == L.bracket(e[i], e[j]) for i in range(n) for j in range(n))

    def metric_compatible(self, g: Metric) -> bool:
        n = self.model.dim
        e = [Vector.basis(n, i) for i in range(n)]
        return all(
            g(self.gamma[i][j], e[k]) + g(e[j], self.gamma[i][k]) == 0
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )


def levi_civita(L: LieModel, g: Metric) -> Connection:
    """Koszul formula for invariant fields."""
    n = L.dim
    if g.dim != n:
        raise ValueError("metric dimension does not match the model")
    ginv = linalg.inverse(g.rows())
    e = [Vector.basis(n, i) for i in range(n)]
    br = [[L.bracket(e[i], e[j]) for j in range(n)] for i in range(n)]
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            rhs = [
                (g(br[i][j], e[k]) - g(br[j][k], e[i]) + g(br[k][i], e[j])) / 2
                for k in range(n)
            ]
            row.append(Vector(linalg.matvec(ginv, rhs)))
        gamma.append(tuple(row))
    return Connection(L, tuple(gamma))


def lie_derivative_bilinear(L: LieModel, x: Vector, b: Sequence[Sequence]) -> linalg.Matrix:
    """``(L_x b)(Y, Z) = -b([x, Y], Z) - b(Y, [x, Z])`` as a matrix."""
    n = L.dim
    adx = L.ad(x).rows()
    bm = linalg.matrix(b)
    # entries: -(ad^T b + b ad)
    left = linalg.matmul(linalg.transpose(adx), bm)
    right = linalg.matmul(bm, adx)
    return [[-(left[i][j] + right[i][j]) for j in range(n)] for i in range(n)]


def lie_derivative(L: LieModel, x: Vector, t: Union[KForm, Endo, Vector, Metric]):
    """Lie derivative of an invariant tensor along an invariant field."""
    if isinstance(t, Vector):
        return L.bracket(x, t)
    if isinstance(t, KForm):
        if t.degree == 0:
            return KForm.zero(t.dim, 0)
        return ce_d(L, contract(x, t)) + contract(x, ce_d(L, t))
    if isinstance(t, Endo):
        n = L.dim
        cols = []
        for j in range(n):
            ej = Vector.basis(n, j)
            cols.append(L.bracket(x, t(ej)) - t(L.bracket(x, ej)))
        return Endo.from_columns(cols)
    if isinstance(t, Metric):
        return lie_derivative_bilinear(L, x, t.rows())
    raise TypeError(f"no Lie derivative for {type(t).__name__}")


NTable = Dict[Tuple[int, int], Vector]


def nijenhuis(L: LieModel, a: Endo) -> NTable:
    """``N_A(e_i, e_j)`` for ``i < j`` (0-based keys; zero entries kept)."""
    n = L.dim
    e = [Vector.basis(n, i) for i in range(n)]
    a2 = a @ a
    out: NTable = {}
    for i in range(n):
        for j in range(i + 1, n):
            x, y = e[i], e[j]
            ax, ay = a(x), a(y)
            val = a2(L.bracket(x, y)) - a(L.bracket(ax, y) + L.bracket(x, ay)) + L.bracket(ax, ay)
            out[(i, j)] = val
    return out


def is_killing(L: LieModel, g: Metric, x: Vector) -> bool:
    return not any(any(row) for row in lie_derivative_bilinear(L, x, g.rows()))


def killing_violation(L: LieModel, g: Metric, x: Vector) -> Optional[Tuple[int, int]]:
    m = lie_derivative_bilinear(L, x, g.rows())
    for i in range(L.dim):
        for j in range(i, L.dim):
            if m[i][j]:
                return (i + 1, j + 1)
    return None
