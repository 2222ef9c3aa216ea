"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`. Everything here is
small-dimensional (a few dozen rows at most), so plain Gaussian elimination
with a deterministic pivot rule is both fast enough and reproducible.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing to convert float {x!r} to an exact rational")
    return Fraction(x)


def matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[to_fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def hstack(*blocks: Matrix) -> Matrix:
    blocks = [b for b in blocks if b and b[0]]
    if not blocks:
        return []
    return [sum((b[i] for b in blocks), []) for i in range(len(blocks[0]))]


def columns(vectors: Sequence[Sequence[Fraction]], nrows: int) -> Matrix:
    """Matrix whose columns are ``vectors`` (``nrows`` rows even if empty)."""
    if not vectors:
        return [[] for _ in range(nrows)]
    return [[v[i] for v in vectors] for i in range(nrows)]


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken left to right, first nonzero row from the top, so the
    result only depends on the input matrix.
    """
    m = [row[:] for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the kernel, one vector per free column (standard RREF basis)."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a or not a[0]:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of ``a x = b`` (free variables set to zero), or None."""
    ncols = len(a[0]) if a and a[0] else 0
    if ncols == 0:
        return [] if all(x == 0 for x in b) else None
    aug = [row[:] + [to_fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in enumerate(pivots):
        x[pc] = r[row][ncols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + e for row, e in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in a]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * out


def independent_extension(base: List[List[Fraction]], candidates: List[List[Fraction]], dim: int) -> List[int]:
    """Indices of ``candidates`` that greedily enlarge ``span(base)``.

    Candidates are scanned in order, which is the deterministic
    (lexicographic) pivot rule used for cohomology representatives.
    """
    chosen: List[int] = []
    current = [v[:] for v in base]
    r = rank(columns(current, dim)) if current else 0
    for idx, v in enumerate(candidates):
        trial = current + [v]
        rt = rank(columns(trial, dim))
        if rt > r:
            chosen.append(idx)
            current = trial
            r = rt
    return chosen


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion on leading principal minors."""
    n = len(a)
    return all(det([row[:k] for row in a[:k]]) > 0 for k in range(1, n + 1))
