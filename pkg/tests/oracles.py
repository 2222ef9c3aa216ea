"""Independent reference computations used to freeze and cross-check values.

Nothing here calls into the package's algorithms. Forms are handled as full
antisymmetric tensors, brackets come straight from structure constants, and
ranks, determinants and square roots are delegated to sympy.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, List, Sequence, Tuple

import sympy


def perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
            elif p[i] == p[j]:
                return 0
    return s


def tensor_value(coeffs: Dict[Tuple[int, ...], Fraction], idx: Sequence[int]) -> Fraction:
    """Value of a form, given by increasing-index coefficients, on basis vectors."""
    if len(set(idx)) < len(idx):
        return Fraction(0)
    order = sorted(idx)
    return perm_sign([order.index(i) for i in idx]) * coeffs.get(tuple(order), Fraction(0))


def evaluate(coeffs, degree: int, vectors: Sequence[Sequence[Fraction]]) -> Fraction:
    """Multilinear expansion over all index tuples."""
    total = Fraction(0)
    for idx, c in coeffs.items():
        for perm in permutations(range(degree)):
            term = Fraction(perm_sign(perm)) * c
            for slot, which in enumerate(perm):
                term *= vectors[slot][idx[which]]
            total += term
    return total


def wedge(a: Dict, p: int, b: Dict, q: int, n: int) -> Dict[Tuple[int, ...], Fraction]:
    """Shuffle formula on basis vectors."""
    out = {}
    for idx in combinations(range(n), p + q):
        total = Fraction(0)
        for perm in permutations(range(p + q)):
            sgn = perm_sign(perm)
            total += sgn * tensor_value(a, [idx[perm[i]] for i in range(p)]) * tensor_value(
                b, [idx[perm[p + i]] for i in range(q)]
            )
        total /= factorial(p) * factorial(q)
        if total:
            out[idx] = total
    return out


def bracket(c: Dict[Tuple[int, int], Dict[int, Fraction]], n: int, i: int, j: int) -> List[Fraction]:
    v = [Fraction(0)] * n
    if i == j:
        return v
    key, sgn = ((i, j), 1) if i < j else ((j, i), -1)
    for k, val in c.get(key, {}).items():
        v[k] += sgn * Fraction(val)
    return v


def ce_d(c, n: int, coeffs: Dict, p: int) -> Dict[Tuple[int, ...], Fraction]:
    """``d a(x0..xp) = sum_{i<j} (-1)^{i+j} a([xi,xj], x0..^i..^j..xp)``."""
    out = {}
    for idx in combinations(range(n), p + 1):
        total = Fraction(0)
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                br = bracket(c, n, idx[i], idx[j])
                rest = [idx[k] for k in range(p + 1) if k not in (i, j)]
                for k, bk in enumerate(br):
                    if bk:
                        total += (-1) ** (i + j) * bk * tensor_value(coeffs, [k] + rest)
        if total:
            out[idx] = total
    return out


def d_matrix(c, n: int, p: int) -> sympy.Matrix:
    src = list(combinations(range(n), p))
    dst = list(combinations(range(n), p + 1))
    m = sympy.zeros(len(dst), len(src))
    for col, idx in enumerate(src):
        img = ce_d(c, n, {idx: Fraction(1)}, p)
        for row, jdx in enumerate(dst):
            m[row, col] = sympy.Rational(img.get(jdx, Fraction(0)))
    return m


def betti(c, n: int) -> List[int]:
    ranks = [d_matrix(c, n, p).rank() if p < n else 0 for p in range(n + 1)]
    from math import comb

    return [comb(n, p) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(n + 1)]


def jacobi_ok(c, n: int) -> bool:
    for i in range(n):
        for j in range(n):
            for k in range(n):
                tot = [Fraction(0)] * n
                for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = bracket(c, n, b, d)
                    for m, coef in enumerate(inner):
                        if coef:
                            out = bracket(c, n, a, m)
                            tot = [t + coef * o for t, o in zip(tot, out)]
                if any(tot):
                    return False
    return True


def nijenhuis(c, n: int, a: sympy.Matrix, i: int, j: int) -> List[Fraction]:
    """``A^2[X,Y] - A([AX,Y] + [X,AY]) + [AX,AY]`` with columns acting on vectors."""

    def br(x, y):
        out = sympy.zeros(n, 1)
        for p in range(n):
            for q in range(n):
                if x[p] and y[q]:
                    out += x[p] * y[q] * sympy.Matrix([sympy.Rational(v) for v in bracket(c, n, p, q)])
        return out

    ei = sympy.zeros(n, 1)
    ei[i] = 1
    ej = sympy.zeros(n, 1)
    ej[j] = 1
    res = a * a * br(ei, ej) - a * (br(a * ei, ej) + br(ei, a * ej)) + br(a * ei, a * ej)
    return [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in res]


def christoffel(c, n: int, g: sympy.Matrix) -> Dict[Tuple[int, int, int], Fraction]:
    """Koszul formula solved with sympy: ``2 g(nabla_i e_j, e_l) = ...``."""
    ginv = g.inv()

    def gb(i, j, l):  # g([e_i,e_j], e_l)
        v = bracket(c, n, i, j)
        return sum(sympy.Rational(v[k]) * g[k, l] for k in range(n))

    out = {}
    for i in range(n):
        for j in range(n):
            low = [sympy.Rational(1, 2) * (gb(i, j, l) - gb(j, l, i) + gb(l, i, j)) for l in range(n)]
            for k in range(n):
                val = sum(ginv[k, l] * low[l] for l in range(n))
                out[(i, j, k)] = Fraction(str(sympy.nsimplify(val)))
    return out


def matrix_order_by_powering(a: Sequence[Sequence[int]], bound: int) -> int:
    """Smallest ``k <= bound`` with ``A^k = I``, or 0 when none."""
    m = sympy.Matrix(a)
    p = sympy.eye(m.shape[0])
    for k in range(1, bound + 1):
        p = p * m
        if p == sympy.eye(m.shape[0]):
            return k
    return 0


# trig oracle -----------------------------------------------------------------


def trig_to_sympy(f, xs):
    """Convert a TrigPoly to a sympy expression using only its public terms."""
    expr = sympy.Integer(0)
    for (k, phase), c in f.terms.items():
        arg = sum(int(ki) * x for ki, x in zip(k, xs))
        expr += sympy.Rational(c.numerator, c.denominator) * (sympy.cos(arg) if phase == "c" else sympy.sin(arg))
    return expr


def same_function(a, b) -> bool:
    return sympy.expand((a - b).rewrite(sympy.exp)) == 0
