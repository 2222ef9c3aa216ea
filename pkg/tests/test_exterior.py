from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

import oracles
from cosy import linalg
from cosy.exterior import (
    Endo,
    KForm,
    Vector,
    apply_endo,
    basis_indices,
    contract,
    endo_add,
    endo_compose,
    endo_scale,
    outer,
    pullback,
    wedge,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def forms(draw, n, p=None):
    if p is None:
        p = draw(st.integers(0, n))
    idx = basis_indices(n, p)
    coeffs = draw(st.lists(small, min_size=len(idx), max_size=len(idx)))
    return KForm(n, p, dict(zip(idx, coeffs)))


@st.composite
def vectors(draw, n):
    return Vector(draw(st.lists(small, min_size=n, max_size=n)))


@st.composite
def matrices(draw, n):
    return [draw(st.lists(small, min_size=n, max_size=n)) for _ in range(n)]


# linear algebra against sympy ----------------------------------------------


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), matrices(n))))
def test_rank_det_match_sympy(data):
    n, m = data
    ref = sympy.Matrix(m)
    assert linalg.rank(m) == ref.rank()
    assert linalg.det(m) == Fraction(str(ref.det()))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), matrices(n))))
def test_inverse_and_nullspace_match_sympy(data):
    n, m = data
    ref = sympy.Matrix(m)
    ns = linalg.nullspace(m)
    assert len(ns) == n - ref.rank()
    for v in ns:
        assert linalg.matvec(m, v) == [0] * n
    if ref.det() != 0:
        inv = linalg.inverse(m)
        assert sympy.Matrix(inv) == ref.inv()
    else:
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(m)


def test_positive_definite_by_minors():
    assert linalg.is_positive_definite([[2, 1], [1, 2]])
    assert not linalg.is_positive_definite([[1, 2], [2, 1]])


# wedge and contract examples -------------------------------------------------


def test_basis_wedge():
    assert wedge(KForm.basis(3, 0), KForm.basis(3, 1)) == KForm.basis(3, 0, 1)


def test_repeated_index_wedge_vanishes():
    e12 = KForm.basis(4, 0, 1)
    assert wedge(e12, e12).is_zero()


def test_square_of_split_symplectic_form():
    tau = KForm.basis(4, 0, 3) + KForm.basis(4, 1, 2)
    # e14 ^ e23 = e1423 = e1234 after two transpositions
    assert wedge(tau, tau) == KForm.basis(4, 0, 1, 2, 3) * 2


def test_contract_leading_index():
    a = wedge(wedge(KForm.basis(3, 2), KForm.basis(3, 0)), KForm.basis(3, 1))
    assert contract(Vector.basis(3, 2), a) == KForm.basis(3, 0, 1)


def test_contract_absent_index():
    assert contract(Vector.basis(3, 2), KForm.basis(3, 0, 1)).is_zero()


def test_contract_sum_of_basis_vectors():
    v = Vector([1, 1, 0])
    assert contract(v, KForm.basis(3, 0, 1)) == KForm.basis(3, 1) - KForm.basis(3, 0)


def test_contract_on_function_is_zero():
    out = contract(Vector([1, 2, 3]), KForm.constant(3, 5))
    assert out.is_zero() and out.degree == 0


def test_degree_above_dimension_is_zero():
    assert wedge(KForm.basis(2, 0, 1), KForm.basis(2, 0)).is_zero()


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        wedge(KForm.basis(2, 0), KForm.basis(3, 0))


# endomorphisms -------------------------------------------------------------


def test_identity_endo():
    v = Vector([1, -2, Fraction(1, 3)])
    assert apply_endo(Endo.identity(3), v) == v


def test_rotation_squares_to_minus_identity():
    j = Endo([[0, -1], [1, 0]])
    assert apply_endo(j, apply_endo(j, Vector.basis(2, 0))) == -Vector.basis(2, 0)
    assert endo_compose(j, j) == endo_scale(Endo.identity(2), -1)


def test_rank_one_projector():
    p = outer(KForm.basis(3, 2), Vector.basis(3, 2))
    assert apply_endo(p, Vector.basis(3, 2)) == Vector.basis(3, 2)
    assert apply_endo(p, Vector.basis(3, 0)).is_zero()
    assert endo_add(p, endo_scale(p, -1)).is_zero()


# properties --------------------------------------------------------------


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(forms(n), forms(n))))
def test_graded_commutativity(pair):
    a, b = pair
    assert wedge(a, b) == wedge(b, a) * (-1) ** (a.degree * b.degree)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(forms(n), forms(n), forms(n))))
def test_wedge_associative(triple):
    a, b, c = triple
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), forms(n), forms(n))))
def test_wedge_matches_shuffle_oracle(data):
    n, a, b = data
    ref = oracles.wedge(dict(a.coeffs), a.degree, dict(b.coeffs), b.degree, n)
    assert dict(wedge(a, b).coeffs) == ref


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(forms(n), vectors(n), vectors(n), vectors(n), vectors(n))))
def test_evaluation_matches_multilinear_oracle(data):
    a, *vs = data
    vs = vs[: a.degree]
    assert a(*vs) == oracles.evaluate(dict(a.coeffs), a.degree, [list(v) for v in vs])


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(vectors(n), forms(n))))
def test_contract_twice_is_zero(data):
    v, a = data
    assert contract(v, contract(v, a)).is_zero()


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(vectors(n), forms(n), forms(n))))
def test_contract_is_antiderivation(data):
    v, a, b = data
    lhs = contract(v, wedge(a, b))
    assume(a.degree and b.degree)  # iota of a function is the zero function, not a (-1)-form
    rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b)) * (-1) ** a.degree
    assert lhs == rhs


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), forms(n), forms(n), matrices(n))))
def test_pullback_respects_wedge(data):
    n, a, b, p = data
    assert pullback(wedge(a, b), p) == wedge(pullback(a, p), pullback(b, p))
