import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from corpus import corpus, structure
from cosy.acms import validate
from cosy.deform import (
    DeformationError,
    DeformationStep,
    TypeIIParams,
    TypeIParams,
    admissible_directions,
    apply_chain,
    deform_type1,
    deform_type1_pair,
    deform_type2,
    deformed_kahler_form,
    type1_violations,
    verify_preservation,
)
from cosy.exterior import Endo, KForm, Vector, wedge, wedge_power
from cosy.liealg import lie_derivative


def e(n, *idx):
    return KForm.basis(n, *idx)


def reference_type1(s, theta):
    """Deformed ``(eta, xi, phi, g, omega)`` from the rescaling formulas with sympy matrices."""
    n = s.dim
    eta = sympy.Matrix([[sympy.Rational(x) for x in s.eta.to_vector()]])
    xi = sympy.Matrix([sympy.Rational(x) for x in s.xi])
    th = sympy.Matrix([sympy.Rational(x) for x in theta])
    phi = sympy.Matrix(s.phi.rows())
    g = sympy.Matrix(s.g.rows())
    c = 1 + (eta * th)[0]
    eta1 = eta / c
    xi1 = xi + th
    proj = sympy.eye(n) - xi1 * eta1
    phi1 = phi * proj
    g1 = proj.T * g * proj / c + eta1.T * eta1
    omega1 = g1 * phi1  # omega(X, Y) = g(X, phi Y)
    return eta1, xi1, phi1, g1, omega1


def admissible_thetas(s, rng, count):
    dirs = admissible_directions(s)
    out = []
    while len(out) < count:
        theta = Vector.zero(s.dim)
        for v in dirs:
            theta = theta + v * Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if 1 + s.eta(theta) > 0:
            out.append(theta)
    return out


# type I examples ---------------------------------------------------------------


@pytest.mark.parametrize("name, s", corpus())
def test_zero_theta_is_identity(name, s):
    d = deform_type1(s, Vector.zero(s.dim))
    assert (d.eta, d.xi, d.phi, d.g, d.omega) == (s.eta, s.xi, s.phi, s.g, s.omega)


def test_t3_shift_along_e1():
    s = structure("t3")
    d = deform_type1(s, TypeIParams(Vector.basis(3, 0)))
    assert d.xi == Vector([1, 0, 1])
    assert d.eta == e(3, 2)
    assert d.phi(Vector.basis(3, 2)) == -s.phi(Vector.basis(3, 0))
    assert d.omega == e(3, 0, 1) + e(3, 1, 2)
    assert validate(d) == []


def test_t3_rescale_along_reeb_field():
    s = structure("t3")
    d = deform_type1(s, s.xi)
    assert d.eta == e(3, 2) / 2
    assert d.xi == Vector([0, 0, 2])
    half = Fraction(1, 2)
    assert d.g.rows() == [[half, 0, 0], [0, half, 0], [0, 0, Fraction(1, 4)]]


def test_kt_s1_preservation_examples():
    s = structure("kt_s1")
    for theta in (Vector.basis(5, 4) * Fraction(1, 2), Vector.basis(5, 2)):
        rep = verify_preservation(s, theta)
        assert rep.ok and rep.lie_theta_eta_zero
        assert "K-cosymplectic" in rep.after and "coKähler" not in rep.after


def test_t3_stays_cokahler():
    rep = verify_preservation(structure("t3"), Vector.basis(3, 0))
    assert rep.ok and "coKähler" in rep.after


def test_type1_rejections():
    s = structure("kt_s1")
    with pytest.raises(DeformationError, match="not positive"):
        deform_type1(s, -s.xi)
    with pytest.raises(DeformationError, match="L_theta g"):
        deform_type1(s, Vector.basis(5, 0))
    assert any("[xi, theta]" in v for v in type1_violations(structure("sol3"), Vector.basis(3, 0)))


@pytest.mark.parametrize("name, s", corpus())
def test_type1_matches_reference(name, s):
    rng = random.Random(sum(map(ord, name)))
    for theta in admissible_thetas(s, rng, 3):
        d = deform_type1(s, theta)
        eta1, xi1, phi1, g1, omega1 = reference_type1(s, theta)
        assert sympy.Matrix([d.eta.to_vector()]) == eta1
        assert sympy.Matrix(list(d.xi)) == xi1
        assert sympy.Matrix(d.phi.rows()) == phi1
        assert sympy.Matrix(d.g.rows()) == g1
        assert sympy.Matrix(deformed_kahler_form(s, theta).to_matrix()) == omega1


@pytest.mark.parametrize("name, s", corpus())
def test_admissible_thetas_preserve_flags(name, s):
    rng = random.Random(7)
    for theta in admissible_thetas(s, rng, 4):
        rep = verify_preservation(s, theta)
        assert rep.ok, rep
        # eta(theta) is a constant and L_theta eta vanishes as a consequence
        assert rep.lie_theta_eta_zero


def test_pair_route_agrees_with_metric_route():
    s = structure("kt_s1")
    theta = Vector.basis(5, 2) + Vector.basis(5, 4)
    full = deform_type1(s, theta)
    bare = deform_type1_pair(s.pair(), theta)
    assert (bare.eta, bare.omega, bare.xi) == (full.eta, full.omega, full.xi)


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_deformed_structure_axioms(seed):
    s = structure("t5")
    theta = admissible_thetas(s, random.Random(seed), 1)[0]
    d = deform_type1(s, theta)
    n = d.dim
    assert d.eta(d.xi) == 1
    proj = Endo([[d.xi[i] * d.eta.to_vector()[j] for j in range(n)] for i in range(n)])
    assert d.phi @ d.phi == Endo.identity(n) * -1 + proj
    assert validate(d) == []


# type II -----------------------------------------------------------------------


def test_zero_beta_is_identity():
    p = structure("t3").pair()
    out = deform_type2(p, KForm.zero(3, 1))
    assert (out.eta, out.omega, out.xi) == (p.eta, p.omega, p.xi)


def test_t3_rational_shift():
    p = structure("t3").pair()
    beta = e(3, 0) / 2 + e(3, 1) / 3
    out = deform_type2(p, TypeIIParams(beta))
    assert out.eta == e(3, 2) + beta
    assert out.xi == Vector.basis(3, 2)


def test_type2_rejects_vertical_beta():
    with pytest.raises(DeformationError, match="iota_xi beta"):
        deform_type2(structure("t3").pair(), e(3, 2))


def test_type2_rejects_non_closed_beta():
    with pytest.raises(DeformationError, match="d beta"):
        deform_type2(structure("kt_s1").pair(), e(5, 3))


@pytest.mark.parametrize("name, s", corpus())
def test_type2_keeps_volume_form(name, s):
    beta = e(s.dim, 0) * 2 - e(s.dim, 1)
    out = deform_type2(s, beta)
    vol = wedge(s.eta, wedge_power(s.omega, s.n))
    assert wedge(out.eta, wedge_power(out.omega, s.n)) == vol
    assert out.omega == s.omega and out.xi == s.xi


# chains ------------------------------------------------------------------------


def test_chain_type1_then_type2():
    s = structure("t3")
    steps = [
        DeformationStep("type1", theta=Vector([Fraction(1, 2), 0, 0])),
        DeformationStep("type2", beta=e(3, 1) / 5),
    ]
    final, audit = apply_chain(s, steps)
    assert len(audit) == 2 and "coKähler" in audit[0][1] and audit[1][1] is None
    assert final.xi == Vector([Fraction(1, 2), 0, 1])
    assert final.eta == e(3, 2) + e(3, 1) / 5


def test_chain_continues_without_metric():
    s = structure("t3")
    steps = [DeformationStep("type2", beta=e(3, 0)), DeformationStep("type1", theta=Vector.basis(3, 1))]
    final, audit = apply_chain(s, steps)
    assert audit[1][1] is None
    assert final.xi == Vector([0, 1, 1])
    assert lie_derivative(final.model, final.xi, final.omega).is_zero()


def test_chain_rejects_unknown_kind():
    with pytest.raises(ValueError):
        apply_chain(structure("t3"), [DeformationStep("type3")])
