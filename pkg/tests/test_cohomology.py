import random
from math import comb

import pytest
from hypothesis import given, strategies as st

import oracles
from corpus import corpus, kt_model, random_k_cosymplectic, structure
from cosy import linalg
from cosy.acms import classify
from cosy.cohomology import (
    basic_betti,
    basic_betti_checks,
    basic_betti_from_betti,
    basic_complex,
    betti,
    cohomology_report,
    horizontal_dims,
    invariant_complex,
    lefschetz_anticommutes,
    lefschetz_map,
    lefschetz_ranks,
    omega_power_check,
    pairing_check,
    pairing_matrices,
    splitting_dims_ok,
    verify_splitting,
    xi_invariant_complex,
)
from cosy.exterior import KForm, Vector, wedge
from cosy.liealg import JacobiError, LieModel, ce_d


def e(n, *idx):
    return KForm.basis(n, *idx)


# Betti numbers -----------------------------------------------------------------


def test_t3_betti():
    assert betti(LieModel.abelian(3)) == [1, 3, 3, 1]


def test_kt_first_betti():
    assert betti(kt_model())[1] == 3


def test_kt_s1_betti():
    assert betti(structure("kt_s1").model) == [1, 4, 7, 7, 4, 1]


def test_betti_needs_jacobi():
    with pytest.raises(JacobiError):
        betti(LieModel(3, {(0, 1): {2: 1}, (0, 2): {0: 1}}))


@pytest.mark.parametrize("name", ["kt_s1", "sol3", "heisenberg"])
def test_betti_matches_oracle(name):
    L = structure(name).model
    assert betti(L) == oracles.betti(L.brackets, L.dim)


def test_complexes_square_to_zero():
    s = structure("kt_s1")
    assert invariant_complex(s.model).is_complex()
    assert basic_complex(s.model, s.xi, s.eta).is_complex()
    assert xi_invariant_complex(s.model, s.xi).is_complex()


# basic cohomology --------------------------------------------------------------


def test_t3_basic_complex():
    bc = basic_complex(LieModel.abelian(3), Vector.basis(3, 2), e(3, 2))
    assert bc.dims() == [1, 2, 1, 0]
    assert set(bc.bases[1]) == {e(3, 0), e(3, 1)}


def test_kt_s1_degree_one_basic_space():
    s = structure("kt_s1")
    bc = basic_complex(s.model, s.xi, s.eta)
    span = linalg.rank(linalg.columns([f.to_vector() for f in bc.bases[1]] + [e(5, i).to_vector() for i in range(4)], 5))
    assert len(bc.bases[1]) == 4 and span == 4


def test_basic_betti_examples():
    assert basic_betti(LieModel.abelian(3), Vector.basis(3, 2), e(3, 2)) == [1, 2, 1]
    assert basic_betti(LieModel.abelian(5), Vector.basis(5, 4), e(5, 4)) == [1, 4, 6, 4, 1]
    s = structure("kt_s1")
    assert basic_betti(s.model, s.xi, s.eta) == [1, 3, 4, 3, 1]


def test_basic_complex_rejects_bad_reeb_data():
    with pytest.raises(ValueError):
        basic_complex(LieModel.abelian(3), Vector.basis(3, 2), e(3, 0))
    with pytest.raises(ValueError):
        basic_complex(kt_model().extend_central(), Vector.basis(5, 3), e(5, 3))


def test_basic_betti_checks():
    assert all(basic_betti_checks([1, 3, 4, 3, 1]).values())
    checks = basic_betti_checks([1, 3, 2])
    assert checks["b0_is_1"] and not checks["top_is_1"] and not checks["symmetric"]


@pytest.mark.parametrize("name", ["t3", "t5", "kt_s1", "sol3"])
def test_horizontal_splitting(name):
    s = structure(name)
    assert splitting_dims_ok(s.model, s.xi)
    h = horizontal_dims(s.model, s.xi)
    assert h == [comb(s.dim - 1, p) for p in range(s.dim)] + [0]


# splitting and recursion -------------------------------------------------------


@pytest.mark.parametrize("name", ["t3", "t5", "kt_s1"])
def test_splitting_holds(name):
    s = structure(name)
    assert verify_splitting(s.model, s.xi, s.eta)


def test_recursion_examples():
    assert list(basic_betti_from_betti([1, 3, 3, 1]).values) == [1, 2, 1]
    assert list(basic_betti_from_betti([1] * 8).values) == [1, 0, 1, 0, 1, 0, 1]


def test_recursion_rejects_unrealizable():
    r = basic_betti_from_betti([1, 0, 0, 1])
    assert not r.ok and "negative" in r.reason
    assert not basic_betti_from_betti([1, 2, 3]).ok
    assert not basic_betti_from_betti([2, 4, 2, 0]).ok


def test_recursion_rejects_asymmetric():
    # alternating sums 1, 2, 2 with a zero tail
    r = basic_betti_from_betti([1, 3, 4, 2])
    assert not r.ok


@pytest.mark.parametrize("seed", range(4))
def test_recursion_matches_direct_on_random_models(seed):
    s = random_k_cosymplectic(random.Random(100 + seed), [2, 4][seed % 2])
    bb = basic_betti(s.model, s.xi, s.eta)
    assert list(basic_betti_from_betti(betti(s.model)).values) == bb
    assert bb == bb[::-1] and bb[0] == bb[-1] == 1


@given(st.lists(st.integers(0, 4), max_size=3), st.integers(0, 4))
def test_recursion_inverts_splitting(bb, mid):
    # a symmetric basic sequence with b0 = 1 comes back from the Betti numbers it induces
    seq = [1] + bb + [mid] + bb[::-1] + [1]
    b = [seq[p] + (seq[p - 1] if p else 0) for p in range(len(seq))] + [seq[-1]]
    r = basic_betti_from_betti(b)
    assert r.ok and list(r.values) == seq


# pairing and powers ------------------------------------------------------------


def test_t3_pairing_is_antidiagonal():
    m = pairing_matrices(LieModel.abelian(3), Vector.basis(3, 2), e(3, 2))[1]
    assert m[0][0] == m[1][1] == 0 and m[0][1] == -m[1][0] != 0


@pytest.mark.parametrize("name", ["t3", "t5", "kt_s1"])
def test_pairing_and_powers(name):
    s = structure(name)
    assert pairing_check(s.model, s.xi, s.eta)
    assert omega_power_check(s)


# Lefschetz ---------------------------------------------------------------------


def test_lefschetz_t3_examples():
    s = structure("t3")
    assert lefschetz_map(s, KForm.constant(3, 1)) == e(3, 0, 1, 2)
    assert lefschetz_map(s, s.eta) == s.omega


def test_lefschetz_kt_s1_example():
    s = structure("kt_s1")
    expected = wedge(wedge(e(5, 0, 3) + e(5, 1, 2), e(5, 4)), e(5, 0))
    assert lefschetz_map(s, e(5, 0)) == expected == e(5, 0, 1, 2, 4) * -1


def test_lefschetz_degree_range():
    with pytest.raises(ValueError):
        lefschetz_map(structure("t3"), e(3, 0, 1))


@pytest.mark.parametrize("name", ["t3", "t5"])
def test_cokahler_lefschetz_is_isomorphism(name):
    assert all(r.is_isomorphism for r in lefschetz_ranks(structure(name)))


def test_kt_s1_lefschetz_fails_in_degree_one():
    res = lefschetz_ranks(structure("kt_s1"))
    assert [(r.rank, r.is_isomorphism) for r in res] == [(1, True), (3, False), (6, False)]
    L = structure("kt_s1").model
    k1 = res[1].kernel
    assert len(k1) == 1 and k1[0].certified(L)
    assert k1[0].form == e(5, 0)
    assert ce_d(L, e(5, 2, 3, 4)) == k1[0].image
    assert all(k.certified(L) for k in res[2].kernel)


def test_lefschetz_needs_k_cosymplectic():
    with pytest.raises(ValueError):
        lefschetz_ranks(structure("sol3"))


@pytest.mark.parametrize("name", ["t3", "t5", "kt_s1"])
def test_lefschetz_anticommutes_with_d(name):
    assert lefschetz_anticommutes(structure(name))


# report ------------------------------------------------------------------------


def test_report_kt_s1():
    rep = cohomology_report(structure("kt_s1"))
    assert rep.betti == (1, 4, 7, 7, 4, 1)
    assert rep.basic_betti == (1, 3, 4, 3, 1)
    assert rep.splitting_ok and rep.recursion_ok and rep.pairing_nondegenerate and rep.omega_powers_nontrivial
    assert not rep.invariant_cohomology_only


def test_report_non_nilpotent_is_flagged():
    rep = cohomology_report(structure("sol3"))
    assert rep.invariant_cohomology_only
    assert rep.lefschetz == ()
    assert any("not K-cosymplectic" in n for n in rep.notes)


@pytest.mark.parametrize("name, s", corpus())
def test_report_invariants_on_corpus(name, s):
    rep = cohomology_report(s)
    b, bb = rep.betti, rep.basic_betti
    if rep.splitting_ok:
        assert all(b[p] == bb[p] + (bb[p - 1] if p else 0) for p in range(len(bb))) and b[-1] == bb[-1]
    if rep.pairing_nondegenerate:
        assert bb == bb[::-1]
    assert "K-cosymplectic" in classify(s).flags
