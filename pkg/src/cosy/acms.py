"""Almost contact metric structures on Lie-algebra models.

An :class:`ACMStructure` bundles ``(eta, xi, phi, g)`` over a
:class:`~cosy.liealg.LieModel`. Its Kahler form follows the rule
``omega(X, Y) = g(X, phi Y)``; with the column convention for endomorphisms
this is the matrix identity ``Omega = G Phi``.

Everything is exact except :func:`adapted_structure`, which needs a matrix
square root and therefore runs in floating point (numpy).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .exterior import Endo, KForm, Vector, outer, pullback, wedge, wedge_power
from .liealg import (
    LieModel,
    Metric,
    NTable,
    ce_d,
    is_killing,
    killing_violation,
    levi_civita,
    lie_derivative,
    nijenhuis,
)

COSYMPLECTIC = "cosymplectic"
CONTACT_METRIC = "contact-metric"
NORMAL = "normal"
COKAHLER = "coKähler"
SASAKIAN = "Sasakian"
K_COSYMPLECTIC = "K-cosymplectic"
FLAG_ORDER = (COSYMPLECTIC, CONTACT_METRIC, NORMAL, COKAHLER, SASAKIAN, K_COSYMPLECTIC)


class InvalidStructure(ValueError):
    """The tensors do not satisfy the almost contact metric axioms."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def kahler_form(phi: Endo, g: Metric) -> KForm:
    """``omega(e_i, e_j) = g(e_i, phi e_j)`` read off the upper triangle."""
    m = linalg.matmul(g.rows(), phi.rows())
    n = len(m)
    return KForm(n, 2, {(i, j): m[i][j] for i in range(n) for j in range(i + 1, n)})


@dataclass(frozen=True)
class ACMStructure:
    model: LieModel
    eta: KForm
    xi: Vector
    phi: Endo
    g: Metric
    cached_omega: Optional[KForm] = None

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def n(self) -> int:
        return (self.model.dim - 1) // 2

    @property
    def omega(self) -> KForm:
        if self.cached_omega is not None:
            return self.cached_omega
        return kahler_form(self.phi, self.g)

    def with_omega(self) -> "ACMStructure":
        """Copy whose cached Kahler form is filled in from ``g`` and ``phi``."""
        return ACMStructure(self.model, self.eta, self.xi, self.phi, self.g, kahler_form(self.phi, self.g))

    def change_basis(self, p: linalg.Matrix) -> "ACMStructure":
        """The same structure written in the basis ``f_j = sum_i p[i][j] e_i``."""
        pinv = linalg.inverse(p)
        phi = linalg.matmul(pinv, linalg.matmul(self.phi.rows(), p))
        g = linalg.matmul(linalg.transpose(p), linalg.matmul(self.g.rows(), p))
        omega = pullback(self.cached_omega, p) if self.cached_omega is not None else None
        return ACMStructure(
            self.model.change_basis(p),
            pullback(self.eta, p),
            Vector(linalg.matvec(pinv, list(self.xi))),
            Endo(phi),
            Metric(g),
            omega,
        )

    def pair(self) -> "CosymplecticPair":
        return CosymplecticPair(self.model, self.eta, self.omega)


def _first_nonzero(m: linalg.Matrix) -> Optional[Tuple[int, int]]:
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if x:
                return i, j
    return None


def validate(s: ACMStructure) -> List[str]:
    """Violated axioms as readable messages; an empty list means valid."""
    n = s.dim
    out: List[str] = []
    if s.eta.degree != 1 or s.eta.dim != n or s.xi.dim != n or s.phi.dim != n or s.g.dim != n:
        return [f"tensor dimensions do not match the model dimension {n}"]
    if n % 2 == 0:
        out.append(f"dimension {n} is even")
    ex = s.eta(s.xi)
    if ex != 1:
        out.append(f"eta(xi) = {ex}, expected 1")
    phi2 = (s.phi @ s.phi).rows()
    target = (Endo.identity(n) * -1 + outer(s.eta, s.xi)).rows()
    diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(phi2, target)]
    bad = _first_nonzero(diff)
    if bad is not None:
        i, j = bad
        out.append(f"phi^2 != -Id + eta(x)xi at entry ({i + 1},{j + 1})")
    e = [Vector.basis(n, i) for i in range(n)]
    pe = [s.phi(v) for v in e]
    for i in range(n):
        for j in range(i, n):
            lhs = s.g(pe[i], pe[j])
            rhs = s.g(e[i], e[j]) - s.eta(e[i]) * s.eta(e[j])
            if lhs != rhs:
                out.append(f"g(phi e{i + 1}, phi e{j + 1}) = {lhs} but g(e{i + 1}, e{j + 1}) - eta eta = {rhs}")
                break
        else:
            continue
        break
    gp = linalg.matmul(s.g.rows(), s.phi.rows())
    asym = [[gp[i][j] + gp[j][i] for j in range(n)] for i in range(n)]
    bad = _first_nonzero(asym)
    if bad is not None:
        out.append(f"g(X, phi Y) is not antisymmetric at ({bad[0] + 1},{bad[1] + 1})")
    derived = kahler_form(s.phi, s.g)
    if s.cached_omega is not None and s.cached_omega != derived:
        out.append(f"cached omega {s.cached_omega} differs from g(., phi .) = {derived}")
    if n % 2 == 1 and wedge(s.eta, wedge_power(derived, s.n)).is_zero():
        out.append("eta ^ omega^n vanishes")
    return out


def is_valid(s: ACMStructure) -> bool:
    return not validate(s)


def reeb_field(model: LieModel, eta: KForm, omega: KForm) -> Vector:
    """The unique ``xi`` with ``iota_xi omega = 0`` and ``eta(xi) = 1``."""
    n = model.dim
    om = omega.to_matrix()
    # rows: (iota_xi omega)(e_j) = sum_i xi_i omega_ij, then eta(xi)
    a = [[om[i][j] for i in range(n)] for j in range(n)] + [eta.to_vector()]
    b = [Fraction(0)] * n + [Fraction(1)]
    if linalg.rank(a) < n:
        raise ValueError("eta ^ omega^n is degenerate: the Reeb field is not unique")
    x = linalg.solve(a, b)
    if x is None:
        raise ValueError("no vector satisfies iota_xi omega = 0 and eta(xi) = 1")
    return Vector(x)


@dataclass(frozen=True)
class CosymplecticPair:
    """Metric-free cosymplectic data: closed ``eta``, closed ``omega``, volume ``eta ^ omega^n``."""

    model: LieModel
    eta: KForm
    omega: KForm
    xi: Vector = field(init=False)

    def __post_init__(self):
        problems = pair_violations(self.model, self.eta, self.omega)
        if problems:
            raise ValueError("; ".join(problems))
        object.__setattr__(self, "xi", reeb_field(self.model, self.eta, self.omega))

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def n(self) -> int:
        return (self.model.dim - 1) // 2

    def volume(self) -> KForm:
        return wedge(self.eta, wedge_power(self.omega, self.n))


def pair_violations(model: LieModel, eta: KForm, omega: KForm) -> List[str]:
    out = []
    if model.dim % 2 == 0:
        out.append(f"dimension {model.dim} is even")
        return out
    if eta.degree != 1 or omega.degree != 2 or eta.dim != model.dim or omega.dim != model.dim:
        return [f"eta must be a 1-form and omega a 2-form on dimension {model.dim}"]
    if not ce_d(model, eta).is_zero():
        out.append(f"d eta = {ce_d(model, eta)} is not zero")
    if not ce_d(model, omega).is_zero():
        out.append(f"d omega = {ce_d(model, omega)} is not zero")
    if wedge(eta, wedge_power(omega, (model.dim - 1) // 2)).is_zero():
        out.append("eta ^ omega^n vanishes")
    return out


@dataclass(frozen=True)
class NTensors:
    """``n1[(i, j)]`` is a vector, ``n2[(i, j)]`` a scalar, ``n3`` an endomorphism, ``n4`` a 1-form."""

    n1: NTable
    n2: Dict[Tuple[int, int], Fraction]
    n3: Endo
    n4: KForm

    def n1_zero(self) -> bool:
        return all(v.is_zero() for v in self.n1.values())

    def n2_zero(self) -> bool:
        return not any(self.n2.values())

    def n3_zero(self) -> bool:
        return self.n3.is_zero()

    def n4_zero(self) -> bool:
        return self.n4.is_zero()

    def all_zero(self) -> bool:
        return self.n1_zero() and self.n2_zero() and self.n3_zero() and self.n4_zero()


def n_tensors(s: ACMStructure) -> NTensors:
    L = s.model
    n = L.dim
    e = [Vector.basis(n, i) for i in range(n)]
    deta = ce_d(L, s.eta)
    nphi = nijenhuis(L, s.phi)
    n1 = {(i, j): v + s.xi * deta(e[i], e[j]) for (i, j), v in nphi.items()}
    pe = [s.phi(v) for v in e]
    n2 = {}
    for i in range(n):
        for j in range(i + 1, n):
            # (L_{phi X} eta)(Y) = -eta([phi X, Y]) for invariant data
            n2[(i, j)] = -s.eta(L.bracket(pe[i], e[j])) + s.eta(L.bracket(pe[j], e[i]))
    n3 = lie_derivative(L, s.xi, s.phi)
    n4 = lie_derivative(L, s.xi, s.eta)
    return NTensors(n1, n2, n3, n4)


@dataclass(frozen=True)
class ClassificationReport:
    flags: FrozenSet[str]
    n_tensors: NTensors
    witnesses: Dict[str, str]

    def sorted_flags(self) -> List[str]:
        return [f for f in FLAG_ORDER if f in self.flags]


def _first_vector_entry(table: NTable) -> Optional[Tuple[Tuple[int, int], Vector]]:
    for key, v in sorted(table.items()):
        if not v.is_zero():
            return key, v
    return None


def classify(s: ACMStructure) -> ClassificationReport:
    problems = validate(s)
    if problems:
        raise InvalidStructure(problems)
    L = s.model
    omega = s.omega
    deta = ce_d(L, s.eta)
    domega = ce_d(L, omega)
    nt = n_tensors(s)
    flags = set()
    why: Dict[str, str] = {}

    if deta.is_zero() and domega.is_zero():
        flags.add(COSYMPLECTIC)
    else:
        why[COSYMPLECTIC] = f"d eta = {deta}" if not deta.is_zero() else f"d omega = {domega}"

    if omega == deta:
        flags.add(CONTACT_METRIC)
    else:
        why[CONTACT_METRIC] = f"omega - d eta = {omega - deta}"

    hit = _first_vector_entry(nt.n1)
    if hit is None:
        flags.add(NORMAL)
    else:
        (i, j), v = hit
        why[NORMAL] = f"N1(e{i + 1}, e{j + 1}) = {v}"

    if COSYMPLECTIC in flags and NORMAL in flags:
        flags.add(COKAHLER)
    else:
        why[COKAHLER] = why.get(COSYMPLECTIC) or why[NORMAL]

    if CONTACT_METRIC in flags and NORMAL in flags:
        flags.add(SASAKIAN)
    else:
        why[SASAKIAN] = why.get(CONTACT_METRIC) or why[NORMAL]

    if COSYMPLECTIC in flags and nt.n3_zero():
        flags.add(K_COSYMPLECTIC)
    elif COSYMPLECTIC not in flags:
        why[K_COSYMPLECTIC] = why[COSYMPLECTIC]
    else:
        j = next(j for j in range(L.dim) if not nt.n3.column(j).is_zero())
        why[K_COSYMPLECTIC] = f"N3(e{j + 1}) = (L_xi phi)(e{j + 1}) = {nt.n3.column(j)}"

    return ClassificationReport(frozenset(flags), nt, why)


def nabla_xi(s: ACMStructure) -> Endo:
    """``X -> nabla_X xi`` for the Levi-Civita connection of ``g``."""
    return levi_civita(s.model, s.g).nabla_vector(s.xi)


def reeb_identity_residual(s: ACMStructure) -> Endo:
    """``nabla xi + (1/2) phi o N3``; zero on cosymplectic structures."""
    nt = n_tensors(s)
    return nabla_xi(s) + (s.phi @ nt.n3) * Fraction(1, 2)


def nabla_eta(s: ACMStructure) -> linalg.Matrix:
    """Entries ``(nabla_{e_i} eta)(e_j) = -eta(nabla_{e_i} e_j)``."""
    conn = levi_civita(s.model, s.g)
    n = s.dim
    return [[-s.eta(conn.gamma[i][j]) for j in range(n)] for i in range(n)]


# products with a circle ---------------------------------------------------


def almost_kahler_violations(model: LieModel, tau: KForm, h: Metric, j: Endo) -> List[str]:
    n = model.dim
    out = []
    if n % 2:
        out.append(f"dimension {n} is odd")
    if (j @ j) != Endo.identity(n) * -1:
        out.append("J^2 != -Id")
    hj = linalg.matmul(h.rows(), j.rows())
    if hj != tau.to_matrix():
        out.append("h(X, JY) != tau(X, Y)")
    if not ce_d(model, tau).is_zero():
        out.append(f"d tau = {ce_d(model, tau)} is not zero")
    return out


def product_with_circle(model: LieModel, tau: KForm, h: Metric, j: Endo, label: str = "") -> ACMStructure:
    """``K x S^1`` with ``eta = e^{2n+1}``, ``phi = J + 0`` and ``g = h + 1``."""
    problems = almost_kahler_violations(model, tau, h, j)
    if problems:
        raise ValueError("almost Kahler data rejected: " + "; ".join(problems))
    n = model.dim
    m = model.extend_central(label)
    phi = [list(r) + [Fraction(0)] for r in j.rows()] + [[Fraction(0)] * (n + 1)]
    g = [list(r) + [Fraction(0)] for r in h.rows()] + [[Fraction(0)] * n + [Fraction(1)]]
    s = ACMStructure(m, KForm.basis(n + 1, n), Vector.basis(n + 1, n), Endo(phi), Metric(g))
    return s.with_omega()


def structure_from_pair(pair: CosymplecticPair, g: Metric) -> ACMStructure:
    """Recover ``phi`` from ``omega = g(., phi .)`` when ``g`` is already adapted."""
    phi = linalg.matmul(linalg.inverse(g.rows()), pair.omega.to_matrix())
    return ACMStructure(pair.model, pair.eta, pair.xi, Endo(phi), g, pair.omega)


# adapted metrics (floating point) -----------------------------------------


def _to_float(m) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=float)


@dataclass
class AdaptedStructure:
    """Floating-point almost contact metric structure with its audit trail."""

    eta: np.ndarray
    xi: np.ndarray
    phi: np.ndarray
    g: np.ndarray
    omega: np.ndarray
    gtilde: np.ndarray
    a: np.ndarray
    b: np.ndarray
    residuals: Dict[str, float]
    tol: float

    def passes(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    def k_cosymplectic(self) -> bool:
        return self.residuals["n3"] < self.tol


def gtilde_matrix(pair: CosymplecticPair, gbar: Metric) -> linalg.Matrix:
    """``gbar / c - gbar(xi, .) (x) gbar(xi, .) / c^2 + eta (x) eta`` with ``c = gbar(xi, xi)``."""
    n = pair.dim
    gb = gbar.rows()
    xi = list(pair.xi)
    c = gbar(pair.xi, pair.xi)
    v = linalg.matvec(gb, xi)
    eta = pair.eta.to_vector()
    return [[gb[i][j] / c - v[i] * v[j] / (c * c) + eta[i] * eta[j] for j in range(n)] for i in range(n)]


def adapted_structure(pair: CosymplecticPair, gbar: Metric, tol: float = 1e-9) -> AdaptedStructure:
    """Adapted metric and ``phi`` from a Killing metric via a polar decomposition."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    L = pair.model
    if not is_killing(L, gbar, pair.xi):
        bad = killing_violation(L, gbar, pair.xi)
        raise ValueError(f"xi is not Killing for gbar (entry {bad})")
    n = pair.dim
    gt = _to_float(gtilde_matrix(pair, gbar))
    om = _to_float(pair.omega.to_matrix())
    eta = np.array([float(x) for x in pair.eta.to_vector()])
    xi = np.array([float(x) for x in pair.xi])
    # omega(X, Y) = gtilde(AX, Y)
    a = -np.linalg.solve(gt, om)
    chol = np.linalg.cholesky(gt)
    lt = chol.T
    lt_inv = np.linalg.inv(lt)
    a_hat = lt @ a @ lt_inv
    w, v = np.linalg.eigh(a_hat.T @ a_hat)
    if not np.all(np.isfinite(w)):
        raise ArithmeticError("square root did not converge")
    scale = max(1.0, float(np.max(np.abs(w))))
    zero = np.abs(w) <= tol * scale
    if int(zero.sum()) != 1:
        raise ValueError(f"B has {int(zero.sum())} zero eigenvalues on dimension {n}; omega is degenerate on ker eta")
    w = np.where(zero, 0.0, np.clip(w, 0.0, None))
    root = np.sqrt(w)
    b_hat = (v * root) @ v.T
    inv_root = np.where(zero, 0.0, 1.0 / np.where(zero, 1.0, root))
    b_hat_pinv = (v * inv_root) @ v.T
    b = lt_inv @ b_hat @ lt
    b_pinv = lt_inv @ b_hat_pinv @ lt
    phi_polar = a @ b_pinv
    g = b.T @ gt + np.outer(eta, eta)
    g = (g + g.T) / 2
    # omega(X, Y) = g(X, phi Y) flips the sign of the polar factor
    phi = -phi_polar
    ad_xi = _to_float(L.ad(pair.xi).rows())
    a_adj = np.linalg.solve(gt, a.T @ gt)
    residuals = {
        "eta_xi": abs(float(eta @ xi) - 1.0),
        "phi_squared": float(np.max(np.abs(phi @ phi + np.eye(n) - np.outer(xi, eta)))),
        "compatibility": float(np.max(np.abs(phi.T @ g @ phi - g + np.outer(eta, eta)))),
        "kahler": float(np.max(np.abs(om - g @ phi))),
        "n3": float(np.max(np.abs(ad_xi @ phi - phi @ ad_xi))),
        "polar": float(np.max(np.abs(b @ b - a_adj @ a))),
        "positive": 0.0 if float(np.min(np.linalg.eigvalsh(g))) > 0 else 1.0,
    }
    return AdaptedStructure(eta, xi, phi, g, om, gt, a, b, residuals, tol)


# mapping tori --------------------------------------------------------------


@dataclass(frozen=True)
class TorusOrder:
    order: Optional[int]
    regularity: str
    certificate: str

    @property
    def finite(self) -> bool:
        return self.order is not None

    def describe(self) -> str:
        if self.order is None:
            return "infinite (irregular characteristic foliation)"
        return f"order {self.order} (quasi-regular characteristic foliation)"


def _int_matrix(a: Sequence[Sequence]) -> List[List[int]]:
    out = []
    for row in a:
        r = []
        for x in row:
            f = Fraction(x) if not isinstance(x, float) else None
            if f is None or f.denominator != 1:
                raise ValueError(f"entry {x!r} is not an integer")
            r.append(int(f))
        out.append(r)
    if any(len(r) != len(out) for r in out):
        raise ValueError("matrix must be square")
    return out


def _imatmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _ipow(a, k):
    n = len(a)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = a
    while k:
        if k & 1:
            result = _imatmul(result, base)
        base = _imatmul(base, base)
        k >>= 1
    return result


def _is_identity(a) -> bool:
    return all(x == (i == j) for i, row in enumerate(a) for j, x in enumerate(row))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _smallest_order(a, bound: int) -> Optional[int]:
    """Least divisor ``k`` of ``bound`` with ``a^k = Id``."""
    if not _is_identity(_ipow(a, bound)):
        return None
    return min(k for k in range(1, bound + 1) if bound % k == 0 and _is_identity(_ipow(a, k)))


def mapping_torus_order(a: Sequence[Sequence]) -> TorusOrder:
    """Order of an integer monodromy matrix, with a certificate for the verdict."""
    m = _int_matrix(a)
    d = len(m)
    det = int(linalg.det(linalg.matrix(m)))
    if abs(det) != 1:
        raise ValueError(f"|det A| = {abs(det)}, expected 1")
    if d == 2:
        return _order_2x2(m, det)
    return _order_general(m)


def _order_2x2(m, det) -> TorusOrder:
    tr = m[0][0] + m[1][1]
    if det == 1:
        if abs(tr) > 2:
            return TorusOrder(None, "irregular", f"|trace| = {abs(tr)} > 2: hyperbolic, eigenvalues off the unit circle")
        candidates = {2: 1, -2: 2, 1: 6, 0: 4, -1: 3}
        k = candidates[tr]
        if _is_identity(_ipow(m, k)):
            order = _smallest_order(m, k)
            return TorusOrder(order, "quasi-regular", f"trace {tr}, A^{order} = Id")
        return TorusOrder(None, "irregular", f"trace {tr} but A^{k} != Id: nontrivial unipotent part")
    if tr != 0:
        return TorusOrder(None, "irregular", f"det -1 and trace {tr}: real eigenvalue of modulus != 1")
    order = _smallest_order(m, 2)
    return TorusOrder(order, "quasi-regular", f"det -1, trace 0, A^{order} = Id")


def _order_general(m) -> TorusOrder:
    import sympy

    x = sympy.Symbol("x")
    cp = sympy.Poly(sympy.Matrix(m).charpoly(x).as_expr(), x)
    _, factors = sympy.factor_list(cp.as_expr(), x)
    d = len(m)
    bound = 1
    for f, _mult in factors:
        fp = sympy.Poly(f, x)
        deg = fp.degree()
        coeffs = [sympy.Rational(c) for c in fp.monic().all_coeffs()]
        match = None
        # Euler phi(k) >= sqrt(k / 2), so a degree-deg cyclotomic factor has k <= 2 deg^2
        for k in range(1, 2 * max(deg, 1) ** 2 + 1):
            if sympy.Poly(sympy.cyclotomic_poly(k, x), x).all_coeffs() == coeffs:
                match = k
                break
        if match is None:
            return TorusOrder(None, "irregular", f"characteristic factor {fp.as_expr()} is not cyclotomic")
        bound = _lcm(bound, match)
    if _is_identity(_ipow(m, bound)):
        order = _smallest_order(m, bound)
        return TorusOrder(order, "quasi-regular", f"cyclotomic characteristic polynomial, A^{order} = Id (dim {d})")
    return TorusOrder(None, "irregular", f"roots of unity of order dividing {bound} but A^{bound} != Id: not semisimple")
