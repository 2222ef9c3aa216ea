"""Hamiltonian calculus on flat tori with trigonometric-polynomial coefficients.

Functions live on ``R^m / (2 pi Z)^m`` and are finite sums of
``cos(k.x)`` and ``sin(k.x)`` with integer frequency vectors ``k``, so every
derivative keeps rational coefficients. The cosymplectic data ``(eta, omega)``
is constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import cos, sin
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .acms import reeb_field
from .exterior import KForm, Vector, _sort_sign
from .liealg import LieModel
from .linalg import to_fraction

COS, SIN = "c", "s"
Freq = Tuple[int, ...]
Key = Tuple[Freq, str]


def _canonical(k: Freq, phase: str, c: Fraction) -> Optional[Tuple[Key, Fraction]]:
    first = next((x for x in k if x), 0)
    if first == 0:
        return (((0,) * len(k), COS), c) if phase == COS else None
    if first < 0:
        k = tuple(-x for x in k)
        if phase == SIN:
            c = -c
    return (k, phase), c


class TrigPoly:
    """``sum c * cos(k.x)`` and ``sum c * sin(k.x)`` over integer vectors ``k``."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Iterable = ()):
        store: Dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (k, phase), c in items:
            k = tuple(int(x) for x in k)
            if len(k) != m:
                raise ValueError(f"frequency {k} does not have length {m}")
            if phase not in (COS, SIN):
                raise ValueError(f"unknown phase {phase!r}")
            hit = _canonical(k, phase, to_fraction(c))
            if hit is None:
                continue
            key, c = hit
            store[key] = store.get(key, Fraction(0)) + c
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "terms", {k: v for k, v in sorted(store.items()) if v})

    def __setattr__(self, key, value):
        raise AttributeError("TrigPoly is immutable")

    @classmethod
    def zero(cls, m: int) -> "TrigPoly":
        return cls(m)

    @classmethod
    def constant(cls, m: int, c) -> "TrigPoly":
        return cls(m, {((0,) * m, COS): c})

    @classmethod
    def cos(cls, k: Sequence[int], c=1) -> "TrigPoly":
        return cls(len(k), {(tuple(k), COS): c})

    @classmethod
    def sin(cls, k: Sequence[int], c=1) -> "TrigPoly":
        return cls(len(k), {(tuple(k), SIN): c})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self) -> Fraction:
        return self.terms.get(((0,) * self.m, COS), Fraction(0))

    def frequencies(self) -> List[Freq]:
        return sorted({k for k, _ in self.terms})

    def __add__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.m, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return TrigPoly(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.m, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.m, other)
        return self + (-other)

    def __rsub__(self, other) -> "TrigPoly":
        return (-self) + other

    def __mul__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            c = to_fraction(other)
            return TrigPoly(self.m, {k: c * v for k, v in self.terms.items()})
        return _product(self, other)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "TrigPoly":
        return self * (1 / to_fraction(c))

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            try:
                other = TrigPoly.constant(self.m, other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, tuple(self.terms.items())))

    def diff(self, j: int) -> "TrigPoly":
        """Partial derivative along ``x_j`` (0-based)."""
        out = []
        for (k, phase), c in self.terms.items():
            if not k[j]:
                continue
            if phase == COS:
                out.append(((k, SIN), -k[j] * c))
            else:
                out.append(((k, COS), k[j] * c))
        return TrigPoly(self.m, out)

    def __call__(self, x: Sequence[float]) -> float:
        total = 0.0
        for (k, phase), c in self.terms.items():
            t = sum(a * b for a, b in zip(k, x))
            total += float(c) * (cos(t) if phase == COS else sin(t))
        return total

    def __repr__(self):
        return f"TrigPoly({format_trig(self)})"


def _product(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    if a.m != b.m:
        raise ValueError(f"dimension mismatch: {a.m} vs {b.m}")
    out: List[Tuple[Key, Fraction]] = []
    half = Fraction(1, 2)
    for (k1, p1), c1 in a.terms.items():
        for (k2, p2), c2 in b.terms.items():
            c = c1 * c2 * half
            plus = tuple(x + y for x, y in zip(k1, k2))
            minus = tuple(x - y for x, y in zip(k1, k2))
            if p1 == COS and p2 == COS:
                out += [((minus, COS), c), ((plus, COS), c)]
            elif p1 == SIN and p2 == SIN:
                out += [((minus, COS), c), ((plus, COS), -c)]
            elif p1 == SIN:
                out += [((plus, SIN), c), ((minus, SIN), c)]
            else:
                out += [((plus, SIN), c), ((minus, SIN), -c)]
    return TrigPoly(a.m, out)


def format_trig(f: TrigPoly) -> str:
    """Human-readable literal that the CLI grammar reads back."""
    if f.is_zero():
        return "0"
    parts = []
    for (k, phase), c in f.terms.items():
        if not any(k):
            parts.append(str(c))
            continue
        arg = ""
        for i, x in enumerate(k):
            if not x:
                continue
            sign = "-" if x < 0 else ("+" if arg else "")
            mag = abs(x)
            arg += f"{sign}{'' if mag == 1 else str(mag) + '*'}x{i + 1}"
        name = "cos" if phase == COS else "sin"
        parts.append(f"{c}*{name}({arg})" if c != 1 else f"{name}({arg})")
    return " + ".join(parts).replace("+ -", "- ")


class TrigForm:
    """A ``p``-form ``sum f_I dx_I`` with trig-polynomial coefficients."""

    __slots__ = ("m", "degree", "coeffs")

    def __init__(self, m: int, degree: int, coeffs: Mapping[Sequence[int], TrigPoly] = ()):
        store: Dict[Tuple[int, ...], TrigPoly] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for idx, f in items:
            sign, key = _sort_sign(tuple(idx))
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if sign == 0 or f.is_zero():
                continue
            store[key] = store.get(key, TrigPoly.zero(m)) + (f if sign > 0 else -f)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(store.items()) if not v.is_zero()})

    def __setattr__(self, key, value):
        raise AttributeError("TrigForm is immutable")

    @classmethod
    def from_function(cls, f: TrigPoly) -> "TrigForm":
        return cls(f.m, 0, {(): f})

    @classmethod
    def from_constant(cls, a: KForm) -> "TrigForm":
        return cls(a.dim, a.degree, {I: TrigPoly.constant(a.dim, c) for I, c in a.coeffs.items()})

    def __getitem__(self, idx) -> TrigPoly:
        if isinstance(idx, int):
            idx = (idx,)
        sign, key = _sort_sign(tuple(idx))
        f = self.coeffs.get(key, TrigPoly.zero(self.m))
        return f if sign >= 0 else -f

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TrigForm") -> "TrigForm":
        if self.degree != other.degree or self.m != other.m:
            raise ValueError("cannot add forms of different degree or dimension")
        return TrigForm(self.m, self.degree, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> "TrigForm":
        return TrigForm(self.m, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TrigForm") -> "TrigForm":
        return self + (-other)

    def scale(self, f) -> "TrigForm":
        return TrigForm(self.m, self.degree, {k: v * f for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, TrigForm)
            and (self.m, self.degree) == (other.m, other.degree)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.m, self.degree, tuple(self.coeffs.items())))

    def constant_part(self) -> KForm:
        return KForm(self.m, self.degree, {I: f.constant_part() for I, f in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return f"TrigForm(0, deg={self.degree})"
        parts = [f"({format_trig(f)})*dx{''.join(str(i + 1) for i in I)}" for I, f in self.coeffs.items()]
        return "TrigForm(" + " + ".join(parts) + ")"


class TrigField:
    """A vector field ``sum X_j d/dx_j`` with trig-polynomial components."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[TrigPoly]):
        object.__setattr__(self, "components", tuple(components))

    def __setattr__(self, key, value):
        raise AttributeError("TrigField is immutable")

    @classmethod
    def constant(cls, v: Sequence) -> "TrigField":
        m = len(v)
        return cls([TrigPoly.constant(m, c) for c in v])

    @classmethod
    def zero(cls, m: int) -> "TrigField":
        return cls([TrigPoly.zero(m)] * m)

    @property
    def m(self) -> int:
        return len(self.components)

    def __getitem__(self, j) -> TrigPoly:
        return self.components[j]

    def __add__(self, other: "TrigField") -> "TrigField":
        return TrigField([a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "TrigField":
        return TrigField([-a for a in self.components])

    def __sub__(self, other: "TrigField") -> "TrigField":
        return self + (-other)

    def scale(self, f) -> "TrigField":
        return TrigField([a * f for a in self.components])

    def __eq__(self, other):
        return isinstance(other, TrigField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __call__(self, f: TrigPoly) -> TrigPoly:
        """Directional derivative ``X(f)``."""
        out = TrigPoly.zero(f.m)
        for j, c in enumerate(self.components):
            if not c.is_zero():
                dj = f.diff(j)
                if not dj.is_zero():
                    out = out + c * dj
        return out

    def __repr__(self):
        parts = [f"({format_trig(c)})*d{j + 1}" for j, c in enumerate(self.components) if not c.is_zero()]
        return "TrigField(" + (" + ".join(parts) if parts else "0") + ")"


# calculus ------------------------------------------------------------------


def trig_d(a) -> TrigForm:
    """Exterior derivative of a function or form."""
    if isinstance(a, TrigPoly):
        a = TrigForm.from_function(a)
    out = []
    for I, f in a.coeffs.items():
        for j in range(a.m):
            dj = f.diff(j)
            if not dj.is_zero():
                out.append(((j,) + I, dj))
    return TrigForm(a.m, a.degree + 1, out)


def trig_wedge(a: TrigForm, b: TrigForm) -> TrigForm:
    out = []
    for I, f in a.coeffs.items():
        for J, g in b.coeffs.items():
            if set(I) & set(J):
                continue
            out.append((I + J, f * g))
    return TrigForm(a.m, a.degree + b.degree, out)


def trig_contract(x: TrigField, a: TrigForm) -> TrigForm:
    if a.degree == 0:
        return TrigForm(a.m, 0)
    out = []
    for I, f in a.coeffs.items():
        for pos, i in enumerate(I):
            if x[i].is_zero():
                continue
            term = x[i] * f
            out.append((I[:pos] + I[pos + 1:], term if pos % 2 == 0 else -term))
    return TrigForm(a.m, a.degree - 1, out)


def trig_bracket(x: TrigField, y: TrigField) -> TrigField:
    return TrigField([x(y[k]) - y(x[k]) for k in range(x.m)])


def trig_lie(x: TrigField, a: TrigForm) -> TrigForm:
    """Cartan formula ``d iota_X + iota_X d``."""
    inner = trig_contract(x, trig_d(a))
    if a.degree == 0:
        return inner
    return trig_d(trig_contract(x, a)) + inner


def form_value(a: TrigForm) -> TrigPoly:
    """The function underlying a 0-form."""
    if a.degree != 0:
        raise ValueError("not a 0-form")
    return a.coeffs.get((), TrigPoly.zero(a.m))


# cosymplectic data ---------------------------------------------------------


@dataclass(frozen=True)
class TorusData:
    """Constant ``(eta, omega)`` on ``T^m`` with its Reeb field."""

    eta: KForm
    omega: KForm
    xi: Vector = field(init=False)
    _m_inv: Tuple[Tuple[Fraction, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        m = self.eta.dim
        xi = reeb_field(LieModel.abelian(m), self.eta, self.omega)
        object.__setattr__(self, "xi", xi)
        om = self.omega.to_matrix()
        ev = self.eta.to_vector()
        # column i: iota_{e_i} omega + eta_i eta
        mat = [[om[i][j] + ev[i] * ev[j] for i in range(m)] for j in range(m)]
        inv = linalg.inverse(mat)
        object.__setattr__(self, "_m_inv", tuple(tuple(r) for r in inv))

    @classmethod
    def standard(cls, m: int) -> "TorusData":
        """``eta = dx_m`` and ``omega = dx_12 + dx_34 + ...``."""
        n = (m - 1) // 2
        omega = KForm(m, 2, {(2 * i, 2 * i + 1): 1 for i in range(n)})
        return cls(KForm.basis(m, m - 1), omega)

    @property
    def m(self) -> int:
        return self.eta.dim

    def eta_form(self) -> TrigForm:
        return TrigForm.from_constant(self.eta)

    def omega_form(self) -> TrigForm:
        return TrigForm.from_constant(self.omega)

    def xi_field(self) -> TrigField:
        return TrigField.constant(list(self.xi))

    def xi_of(self, f: TrigPoly) -> TrigPoly:
        return self.xi_field()(f)

    def eta_of(self, x: TrigField) -> TrigPoly:
        out = TrigPoly.zero(self.m)
        for j, c in enumerate(self.eta.to_vector()):
            if c:
                out = out + x[j] * c
        return out

    def omega_of(self, x: TrigField, y: TrigField) -> TrigPoly:
        return form_value(trig_contract(y, trig_contract(x, self.omega_form())))

    def field_from_covector(self, gamma: TrigForm) -> TrigField:
        """Solve ``iota_X omega + eta(X) eta = gamma`` coefficientwise."""
        comps = []
        for i in range(self.m):
            acc = TrigPoly.zero(self.m)
            for j in range(self.m):
                c = self._m_inv[i][j]
                if c:
                    acc = acc + gamma[j] * c
            comps.append(acc)
        return TrigField(comps)


def hamiltonian_field(p: TorusData, f: TrigPoly) -> TrigField:
    """The ``X`` with ``eta(X) = 0`` and ``iota_X omega = df - xi(f) eta``."""
    gamma = trig_d(f) - p.eta_form().scale(p.xi_of(f))
    return p.field_from_covector(gamma)


def poisson(p: TorusData, f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``{f, g} = X_f(g)``."""
    return hamiltonian_field(p, f)(g)


def poisson_via_omega(p: TorusData, f: TrigPoly, g: TrigPoly) -> TrigPoly:
    return -p.omega_of(hamiltonian_field(p, f), hamiltonian_field(p, g))


# solvers -------------------------------------------------------------------


def _mode_split(gamma: TrigForm) -> Dict[Freq, Dict[str, List[Fraction]]]:
    m = gamma.m
    modes: Dict[Freq, Dict[str, List[Fraction]]] = {}
    for (j,), f in gamma.coeffs.items():
        for (k, phase), c in f.terms.items():
            slot = modes.setdefault(k, {COS: [Fraction(0)] * m, SIN: [Fraction(0)] * m})
            slot[phase][j] += c
    return modes


def _proportional(vec: Sequence[Fraction], v: Sequence[Fraction]) -> Optional[Fraction]:
    """``t`` with ``vec = t * v`` (``v`` nonzero), or None."""
    j = next(i for i, x in enumerate(v) if x)
    t = vec[j] / v[j]
    if all(a == t * b for a, b in zip(vec, v)):
        return t
    return None


def solve_transverse_primitive(p: TorusData, gamma: TrigForm) -> Optional[TrigPoly]:
    """A function ``h`` with ``dh - xi(h) eta = gamma``, or None.

    Modes of ``h`` that the equation cannot see are set to zero.
    """
    if gamma.degree != 1:
        raise ValueError("need a 1-form")
    m = p.m
    eta = p.eta.to_vector()
    xi = list(p.xi)
    out = []
    for k, slot in _mode_split(gamma).items():
        c, s = slot[COS], slot[SIN]
        if not any(k):
            if any(c) or any(s):
                return None
            continue
        kx = sum(a * b for a, b in zip(k, xi))
        v = [k[j] - kx * eta[j] for j in range(m)]
        if not any(v):
            if any(c) or any(s):
                return None
            continue
        # mode a cos + b sin contributes (b cos - a sin) v
        b = _proportional(c, v)
        a = _proportional(s, v)
        if a is None or b is None:
            return None
        out += [((k, COS), -a), ((k, SIN), b)]
    h = TrigPoly(m, out)
    return h


def integrate_exact(beta: TrigForm) -> Optional[TrigPoly]:
    """``f`` with ``df = beta`` for a closed 1-form, using the zero-frequency test."""
    if beta.degree != 1:
        raise ValueError("need a 1-form")
    if not trig_d(beta).is_zero():
        return None
    if not beta.constant_part().is_zero():
        return None
    out = []
    for k, slot in _mode_split(beta).items():
        j = next(i for i, x in enumerate(k) if x)
        out += [((k, COS), -slot[SIN][j] / k[j]), ((k, SIN), slot[COS][j] / k[j])]
    f = TrigPoly(beta.m, out)
    if trig_d(f) != beta:
        return None
    return f


# classification -------------------------------------------------------------

HAMILTONIAN = "Hamiltonian"
COSYMPLECTIC_FIELD = "cosymplectic"
WEAKLY_HAMILTONIAN = "weakly-Hamiltonian"
WEAKLY_COSYMPLECTIC = "weakly-cosymplectic"
NONE = "none"


@dataclass(frozen=True)
class FieldClass:
    kind: str
    h: Optional[TrigPoly]
    f: Optional[TrigPoly]
    hamiltonian: bool
    cosymplectic: bool
    weakly_hamiltonian: bool
    weakly_cosymplectic: bool
    weak_f: Optional[TrigPoly] = None


def _horizontal(p: TorusData, a: TrigForm) -> TrigForm:
    """``a - eta ^ iota_xi a``."""
    return a - trig_wedge(p.eta_form(), trig_contract(p.xi_field(), a))


def cosymplectic_potential(p: TorusData, x: TrigField) -> Optional[TrigPoly]:
    """``h`` with ``L_X eta = 0`` and ``L_X omega = -dh ^ eta``, or None."""
    if not trig_lie(x, p.eta_form()).is_zero():
        return None
    r = trig_lie(x, p.omega_form())
    if r.is_zero():
        return TrigPoly.zero(p.m)
    if not _horizontal(p, r).is_zero():
        return None
    h = solve_transverse_primitive(p, trig_contract(p.xi_field(), r))
    if h is None:
        return None
    if trig_wedge(trig_d(h), p.eta_form()) != -r:
        return None
    return h


def classify_field(p: TorusData, x: TrigField) -> FieldClass:
    eta_x = p.eta_of(x)
    beta = trig_contract(x, p.omega_form())
    f = integrate_exact(beta) if eta_x.is_zero() else None
    h = cosymplectic_potential(p, x)
    cosymp = h is not None and h.is_zero()
    weak_f = solve_transverse_primitive(p, beta) if eta_x.is_zero() else None
    ham = f is not None
    weak_ham = weak_f is not None
    weak_cos = h is not None
    if ham:
        kind = HAMILTONIAN
    elif cosymp:
        kind = COSYMPLECTIC_FIELD
    elif weak_ham:
        kind = WEAKLY_HAMILTONIAN
    elif weak_cos:
        kind = WEAKLY_COSYMPLECTIC
    else:
        kind = NONE
    return FieldClass(kind, h, f, ham, cosymp, weak_ham, weak_cos, weak_f)


# identities ------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: Optional[bool]
    residual: str


def albert_identities(p: TorusData, z: TrigField, f: TrigPoly) -> List[IdentityCheck]:
    """Bracket identities for a weakly cosymplectic ``Z`` and a function ``f``."""
    hz = cosymplectic_potential(p, z)
    if hz is None:
        raise ValueError("Z is not weakly cosymplectic")
    xi = p.xi_field()
    xf = hamiltonian_field(p, f)
    out = []

    lhs = trig_bracket(xi, z)
    rhs = hamiltonian_field(p, hz)
    out.append(IdentityCheck("[xi,Z]=X_{h_Z}", lhs == rhs, repr(lhs - rhs)))

    lhs = trig_bracket(z, xf)
    rhs = hamiltonian_field(p, z(f))
    out.append(IdentityCheck("[Z,X_f]=X_{Z(f)}", lhs == rhs, repr(lhs - rhs)))

    # X_f is weakly cosymplectic with potential xi(f)
    hf = p.xi_of(f)
    br = trig_bracket(z, xf)
    target = -trig_wedge(trig_d(z(hf) - xf(hz)), p.eta_form())
    got = trig_lie(br, p.omega_form())
    out.append(IdentityCheck("h_[X,Y]=X(h_Y)-Y(h_X)", got == target, repr(got - target)))

    if hz.is_zero() and hf.is_zero():
        g = -p.omega_of(z, xf)
        rhs = hamiltonian_field(p, g)
        out.append(IdentityCheck("[X,Y]=X_{-omega(X,Y)}", br == rhs, repr(br - rhs)))
    else:
        out.append(IdentityCheck("[X,Y]=X_{-omega(X,Y)}", None, "skipped: needs two cosymplectic fields"))
    return out
