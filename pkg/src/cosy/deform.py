"""Type I and type II deformations of cosymplectic structures.

Type I moves the Reeb field to ``xi + theta`` and rescales the rest so the
structure stays almost contact metric. Type II adds a closed basic 1-form to
``eta`` and keeps ``omega`` and the Reeb field.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from . import linalg
from .acms import (
    COKAHLER,
    COSYMPLECTIC,
    K_COSYMPLECTIC,
    ACMStructure,
    CosymplecticPair,
    classify,
    kahler_form,
    validate,
)
from .exterior import Endo, KForm, Vector, contract, outer, wedge
from .liealg import Metric, ce_d, lie_derivative, lie_derivative_bilinear

PRESERVED_FLAGS = (COSYMPLECTIC, K_COSYMPLECTIC, COKAHLER)


class DeformationError(ValueError):
    """Deformation parameters fail an admissibility condition."""


@dataclass(frozen=True)
class TypeIParams:
    theta: Vector


@dataclass(frozen=True)
class TypeIIParams:
    beta: KForm


def type1_violations(s: Union[ACMStructure, CosymplecticPair], theta: Vector) -> List[str]:
    """Failed admissibility conditions for ``theta`` (metric condition only when ``g`` is present)."""
    L = s.model
    out = []
    if theta.dim != L.dim:
        return [f"theta has dimension {theta.dim}, model has {L.dim}"]
    c = 1 + s.eta(theta)
    if not c > 0:
        out.append(f"1 + eta(theta) = {c} is not positive")
    br = L.bracket(s.xi, theta)
    if not br.is_zero():
        out.append(f"[xi, theta] = {br} is not zero")
    if isinstance(s, ACMStructure):
        lg = lie_derivative_bilinear(L, theta, s.g.rows())
        if any(any(r) for r in lg):
            out.append("L_theta g is not zero")
    lw = lie_derivative(L, theta, s.omega)
    if not lw.is_zero():
        out.append(f"L_theta omega = {lw} is not zero")
    return out


def _check_type1(s, theta: Vector) -> Fraction:
    problems = type1_violations(s, theta)
    if problems:
        raise DeformationError("; ".join(problems))
    return 1 + s.eta(theta)


def deformed_kahler_form(s: Union[ACMStructure, CosymplecticPair], theta: Vector) -> KForm:
    """``(omega + iota_theta omega ^ eta') / eta(xi')`` with ``eta' = eta / eta(xi')``."""
    c = 1 + s.eta(theta)
    eta1 = s.eta / c
    return (s.omega + wedge(contract(theta, s.omega), eta1)) / c


def deform_type1(s: ACMStructure, p: Union[TypeIParams, Vector]) -> ACMStructure:
    theta = p.theta if isinstance(p, TypeIParams) else p
    c = _check_type1(s, theta)
    n = s.dim
    eta1 = s.eta / c
    xi1 = s.xi + theta
    proj = Endo.identity(n) - outer(eta1, xi1)
    phi1 = s.phi @ proj
    pr = proj.rows()
    gp = linalg.matmul(linalg.transpose(pr), linalg.matmul(s.g.rows(), pr))
    ev = eta1.to_vector()
    g1 = [[gp[i][j] / c + ev[i] * ev[j] for j in range(n)] for i in range(n)]
    g1 = Metric(g1)
    return ACMStructure(s.model, eta1, xi1, phi1, g1, kahler_form(phi1, g1))


def deform_type1_pair(pair: CosymplecticPair, p: Union[TypeIParams, Vector]) -> CosymplecticPair:
    """Type I on metric-free data: only ``eta`` and ``omega`` are transported."""
    theta = p.theta if isinstance(p, TypeIParams) else p
    c = _check_type1(pair, theta)
    out = CosymplecticPair(pair.model, pair.eta / c, deformed_kahler_form(pair, theta))
    if out.xi != pair.xi + theta:
        raise ArithmeticError(f"deformed Reeb field {out.xi} differs from xi + theta")
    return out


def type2_violations(pair: Union[ACMStructure, CosymplecticPair], beta: KForm) -> List[str]:
    out = []
    if beta.degree != 1 or beta.dim != pair.model.dim:
        return [f"beta must be a 1-form on dimension {pair.model.dim}"]
    db = ce_d(pair.model, beta)
    if not db.is_zero():
        out.append(f"d beta = {db} is not zero")
    ib = beta(pair.xi)
    if ib != 0:
        out.append(f"iota_xi beta = {ib} is not zero")
    return out


def deform_type2(pair: Union[CosymplecticPair, ACMStructure], p: Union[TypeIIParams, KForm]) -> CosymplecticPair:
    beta = p.beta if isinstance(p, TypeIIParams) else p
    problems = type2_violations(pair, beta)
    if problems:
        raise DeformationError("; ".join(problems))
    out = CosymplecticPair(pair.model, pair.eta + beta, pair.omega)
    if out.xi != pair.xi:
        raise ArithmeticError("type II deformation moved the Reeb field")
    return out


def admissible_directions(s: ACMStructure) -> List[Vector]:
    """Basis of the ``theta`` solving the linear admissibility conditions.

    ``1 + eta(theta) > 0`` is an open condition and is left to the caller.
    """
    L = s.model
    n = L.dim
    rows: List[List[Fraction]] = []
    e = [Vector.basis(n, i) for i in range(n)]
    cols = []
    for t in e:
        vec = list(L.bracket(s.xi, t))
        lg = lie_derivative_bilinear(L, t, s.g.rows())
        vec += [lg[i][j] for i in range(n) for j in range(i, n)]
        vec += lie_derivative(L, t, s.omega).to_vector()
        cols.append(vec)
    rows = linalg.columns(cols, len(cols[0]))
    return [Vector(v) for v in linalg.nullspace(rows, n)]


@dataclass(frozen=True)
class PreservationReport:
    before: Tuple[str, ...]
    after: Tuple[str, ...]
    preserved: Dict[str, bool]
    valid_after: bool
    omega_matches: bool
    lie_theta_eta_zero: bool

    @property
    def ok(self) -> bool:
        return self.valid_after and self.omega_matches and all(self.preserved.values())


def verify_preservation(s: ACMStructure, p: Union[TypeIParams, Vector]) -> PreservationReport:
    theta = p.theta if isinstance(p, TypeIParams) else p
    before = classify(s)
    d = deform_type1(s, theta)
    problems = validate(d)
    after = classify(d) if not problems else None
    after_flags = after.flags if after else frozenset()
    preserved = {f: f in after_flags for f in PRESERVED_FLAGS if f in before.flags}
    return PreservationReport(
        tuple(before.sorted_flags()),
        tuple(after.sorted_flags()) if after else (),
        preserved,
        not problems,
        kahler_form(d.phi, d.g) == deformed_kahler_form(s, theta),
        lie_derivative(s.model, theta, s.eta).is_zero(),
    )


# chains ------------------------------------------------------------------


@dataclass(frozen=True)
class DeformationStep:
    kind: str
    theta: Vector = None
    beta: KForm = None

    def describe(self) -> str:
        if self.kind == "type1":
            return "type I theta=" + ",".join(map(str, self.theta))
        return "type II beta=" + ",".join(map(str, self.beta.to_vector()))


def apply_chain(start: Union[ACMStructure, CosymplecticPair], steps: Sequence[DeformationStep]):
    """Apply steps in order; type I keeps the metric while it is available.

    Returns the final structure and a list of ``(step, flags-or-None)``.
    """
    current = start
    audit = []
    for step in steps:
        if step.kind == "type1":
            if isinstance(current, ACMStructure):
                current = deform_type1(current, step.theta)
                audit.append((step.describe(), tuple(classify(current).sorted_flags())))
            else:
                current = deform_type1_pair(current, step.theta)
                audit.append((step.describe(), None))
        elif step.kind == "type2":
            current = deform_type2(current, step.beta)
            audit.append((step.describe(), None))
        else:
            raise ValueError(f"unknown deformation kind {step.kind!r}")
    return current, audit
