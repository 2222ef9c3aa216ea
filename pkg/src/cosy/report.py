"""Report assembly and rendering.

Reports are plain dicts of strings, ints, bools, lists and dicts, so they can
be written as JSON with sorted keys or rendered as indented text. Rationals
are written as strings.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from . import linalg
from .acms import (
    COSYMPLECTIC,
    K_COSYMPLECTIC,
    ACMStructure,
    adapted_structure,
    classify,
    is_valid,
    nabla_eta,
    nabla_xi,
    pair_violations,
    reeb_identity_residual,
    validate,
)
from .cohomology import (
    CohomologyReport,
    basic_betti_checks,
    basic_betti_from_betti,
    betti,
    cohomology_report,
    omega_power_check,
    pairing_check,
    splitting_dims_ok,
    verify_splitting,
    basic_betti,
)
from .exterior import KForm
from .liealg import Metric, is_killing, is_nilpotent
from .modelfile import ModelData
from .orbits import HYPOTHESIS, orbit_verdict

SEED_DEFAULT = 0


def rat(x) -> str:
    return str(Fraction(x))


def vec(v) -> List[str]:
    return [rat(x) for x in v]


def form_text(a: KForm) -> str:
    if a.is_zero():
        return "0"
    sep = "" if a.dim < 10 else ","
    parts = []
    for idx, c in a.coeffs.items():
        name = "e^" + sep.join(str(i + 1) for i in idx) if idx else "1"
        parts.append(f"{rat(c)}*{name}")
    return " + ".join(parts).replace("+ -", "- ")


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(report: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(report, dict):
        for key in sorted(report):
            val = report[key]
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(report)}")
    return "\n".join(line for line in lines if line != "")


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    return str(v)


def model_flags(md: ModelData) -> Dict[str, bool]:
    return {
        "invariant_cohomology_only": not is_nilpotent(md.model),
        "lattice_unverified": not md.model.is_abelian(),
        "density_by_declaration": bool(md.declarations.get("rationally_independent")),
    }


def random_basis_change(rng: random.Random, n: int) -> linalg.Matrix:
    while True:
        p = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            p[i][i] += 3
        if linalg.det(p) != 0:
            return p


# check ---------------------------------------------------------------------


def check_report(md: ModelData, seed: int = SEED_DEFAULT, trials: int = 3) -> Tuple[Dict[str, Any], bool]:
    out: Dict[str, Any] = {
        "model": {"name": md.name, "dim": md.dim, "nilpotent": is_nilpotent(md.model)},
        "flags": model_flags(md),
    }
    ok = True
    s = md.structure()
    if s is None:
        problems = pair_violations(md.model, md.eta, md.omega)
        out["cosymplectic_pair"] = {"violations": problems}
        if not problems:
            pair = md.pair()
            out["cosymplectic_pair"]["reeb_field"] = vec(pair.xi)
            if md.xi is not None and md.xi != pair.xi:
                out["cosymplectic_pair"]["violations"].append("declared xi is not the Reeb field")
        out["note"] = "no metric in the model file: only the cosymplectic pair is checked"
        return out, not out["cosymplectic_pair"]["violations"]

    problems = validate(s)
    out["validation"] = {"violations": problems}
    if problems:
        return out, False
    c = classify(s)
    nt = c.n_tensors
    out["classification"] = {
        "flags": c.sorted_flags(),
        "witnesses": dict(sorted(c.witnesses.items())),
        "n_tensors_zero": {"N1": nt.n1_zero(), "N2": nt.n2_zero(), "N3": nt.n3_zero(), "N4": nt.n4_zero()},
        "N1_nonzero": {
            f"e{i + 1},e{j + 1}": vec(v) for (i, j), v in sorted(nt.n1.items()) if not v.is_zero()
        },
    }
    ids: Dict[str, Any] = {"eta_is_g_dual_of_xi": md.g.flat(s.xi) == s.eta}
    ok &= ids["eta_is_g_dual_of_xi"]
    if COSYMPLECTIC in c.flags:
        ids["N2_zero"] = nt.n2_zero()
        ids["N4_zero"] = nt.n4_zero()
        ids["nabla_xi_plus_half_phi_N3_zero"] = reeb_identity_residual(s).is_zero()
        ok &= ids["N2_zero"] and ids["N4_zero"] and ids["nabla_xi_plus_half_phi_N3_zero"]
    if K_COSYMPLECTIC in c.flags:
        ids["nabla_xi_zero"] = nabla_xi(s).is_zero()
        ids["nabla_eta_zero"] = not any(any(r) for r in nabla_eta(s))
        ids["xi_killing"] = is_killing(s.model, s.g, s.xi)
        ok &= ids["nabla_xi_zero"] and ids["nabla_eta_zero"] and ids["xi_killing"]
    if "normal" in c.flags:
        ids["normal_implies_all_N_zero"] = nt.all_zero()
        ok &= ids["normal_implies_all_N_zero"]
    out["identities"] = ids
    rng = random.Random(seed)
    same = True
    for _ in range(trials):
        p = random_basis_change(rng, md.dim)
        moved = s.change_basis(p)
        if not is_valid(moved) or classify(moved).flags != c.flags:
            same = False
    out["basis_change_invariance"] = {"seed": seed, "trials": trials, "flags_unchanged": same}
    ok &= same
    return out, bool(ok)


# cohomology ----------------------------------------------------------------


def lefschetz_section(rep: CohomologyReport, s: ACMStructure) -> Tuple[List[Dict[str, Any]], bool]:
    out = []
    ok = True
    for r in rep.lefschetz:
        entry = {
            "degree": r.degree,
            "target_degree": s.dim - r.degree,
            "rank": r.rank,
            "source_dim": len(r.source),
            "is_isomorphism": r.is_isomorphism,
            "verdict": "isomorphism" if r.is_isomorphism else "not an isomorphism",
            "matrix": [[rat(x) for x in row] for row in r.matrix],
        }
        kernel = []
        for k in r.kernel:
            cert = k.certified(s.model)
            ok &= cert
            kernel.append(
                {
                    "class": form_text(k.form),
                    "image": form_text(k.image),
                    "primitive": form_text(k.primitive),
                    "image_is_d_of_primitive": cert,
                }
            )
        entry["kernel"] = kernel
        out.append(entry)
    return out, ok


def cohomology_section(md: ModelData, basic: bool = True, lefschetz: bool = False) -> Tuple[Dict[str, Any], bool]:
    L = md.model
    out: Dict[str, Any] = {"flags": model_flags(md)}
    b = betti(L)
    out["betti"] = b
    ok = True
    if not (basic or lefschetz):
        return out, ok
    problems = pair_violations(L, md.eta, md.omega)
    if problems:
        out["basic"] = {"skipped": "; ".join(problems)}
        return out, ok
    xi = md.reeb()
    bb = basic_betti(L, xi, md.eta)
    rec = basic_betti_from_betti(b)
    sec = {
        "basic_betti": bb,
        "recursion": list(rec.values),
        "recursion_ok": rec.ok and list(rec.values) == bb,
        "recursion_note": rec.reason,
        "checks": basic_betti_checks(bb),
        "horizontal_splitting_dims": splitting_dims_ok(L, xi),
        "splitting_ok": verify_splitting(L, xi, md.eta),
        "pairing_nondegenerate": pairing_check(L, xi, md.eta),
    }
    s = md.structure()
    k_cosymp = False
    if s is not None and is_valid(s):
        sec["omega_powers_nontrivial"] = omega_power_check(s)
        k_cosymp = K_COSYMPLECTIC in classify(s).flags
    sec["k_cosymplectic"] = k_cosymp
    if k_cosymp:
        for key in ("recursion_ok", "splitting_ok", "pairing_nondegenerate", "omega_powers_nontrivial"):
            ok &= bool(sec[key])
        ok &= all(sec["checks"].values()) and sec["horizontal_splitting_dims"]
    out["basic"] = sec
    if lefschetz:
        if s is None or not k_cosymp:
            out["lefschetz"] = {"skipped": "needs a K-cosymplectic structure with a metric"}
        else:
            rep = cohomology_report(s, with_lefschetz=True)
            entries, lok = lefschetz_section(rep, s)
            ok &= lok
            out["lefschetz"] = {
                "degrees": entries,
                "isomorphism_in_all_degrees": all(e["is_isomorphism"] for e in entries),
            }
    return out, bool(ok)


# adapted -------------------------------------------------------------------


def adapted_section(md: ModelData, gbar: Metric, tol: float) -> Tuple[Dict[str, Any], bool]:
    res = adapted_structure(md.pair(), gbar, tol)

    def mat(a) -> List[List[float]]:
        return [[float(round(x, 15)) + 0.0 for x in row] for row in a]

    out = {
        "phi": mat(res.phi),
        "g": mat(res.g),
        "gtilde": mat(res.gtilde),
        "B": mat(res.b),
        "residuals": {k: float(f"{v:.3e}") for k, v in sorted(res.residuals.items())},
        "tol": tol,
        "passes": res.passes(),
        "k_cosymplectic": res.k_cosymplectic(),
    }
    return out, res.passes() and res.k_cosymplectic()


# orbits --------------------------------------------------------------------


def orbit_section(b: List[int], model_ring_check: Optional[bool] = None) -> Dict[str, Any]:
    v = orbit_verdict(b)
    out = {
        "betti": list(b),
        "basic_betti": list(v.basic_betti),
        "closed_orbit_count": v.count,
        "lower_bound": v.lower_bound,
        "meets_lower_bound": v.meets_bound,
        "cpn_cohomology": v.cpn_like,
        "hypothesis": HYPOTHESIS,
    }
    if v.reason:
        out["invalid"] = v.reason
    if model_ring_check is None:
        out["ring_structure"] = "not checked: Betti data only"
    else:
        out["ring_structure"] = "omega powers nontrivial" if model_ring_check else "omega powers vanish"
    return out
