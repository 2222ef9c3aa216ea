"""Command line entry point ``cosy``.

Exit codes: 0 when every check passes, 1 on input errors, 2 when a
verification fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, Optional, Sequence

from . import __version__
from .acms import mapping_torus_order
from .cohomology import omega_power_check
from .deform import DeformationError, DeformationStep, apply_chain, verify_preservation
from .acms import ACMStructure, is_valid
from .exterior import KForm, Vector
from .liealg import JacobiError, Metric
from .modelfile import ModelError, emit_model, model_from_structure, parse_model
from .orbits import registry
from .report import (
    adapted_section,
    check_report,
    cohomology_section,
    dumps,
    orbit_section,
    rat,
    render_text,
    vec,
)
from .torusham import (
    TorusData,
    classify_field,
    format_trig,
    hamiltonian_field,
    poisson,
    poisson_via_omega,
)
from .trigparse import ParseError, parse_field, parse_int_list, parse_matrix, parse_trig, parse_vector

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


class InputError(Exception):
    pass


def _emit(report: Dict[str, Any], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(render_text(report) + "\n")


def _seed(args) -> int:
    env = os.environ.get("COSY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"COSY_SEED must be an integer, got {env!r}") from None
    return args.seed


def _load(path: str):
    try:
        return parse_model(path)
    except FileNotFoundError:
        raise InputError(f"no such model file: {path}") from None


def _torus(md) -> TorusData:
    if not md.model.is_abelian():
        raise InputError("field and poisson commands need an abelian (flat torus) model")
    try:
        return TorusData(md.eta, md.omega)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"degenerate torus data: {exc}") from None


# subcommands -----------------------------------------------------------------


def cmd_check(args) -> int:
    md = _load(args.model)
    report, ok = check_report(md, seed=_seed(args))
    report["status"] = "pass" if ok else "fail"
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cohomology(args) -> int:
    md = _load(args.model)
    report, ok = cohomology_section(md, basic=args.basic or args.lefschetz, lefschetz=args.lefschetz)
    report["model"] = md.name
    report["status"] = "pass" if ok else "fail"
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_deform(args) -> int:
    md = _load(args.model)
    if not args.steps:
        raise InputError("give at least one --type1 theta=... or --type2 beta=... step")
    steps = []
    for kind, text in args.steps:
        key, _, value = text.partition("=")
        want = "theta" if kind == "type1" else "beta"
        if key != want or not value:
            raise InputError(f"--{kind} expects {want}=<comma-separated rationals>, got {text!r}")
        coords = parse_vector(value)
        if len(coords) != md.dim:
            raise InputError(f"{want} needs {md.dim} entries, got {len(coords)}")
        if kind == "type1":
            steps.append(DeformationStep("type1", theta=Vector(coords)))
        else:
            steps.append(DeformationStep("type2", beta=KForm.one_form(coords)))
    start = md.structure()
    if start is not None and not is_valid(start):
        raise InputError("the model's almost contact metric structure is not valid")
    if start is None:
        start = md.pair()
    ok = True
    audit = []
    current = start
    for step in steps:
        if step.kind == "type1" and isinstance(current, ACMStructure):
            pres = verify_preservation(current, step.theta)
            ok &= pres.ok
            audit.append(
                f"{step.describe()}: flags {', '.join(pres.after) or 'none'}; "
                f"preserved {all(pres.preserved.values())}; omega formula {pres.omega_matches}"
            )
        current, _ = apply_chain(current, [step])
        if step.kind != "type1" or not isinstance(current, ACMStructure):
            audit.append(f"{step.describe()}: Reeb field {','.join(vec(current.xi))}")
    out = model_from_structure(
        md.name + " (deformed)",
        current,
        md.declarations,
        tuple(md.provenance) + tuple(audit),
    )
    text = emit_model(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit({"output": args.output, "audit": audit, "status": "pass" if ok else "fail"}, args.format)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_adapted(args) -> int:
    md = _load(args.model)
    try:
        gbar = Metric(parse_matrix(args.gbar))
    except ValueError as exc:
        raise InputError(f"--gbar: {exc}") from None
    if gbar.dim != md.dim:
        raise InputError(f"--gbar must be {md.dim}x{md.dim}")
    report, ok = adapted_section(md, gbar, args.tol)
    report["status"] = "pass" if ok else "fail"
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_field(args) -> int:
    md = _load(args.model)
    p = _torus(md)
    x = parse_field(args.classify, p.m)
    fc = classify_field(p, x)
    report = {
        "field": repr(x),
        "class": fc.kind,
        "hamiltonian": fc.hamiltonian,
        "cosymplectic": fc.cosymplectic,
        "weakly_hamiltonian": fc.weakly_hamiltonian,
        "weakly_cosymplectic": fc.weakly_cosymplectic,
        "h": format_trig(fc.h) if fc.h is not None else None,
        "f": format_trig(fc.f) if fc.f is not None else None,
        "status": "pass",
    }
    _emit(report, args.format)
    return EXIT_OK


def cmd_poisson(args) -> int:
    md = _load(args.model)
    p = _torus(md)
    f = parse_trig(args.f, p.m)
    g = parse_trig(args.g, p.m)
    a = poisson(p, f, g)
    b = poisson_via_omega(p, f, g)
    ok = a == b
    report = {
        "f": format_trig(f),
        "g": format_trig(g),
        "X_f": repr(hamiltonian_field(p, f)),
        "bracket": format_trig(a),
        "minus_omega_Xf_Xg": format_trig(b),
        "agree": ok,
        "status": "pass" if ok else "fail",
    }
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_orbits(args) -> int:
    if args.registry:
        rows = []
        ok = True
        for space in registry():
            entry = {"name": space.name, "betti": list(space.betti), "source": space.source}
            if len(space.betti) % 2 == 0 and len(space.betti) >= 4:
                sec = orbit_section(list(space.betti))
                entry.update({k: sec[k] for k in ("basic_betti", "closed_orbit_count", "cpn_cohomology", "lower_bound")})
                if space.closed_orbit_count is not None:
                    ok &= sec["closed_orbit_count"] == space.closed_orbit_count
            rows.append(entry)
        _emit({"registry": rows, "status": "pass" if ok else "fail"}, args.format)
        return EXIT_OK if ok else EXIT_FAIL
    if args.betti:
        b = parse_int_list(args.betti)
        if len(b) < 4 or len(b) % 2:
            raise InputError("--betti needs an even-length list b0..b_{2n+1} with n >= 1")
        report = orbit_section(b)
    elif args.model:
        md = _load(args.model)
        from .cohomology import betti

        b = betti(md.model)
        s = md.structure()
        ring = omega_power_check(s) if s is not None and is_valid(s) else None
        report = orbit_section(b, ring)
        report["model"] = md.name
    else:
        raise InputError("give --betti <list>, a model file, or --registry")
    ok = "invalid" not in report
    report["status"] = "pass" if ok else "fail"
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_torus_order(args) -> int:
    m = parse_matrix(args.matrix)
    try:
        res = mapping_torus_order(m)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {
        "matrix": [[rat(x) for x in row] for row in m],
        "order": res.order if res.order is not None else "infinite",
        "regularity": res.regularity,
        "verdict": res.describe(),
        "certificate": res.certificate,
        "status": "pass",
    }
    if args.format == "json":
        _emit(report, "json")
    else:
        sys.stdout.write(res.describe() + "\n" + f"certificate: {res.certificate}\n")
    return EXIT_OK


# parser ----------------------------------------------------------------------


class _StepAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, self.dest) or []
        steps.append((self.const, values))
        setattr(namespace, self.dest, steps)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (COSY_SEED overrides)")

    parser = argparse.ArgumentParser(prog="cosy", description="Exact cosymplectic geometry on Lie-algebra models.", parents=[common])
    parser.add_argument("--version", action="version", version=f"cosy {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate and classify a structure")
    p.add_argument("model")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cohomology", parents=[common], help="Betti, basic Betti and Lefschetz data")
    p.add_argument("model")
    p.add_argument("--basic", action="store_true")
    p.add_argument("--lefschetz", action="store_true")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("deform", parents=[common], help="apply type I / type II deformations in order")
    p.add_argument("model")
    p.add_argument("--type1", dest="steps", action=_StepAction, const="type1", metavar="theta=V")
    p.add_argument("--type2", dest="steps", action=_StepAction, const="type2", metavar="beta=V")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_deform, steps=None)

    p = sub.add_parser("adapted", parents=[common], help="adapted metric from a Killing metric")
    p.add_argument("model")
    p.add_argument("--gbar", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_adapted)

    p = sub.add_parser("field", parents=[common], help="classify a vector field on a flat torus")
    p.add_argument("model")
    p.add_argument("--classify", required=True, metavar="FIELD")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("poisson", parents=[common], help="Poisson bracket of two trig polynomials")
    p.add_argument("model")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("orbits", parents=[common], help="closed Reeb orbit counts from Betti data")
    p.add_argument("model", nargs="?")
    p.add_argument("--betti")
    p.add_argument("--registry", action="store_true")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("torus-order", parents=[common], help="order of a mapping-torus monodromy")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_torus_order)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ModelError as exc:
        sys.stderr.write(f"model error at {exc.location}: {exc.message}\n")
        return EXIT_INPUT
    except (InputError, ParseError, DeformationError, JacobiError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
