"""Reading trig polynomials, fields, vectors and matrices from CLI strings.

Grammar for functions (Python expression syntax, parsed with :mod:`ast`)::

    expr  := term (('+' | '-') term)*
    term  := factor (('*' | '/') factor)*      # division only by constants
    factor:= number | 'sin(' lin ')' | 'cos(' lin ')' | '(' expr ')' | factor '**' int
    lin   := integer combination of x1 .. xm, e.g. x1-2*x2

Examples: ``sin(x1)``, ``2/3*cos(x1-2*x2)``, ``sin(x1)*cos(x3) + 1``.
A vector field is ``;``-separated components: ``0; -cos(x1); 0``.
"""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Dict, List, Sequence

from .linalg import Matrix
from .modelfile import parse_rational
from .torusham import TrigField, TrigPoly

_VAR = re.compile(r"^x([1-9][0-9]*)$")


class ParseError(ValueError):
    pass


def _linear(node, m: int) -> Dict[int, Fraction]:
    """Integer linear form in ``x1..xm`` as ``{index: coefficient}``."""
    if isinstance(node, ast.Name):
        hit = _VAR.match(node.id)
        if not hit or not 1 <= int(hit.group(1)) <= m:
            raise ParseError(f"unknown variable {node.id!r} (expected x1..x{m})")
        return {int(hit.group(1)) - 1: Fraction(1)}
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return {-1: Fraction(node.value)}
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _linear(node.operand, m)
        return {k: -v for k, v in inner.items()} if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub)):
        a, b = _linear(node.left, m), _linear(node.right, m)
        sign = 1 if isinstance(node.op, ast.Add) else -1
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, Fraction(0)) + sign * v
        return out
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
        a, b = _linear(node.left, m), _linear(node.right, m)
        if set(a) == {-1}:
            return {k: a[-1] * v for k, v in b.items()}
        if set(b) == {-1}:
            return {k: b[-1] * v for k, v in a.items()}
        raise ParseError("trig arguments must be linear in x1..xm")
    raise ParseError(f"unsupported syntax in a trig argument: {ast.dump(node)}")


def _freq(node, m: int) -> List[int]:
    lin = _linear(node, m)
    if lin.get(-1, 0):
        raise ParseError("trig arguments may not have a constant phase")
    k = [lin.get(i, Fraction(0)) for i in range(m)]
    if any(x.denominator != 1 for x in k):
        raise ParseError("frequencies must be integers")
    return [int(x) for x in k]


def _eval(node, m: int) -> TrigPoly:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed, got {node.value!r}")
        return TrigPoly.constant(m, node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, m)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Add):
            return _eval(node.left, m) + _eval(node.right, m)
        if isinstance(node.op, ast.Sub):
            return _eval(node.left, m) - _eval(node.right, m)
        if isinstance(node.op, ast.Mult):
            return _eval(node.left, m) * _eval(node.right, m)
        if isinstance(node.op, ast.Div):
            den = _eval(node.right, m)
            if set(k for k, _ in den.terms) - {(0,) * m}:
                raise ParseError("division is only allowed by constants")
            c = den.constant_part()
            if c == 0:
                raise ParseError("division by zero")
            return _eval(node.left, m) / c
        if isinstance(node.op, ast.Pow):
            e = node.right
            if not (isinstance(e, ast.Constant) and isinstance(e.value, int) and 0 <= e.value <= 8):
                raise ParseError("exponents must be integers between 0 and 8")
            base = _eval(node.left, m)
            out = TrigPoly.constant(m, 1)
            for _ in range(e.value):
                out = out * base
            return out
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in ("sin", "cos"):
        if len(node.args) != 1 or node.keywords:
            raise ParseError(f"{node.func.id} takes one argument")
        k = _freq(node.args[0], m)
        return TrigPoly.sin(k) if node.func.id == "sin" else TrigPoly.cos(k)
    if isinstance(node, ast.Name):
        raise ParseError(f"bare variable {node.id!r}: only sin(...) and cos(...) of variables are trig polynomials")
    raise ParseError(f"unsupported syntax: {ast.dump(node)}")


def parse_trig(text: str, m: int) -> TrigPoly:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree.body, m)


def parse_field(text: str, m: int) -> TrigField:
    parts = [p for p in text.split(";")]
    if len(parts) != m:
        raise ParseError(f"expected {m} ';'-separated components, got {len(parts)}")
    return TrigField([parse_trig(p, m) for p in parts])


def parse_vector(text: str) -> List[Fraction]:
    try:
        return [parse_rational(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_matrix(text: str) -> Matrix:
    """``a,b;c,d`` or a flat list whose length is a perfect square."""
    try:
        if ";" in text:
            rows = [[parse_rational(x) for x in r.split(",")] for r in text.split(";")]
        else:
            flat = [parse_rational(x) for x in text.split(",")]
            n = int(round(len(flat) ** 0.5))
            if n * n != len(flat):
                raise ParseError(f"{len(flat)} entries do not form a square matrix")
            rows = [flat[i * n:(i + 1) * n] for i in range(n)]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square")
    return rows


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def format_vector(v: Sequence[Fraction]) -> str:
    return ",".join(str(Fraction(x)) for x in v)
