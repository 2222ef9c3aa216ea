"""JSON model files.

Indices in files are 1-based; rationals are strings such as ``"-3/4"``.
A minimal file::

    {"name": "T3", "dim": 3, "brackets": [],
     "eta": {"3": "1"}, "omega": {"12": "1"}}

Optional keys: ``xi``, ``phi`` and ``g`` (square matrices of rational
strings, ``phi`` by columns-act-on-vectors convention), ``declarations`` and
``provenance`` (a list of strings describing how the file was produced).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import jsonschema

from . import linalg
from .acms import ACMStructure, CosymplecticPair, reeb_field, structure_from_pair
from .exterior import Endo, KForm, Vector
from .liealg import LieModel, Metric, check_jacobi

RATIONAL = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"
_INDEX = r"^[1-9][0-9]*$"

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "dim", "brackets", "eta", "omega"],
    "properties": {
        "name": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["i", "j", "coeffs"],
                "properties": {
                    "i": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 1},
                    "coeffs": {
                        "type": "object",
                        "propertyNames": {"pattern": _INDEX},
                        "additionalProperties": {"type": "string", "pattern": RATIONAL},
                    },
                },
            },
        },
        "eta": {
            "type": "object",
            "propertyNames": {"pattern": _INDEX},
            "additionalProperties": {"type": "string", "pattern": RATIONAL},
        },
        "omega": {
            "type": "object",
            "propertyNames": {"pattern": r"^([1-9][1-9]|[1-9][0-9]*,[1-9][0-9]*)$"},
            "additionalProperties": {"type": "string", "pattern": RATIONAL},
        },
        "xi": {
            "type": "object",
            "propertyNames": {"pattern": _INDEX},
            "additionalProperties": {"type": "string", "pattern": RATIONAL},
        },
        "phi": {"$ref": "#/definitions/matrix"},
        "g": {"$ref": "#/definitions/matrix"},
        "declarations": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rationally_independent": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "string"}},
                }
            },
        },
        "provenance": {"type": "array", "items": {"type": "string"}},
    },
    "definitions": {
        "matrix": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string", "pattern": RATIONAL}},
        }
    },
}


class ModelError(ValueError):
    """A model file is malformed; ``location`` names the offending field."""

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")

    def as_dict(self) -> Dict[str, str]:
        return {"location": self.location, "message": self.message}


@dataclass(frozen=True)
class ModelData:
    name: str
    model: LieModel
    eta: KForm
    omega: KForm
    xi: Optional[Vector] = None
    phi: Optional[Endo] = None
    g: Optional[Metric] = None
    declarations: Dict[str, List[List[str]]] = field(default_factory=dict)
    provenance: Tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return self.model.dim

    def pair(self) -> CosymplecticPair:
        return CosymplecticPair(self.model, self.eta, self.omega)

    def reeb(self) -> Vector:
        if self.xi is not None:
            return self.xi
        return reeb_field(self.model, self.eta, self.omega)

    def structure(self) -> Optional[ACMStructure]:
        """The almost contact metric structure, when a metric is present."""
        if self.g is None:
            return None
        if self.phi is None:
            return structure_from_pair(self.pair(), self.g)
        return ACMStructure(self.model, self.eta, self.reeb(), self.phi, self.g, self.omega)


def _frac(s: str) -> Fraction:
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _omega_key(key: str, dim: int) -> Tuple[int, int]:
    if "," in key:
        a, b = key.split(",")
    else:
        a, b = key[0], key[1]
    return int(a), int(b)


def _path_of(err: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in err.absolute_path]
    return "/".join(parts) if parts else "(root)"


def model_from_dict(doc: dict) -> ModelData:
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ModelError(_path_of(e), e.message)
    n = doc["dim"]
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for pos, entry in enumerate(doc["brackets"]):
        i, j = entry["i"], entry["j"]
        if not (1 <= i < j <= n):
            raise ModelError(f"brackets/{pos}", f"need 1 <= i < j <= dim, got i={i}, j={j}")
        if (i - 1, j - 1) in brackets:
            raise ModelError(f"brackets/{pos}", f"duplicate bracket [{i},{j}]")
        coeffs = {}
        for k, c in entry["coeffs"].items():
            if not 1 <= int(k) <= n:
                raise ModelError(f"brackets/{pos}/coeffs/{k}", f"index out of range 1..{n}")
            coeffs[int(k) - 1] = _frac(c)
        brackets[(i - 1, j - 1)] = coeffs
    model = LieModel(n, brackets, doc["name"])
    ok, triple = check_jacobi(model)
    if not ok:
        raise ModelError("brackets", f"Jacobi identity fails on basis triple {triple}")

    def vector(key: str) -> List[Fraction]:
        out = [Fraction(0)] * n
        for i, c in doc[key].items():
            if not 1 <= int(i) <= n:
                raise ModelError(f"{key}/{i}", f"index out of range 1..{n}")
            out[int(i) - 1] = _frac(c)
        return out

    eta = KForm.one_form(vector("eta"))
    om = {}
    for key, c in doc["omega"].items():
        a, b = _omega_key(key, n)
        if not (1 <= a < b <= n):
            raise ModelError(f"omega/{key}", f"need 1 <= i < j <= dim, got {a},{b}")
        om[(a - 1, b - 1)] = _frac(c)
    omega = KForm(n, 2, om)
    xi = Vector(vector("xi")) if "xi" in doc else None

    def square(key: str) -> Optional[linalg.Matrix]:
        if key not in doc:
            return None
        m = [[_frac(x) for x in row] for row in doc[key]]
        if len(m) != n or any(len(r) != n for r in m):
            raise ModelError(key, f"expected a {n}x{n} matrix")
        return m

    phi = square("phi")
    gm = square("g")
    try:
        g = Metric(gm) if gm is not None else None
    except ValueError as exc:
        raise ModelError("g", str(exc)) from None
    decl = dict(doc.get("declarations", {}))
    return ModelData(
        doc["name"],
        model,
        eta,
        omega,
        xi,
        Endo(phi) if phi is not None else None,
        g,
        decl,
        tuple(doc.get("provenance", [])),
    )


def parse_model(path: Union[str, Path]) -> ModelData:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return model_from_dict(doc)


def model_to_dict(m: ModelData) -> dict:
    n = m.dim
    brackets = [
        {"i": i + 1, "j": j + 1, "coeffs": {str(k + 1): format_rational(c) for k, c in row.items()}}
        for (i, j), row in sorted(m.model.brackets.items())
    ]

    def sparse(vec) -> Dict[str, str]:
        return {str(i + 1): format_rational(c) for i, c in enumerate(vec) if c}

    sep = "" if n < 10 else ","
    doc = {
        "name": m.name,
        "dim": n,
        "brackets": brackets,
        "eta": sparse(m.eta.to_vector()),
        "omega": {f"{i + 1}{sep}{j + 1}": format_rational(c) for (i, j), c in m.omega.coeffs.items()},
    }
    if m.xi is not None:
        doc["xi"] = sparse(list(m.xi))
    if m.phi is not None:
        doc["phi"] = [[format_rational(x) for x in row] for row in m.phi.rows()]
    if m.g is not None:
        doc["g"] = [[format_rational(x) for x in row] for row in m.g.rows()]
    if m.declarations:
        doc["declarations"] = m.declarations
    if m.provenance:
        doc["provenance"] = list(m.provenance)
    return doc


def emit_model(m: ModelData) -> str:
    return json.dumps(model_to_dict(m), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def model_from_structure(
    name: str,
    s: Union[ACMStructure, CosymplecticPair],
    declarations: Optional[dict] = None,
    provenance: Tuple[str, ...] = (),
) -> ModelData:
    if isinstance(s, ACMStructure):
        return ModelData(name, s.model, s.eta, s.omega, s.xi, s.phi, s.g, declarations or {}, provenance)
    return ModelData(name, s.model, s.eta, s.omega, s.xi, None, None, declarations or {}, provenance)


_RAT = re.compile(RATIONAL)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT.match(text):
        raise ValueError(f"not a rational number: {text!r}")
    return Fraction(text)
