"""JSON configuration documents.

Rationals are written as JSON integers or strings "p/q" (or "p"); floats are
rejected. Copy and basis indices are 1-based in documents, matching e_1, e_2,
..., and 0-based inside the library. Subspaces are lists of spanning rows.

A document holds the swamp data (rank, degree, line_degree, genus, rho, sigma,
phi, s, optional split_degrees) plus optional run parameters: delta1, delta2,
delta2_range, n, flags, max_length, deform_flag, and the specialization blocks
parabolic, seshadri and level.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from math import comb
from typing import Any

from .flags import Subspace
from .level import (
    CompletedHom,
    CompletedHomDecomposition,
    make_completed_hom,
    make_decomposition,
    reconstruct_completed_hom,
)
from .parabolic import ParabolicStructure, make_parabolic
from .swamp import NumericFlag, SwampConfig, make_numeric_flag
from .tensor import DecorationForm, TensorRepSpec

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(Exception):
    """Malformed document: bad JSON, missing keys, wrong types, or floats."""


def parse_rational(x: Any, where: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL.match(x.strip()):
        try:
            return Fraction(x.strip())
        except ZeroDivisionError:
            raise ParseError(f"{where}: zero denominator in {x!r}") from None
    if isinstance(x, float):
        raise ParseError(f"{where}: floats are not accepted ({x!r}); write \"p/q\"")
    raise ParseError(f"{where}: expected an integer or a \"p/q\" string, got {x!r}")


def parse_int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    return x


def _list(x: Any, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list, got {type(x).__name__}")
    return x


def _get(doc: dict, key: str, where: str = "document"):
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    return doc[key]


def fmt(x: Fraction | int) -> str:
    return str(Fraction(x))


def parse_rows(x: Any, r: int, where: str) -> list[list[Fraction]]:
    rows = _list(x, where)
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{where}[{i}]")
        if len(row) != r:
            raise ParseError(f"{where}[{i}]: expected {r} entries")
        out.append([parse_rational(v, f"{where}[{i}]") for v in row])
    return out


def parse_subspace(x: Any, r: int, where: str) -> Subspace:
    return Subspace.span(parse_rows(x, r, where), r)


def parse_matrix(x: Any, n: int, where: str) -> list[list[Fraction]]:
    rows = parse_rows(x, n, where)
    if len(rows) != n:
        raise ParseError(f"{where}: expected a {n} x {n} matrix")
    return rows


def parse_spec(x: Any, r: int, where: str) -> TensorRepSpec:
    if not isinstance(x, dict):
        raise ParseError(f"{where}: expected an object with a, b, c")
    return TensorRepSpec(parse_int(_get(x, "a", where), where), parse_int(x.get("b", 1), where),
                         parse_int(x.get("c", 0), where), r)


def parse_form(x: Any, spec: TensorRepSpec, where: str) -> DecorationForm:
    coeffs = []
    for i, entry in enumerate(_list(x, where)):
        w = f"{where}[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{w}: expected an object with copy, index, value")
        copy = parse_int(entry.get("copy", 1), w) - 1
        idx = tuple(parse_int(v, w) - 1 for v in _list(entry.get("index", []), w))
        if not 0 <= copy < spec.b or len(idx) != spec.a or any(not 0 <= k < spec.base_dim for k in idx):
            raise ParseError(f"{w}: copy and index must be 1-based and fit a = {spec.a}, b = {spec.b}, "
                             f"dimension {spec.base_dim}")
        coeffs.append(((copy, idx), parse_rational(_get(entry, "value", w), w)))
    return DecorationForm.from_coefficients(spec, coeffs)


def parse_flag(x: Any, r: int, where: str) -> NumericFlag:
    if not isinstance(x, dict):
        raise ParseError(f"{where}: expected an object")
    degrees = [parse_int(v, where) for v in _list(_get(x, "degrees", where), where)]
    weights = [parse_rational(v, where) for v in _list(x.get("weights", [1] * len(degrees)), where)]
    generic = [parse_subspace(s, r, f"{where}.generic") for s in _list(_get(x, "generic", where), where)]
    x0 = x.get("x0")
    x0 = None if x0 is None else [parse_subspace(s, r, f"{where}.x0") for s in _list(x0, where)]
    return make_numeric_flag(r, degrees, weights, generic, x0)


def parse_config(doc: dict) -> SwampConfig:
    if not isinstance(doc, dict):
        raise ParseError("document: expected a JSON object")
    r = parse_int(_get(doc, "rank"), "rank")
    if r < 1:
        raise ParseError("rank: must be positive")
    rho = parse_spec(doc.get("rho", {"a": 0}), r, "rho")
    sigma = parse_spec(_get(doc, "sigma"), r, "sigma")
    phi = parse_form(doc["phi"], rho, "phi") if "phi" in doc else \
        DecorationForm.from_coefficients(rho, {(0, (0,) * rho.a): 1})
    s = parse_form(_get(doc, "s"), sigma, "s")
    split = doc.get("split_degrees")
    split = None if split is None else tuple(parse_int(v, "split_degrees") for v in _list(split, "split_degrees"))
    pieces = doc.get("graded_pieces")
    if pieces is not None:
        pieces = tuple((parse_int(p[0], "graded_pieces"), parse_int(p[1], "graded_pieces"))
                       for p in _list(pieces, "graded_pieces"))
    return SwampConfig(r, parse_int(_get(doc, "degree"), "degree"), parse_int(doc.get("line_degree", 0), "line_degree"),
                       parse_int(doc.get("genus", 0), "genus"), rho, sigma, phi, s, split, pieces)


def parse_flags(doc: dict, r: int) -> list[NumericFlag] | None:
    if "flags" not in doc:
        return None
    return [parse_flag(f, r, f"flags[{i}]") for i, f in enumerate(_list(doc["flags"], "flags"))]


def parse_parabolic(doc: dict, r: int, delta2: Fraction) -> ParabolicStructure:
    block = _get(doc, "parabolic")
    if not isinstance(block, dict):
        raise ParseError("parabolic: expected an object")
    chain = [parse_rows(c, r, "parabolic.chain") for c in _list(_get(block, "chain", "parabolic"), "parabolic.chain")]
    beta = [parse_int(b, "parabolic.beta") for b in _list(_get(block, "beta", "parabolic"), "parabolic.beta")]
    return make_parabolic(r, chain, beta, delta2)


def parse_level(doc: dict, r: int) -> tuple[CompletedHom, CompletedHomDecomposition | None, tuple[int, ...]]:
    """The level block: theta plus either a decomposition (reconstructed) or a point (f, l)."""
    block = _get(doc, "level")
    if not isinstance(block, dict):
        raise ParseError("level: expected an object")
    theta = tuple(parse_int(t, "level.theta") for t in _list(_get(block, "theta", "level"), "level.theta"))
    if "decomposition" in block:
        d = block["decomposition"]
        if not isinstance(d, dict):
            raise ParseError("level.decomposition: expected an object")
        stratum = [parse_int(x, "stratum") for x in _list(_get(d, "stratum", "decomposition"), "stratum")]
        dec = make_decomposition(
            r, stratum,
            [parse_rational(x, "l") for x in _list(_get(d, "l", "decomposition"), "l")],
            [parse_rows(w, r, "w") for w in _list(_get(d, "w", "decomposition"), "w")],
            [parse_rows(w, r, "w_prime") for w in _list(_get(d, "w_prime", "decomposition"), "w_prime")],
            [parse_matrix(a, r, "lifts") for a in _list(_get(d, "lifts", "decomposition"), "lifts")])
        return reconstruct_completed_hom(dec), dec, theta
    p = _get(block, "point", "level")
    if not isinstance(p, dict):
        raise ParseError("level.point: expected an object")
    f = [parse_matrix(m, comb(r, i), f"point.f[{i}]") for i, m in enumerate(_list(_get(p, "f", "point"), "f"), 1)]
    l = [parse_rational(x, "point.l") for x in _list(_get(p, "l", "point"), "point.l")]
    return make_completed_hom(r, f, l), None, theta


def loads(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("document: expected a JSON object")
    return doc


def _reject_float(text: str):
    raise ParseError(f"floats are not accepted ({text}); write \"p/q\"")


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


# ------------------------------------------------------------- serialization

def subspace_doc(sub: Subspace) -> list[list[str]]:
    return [[fmt(x) for x in row] for row in sub.basis]


def form_doc(form: DecorationForm) -> list[dict]:
    return [{"copy": copy + 1, "index": [i + 1 for i in idx], "value": fmt(v)} for (copy, idx), v in form.items]


def flag_doc(flag: NumericFlag) -> dict:
    out = {"degrees": list(flag.degrees), "weights": [fmt(w) for w in flag.weights],
           "generic": [subspace_doc(s) for s in flag.generic]}
    if flag.x0 != flag.generic:
        out["x0"] = [subspace_doc(s) for s in flag.x0]
    return out


def config_doc(config: SwampConfig) -> dict:
    out: dict[str, Any] = {
        "rank": config.r, "degree": config.d, "line_degree": config.l, "genus": config.g,
        "rho": {"a": config.rho.a, "b": config.rho.b, "c": config.rho.c},
        "sigma": {"a": config.sigma.a, "b": config.sigma.b, "c": config.sigma.c},
        "phi": form_doc(config.phi), "s": form_doc(config.s),
    }
    if config.split_degrees is not None:
        out["split_degrees"] = list(config.split_degrees)
    if config.graded_pieces is not None:
        out["graded_pieces"] = [list(p) for p in config.graded_pieces]
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"

