r"""Curve specifications: file format, validation, and the builtin registry.

A curve spec is a JSON object with exactly one coefficient entry mode:

* ``"higgs"``: a 2x2 matrix of rational functions (the operator data is
  then a1 = -trace, a2 = determinant), or
* ``"coefficients"``: ``{"a1": ..., "a2": ...}`` directly.

A rational function is a pair ``[num, den]`` of coefficient arrays indexed
by degree; coefficients are strings ("3", "-1/2") so files are bit-exact.
``den`` may be omitted for polynomials.  Optional blocks: ``"extensions"``
(square-root adjunctions checked to be non-squares), ``"parametrization"``
(x(t), y(t), sigma(t) and a normalization point, enabling the topological
recursion), and ``"expansion"`` (default place/branch/orders for the WKB
subcommand).

The registry ships the five standard examples: airy, hermite (alias
catalan, which carries the enumerative parametrization), gauss, and the two
unnamed table rows (mixed, smooth).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import INF, Poly, QQ, QuadExtField, RatFunc
from .spectral import SpectralData


class CurveSpecError(ValueError):
    pass


def _parse_coeffs(arr, where):
    if not isinstance(arr, list) or not arr:
        raise CurveSpecError(f"{where}: coefficient array expected")
    out = []
    for i, c in enumerate(arr):
        try:
            out.append(Fraction(str(c)))
        except (ValueError, ZeroDivisionError) as exc:
            raise CurveSpecError(f"{where}[{i}]: bad rational {c!r}") from exc
    return out


def _parse_ratfunc(obj, where):
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        if len(obj) != 2:
            raise CurveSpecError(f"{where}: expected [num, den]")
        num = _parse_coeffs(obj[0], where + ".num")
        den = _parse_coeffs(obj[1], where + ".den")
    else:
        num = _parse_coeffs(obj, where)
        den = [Fraction(1)]
    if all(c == 0 for c in den):
        raise CurveSpecError(f"{where}: zero denominator")
    return RatFunc.from_coeffs(QQ, num, den)


def _parse_point(v, where):
    if isinstance(v, str) and v.strip().lower() == "inf":
        return INF
    try:
        return Fraction(str(v))
    except ValueError as exc:
        raise CurveSpecError(f"{where}: bad point {v!r}") from exc


@dataclass
class Parametrization:
    x: RatFunc
    y: RatFunc
    sigma: RatFunc
    normalization_point: object


@dataclass
class ExpansionRequest:
    place: object = INF
    branch: str = "plus"
    order: int = 12
    depth: int = 3


@dataclass
class CurveSpec:
    name: str
    sd: SpectralData
    extensions: list
    parametrization: Parametrization | None
    expansion: ExpansionRequest
    raw: dict


def parse_curve_spec(text_or_dict):
    """Validate a curve spec (JSON text or dict) into a CurveSpec."""
    if isinstance(text_or_dict, str):
        try:
            data = json.loads(text_or_dict)
        except json.JSONDecodeError as exc:
            raise CurveSpecError(f"invalid JSON: line {exc.lineno}: {exc.msg}") from exc
    else:
        data = text_or_dict
    if not isinstance(data, dict):
        raise CurveSpecError("curve spec must be a JSON object")
    name = data.get("name", "anonymous")
    has_higgs = "higgs" in data
    has_coeffs = "coefficients" in data
    if has_higgs == has_coeffs:
        raise CurveSpecError("exactly one of 'higgs' and 'coefficients' must be present")
    if has_higgs:
        m = data["higgs"]
        if not (isinstance(m, list) and len(m) == 2 and all(len(r) == 2 for r in m)):
            raise CurveSpecError("'higgs' must be a 2x2 matrix of rational functions")
        entries = tuple(
            tuple(_parse_ratfunc(m[i][j], f"higgs[{i}][{j}]") for j in range(2)) for i in range(2)
        )
        sd = SpectralData.from_higgs(entries)
    else:
        c = data["coefficients"]
        if not isinstance(c, dict) or set(c) != {"a1", "a2"}:
            raise CurveSpecError("'coefficients' must contain exactly a1 and a2")
        sd = SpectralData(_parse_ratfunc(c["a1"], "a1"), _parse_ratfunc(c["a2"], "a2"))
    extensions = []
    for i, d in enumerate(data.get("extensions", [])):
        dv = Fraction(str(d))
        # raises if the adjoined element is already a square
        QuadExtField(QQ, dv)
        extensions.append(dv)
    par = None
    if "parametrization" in data:
        p = data["parametrization"]
        par = Parametrization(
            x=_parse_ratfunc(p["x"], "parametrization.x"),
            y=_parse_ratfunc(p["y"], "parametrization.y"),
            sigma=_parse_ratfunc(p["sigma"], "parametrization.sigma"),
            normalization_point=_parse_point(
                p.get("normalization_point", 0), "normalization_point"
            ),
        )
    exp = ExpansionRequest()
    if "expansion" in data:
        e = data["expansion"]
        exp = ExpansionRequest(
            place=_parse_point(e.get("place", "inf"), "expansion.place"),
            branch=e.get("branch", "plus"),
            order=int(e.get("order", 12)),
            depth=int(e.get("depth", 3)),
        )
        if exp.branch not in ("plus", "minus"):
            raise CurveSpecError("expansion.branch must be plus or minus")
    return CurveSpec(name=name, sd=sd, extensions=extensions, parametrization=par,
                     expansion=exp, raw=data)


# ---------------------------------------------------------------------------
# builtin registry: the five standard Higgs fields, with the two rational
# parametrizations used by the enumerative cross-checks


BUILTIN_SPECS = {
    "airy": {
        "name": "airy",
        "higgs": [[["0"], ["1"]], [["0", "1"], ["0"]]],
        "parametrization": {
            "x": [["4"], ["0", "0", "1"]],
            "y": [["-2"], ["0", "1"]],
            "sigma": [["0", "-1"], ["1"]],
            "normalization_point": "0",
        },
        "expansion": {"place": "inf", "branch": "minus", "order": 16, "depth": 4},
    },
    "hermite": {
        "name": "hermite",
        "higgs": [[["0"], ["1"]], [["-1"], ["0", "-1"]]],
        "parametrization": {
            "x": [["2", "0", "2"], ["-1", "0", "1"]],
            "y": [["-1", "-1"], ["-1", "1"]],
            "sigma": [["0", "-1"], ["1"]],
            "normalization_point": "-1",
        },
        "expansion": {"place": "inf", "branch": "plus", "order": 16, "depth": 4},
    },
    "gauss": {
        "name": "gauss",
        "higgs": [
            [["0"], [["1"], ["0", "1"]]],
            [[["1"], ["4", "-4"]], [["-1", "2"], ["0", "1", "-1"]]],
        ],
        "expansion": {"place": "0", "branch": "plus", "order": 10, "depth": 2},
    },
    "mixed": {
        "name": "mixed",
        "higgs": [[["0"], ["1"]], [[["-1"], ["1", "1"]], ["-1"]]],
        "expansion": {"place": "inf", "branch": "plus", "order": 12, "depth": 2},
    },
    "smooth": {
        "name": "smooth",
        "higgs": [
            [["0"], ["1"]],
            [[["1"], ["-1", "0", "1"]], [["0", "0", "-2"], ["-1", "0", "1"]]],
        ],
        "expansion": {"place": "0", "branch": "plus", "order": 10, "depth": 2},
    },
}

# catalan: the Hermite operator seen through its enumerative parametrization
BUILTIN_SPECS["catalan"] = dict(BUILTIN_SPECS["hermite"], name="catalan")

BUILTIN_NAMES = tuple(sorted(BUILTIN_SPECS))


def load_curve(name_or_path):
    """A builtin name, or a path to a curve spec file."""
    if name_or_path in BUILTIN_SPECS:
        return parse_curve_spec(dict(BUILTIN_SPECS[name_or_path]))
    try:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CurveSpecError(
            f"{name_or_path!r} is neither a builtin ({', '.join(BUILTIN_NAMES)}) "
            f"nor a readable file: {exc}"
        ) from exc
    return parse_curve_spec(text)


# ---------------------------------------------------------------------------
# exact serialization helpers (all numbers as strings, never floats)


def frac_str(q):
    return str(q)


def poly_strs(p):
    return [frac_str(c) for c in p.coeffs]


def ratfunc_strs(f):
    return [poly_strs(f.num), poly_strs(f.den)]


def place_repr(place):
    if place is INF:
        return "inf"
    if isinstance(place, Poly):
        if place.degree == 1:
            return frac_str(-place.coeffs[0])
        return {"factor": poly_strs(place), "degree": place.degree}
    return frac_str(place)


def serialize_report(report):
    """Canonical JSON text for a report dict: sorted keys, stable layout."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def parse_report(text):
    return json.loads(text)
