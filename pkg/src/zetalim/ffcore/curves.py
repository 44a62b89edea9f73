"""Explicit curve models over F_r and their JSON description files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from ..errors import BadModel, InputError
from .fields import FiniteFieldSpec, field

PROJECTIVE_LINE = "projective_line"
HYPERELLIPTIC = "hyperelliptic"
PLANE = "plane"


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_divmod(a, b, F):
    a = list(a)
    inv_lead = F.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        c = F.mul(a[-1], inv_lead)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
    return q, _trim(a)


def poly_gcd(a, b, F):
    a, b = _trim(a), _trim(b)
    while b:
        _, rem = _poly_divmod(a, b, F)
        a, b = b, rem
    return a


def derivative(f, F):
    return _trim([F.scale(c, i) for i, c in enumerate(f)][1:])


@dataclass(frozen=True)
class CurveModel:
    """A smooth projective curve over F_r given by an explicit model.

    ``coeffs`` holds, for hyperelliptic models, the little-endian coefficients
    of f in y^2 = f(x); for plane models a tuple of ``(c, i, j, k)`` terms of
    a homogeneous F(X, Y, Z) = sum c X^i Y^j Z^k.  Coefficients are encodings
    of F_r elements (plain residues when r is prime).
    """

    kind: str
    base: FiniteFieldSpec
    coeffs: tuple = ()
    genus: int = 0
    label: str = dc_field(default="", compare=False)

    @property
    def r(self) -> int:
        return self.base.r

    @property
    def degree(self) -> int:
        if self.kind == HYPERELLIPTIC:
            return len(self.coeffs) - 1
        if self.kind == PLANE:
            return sum(self.coeffs[0][1:])
        return 1


def model_genus(kind, coeffs):
    if kind == PROJECTIVE_LINE:
        return 0
    if kind == HYPERELLIPTIC:
        d = len(coeffs) - 1
        return (d - 1) // 2 if d % 2 else d // 2 - 1
    d = sum(coeffs[0][1:])
    return (d - 1) * (d - 2) // 2


def projective_line(p: int, k: int = 1, label: str = "") -> CurveModel:
    return CurveModel(PROJECTIVE_LINE, FiniteFieldSpec(p, k), (), 0, label or f"P1/F{p**k}")


def hyperelliptic(p: int, f, k: int = 1, genus: int | None = None, label: str = "") -> CurveModel:
    """y^2 = f(x) over F_{p^k}, p odd, f squarefree of degree >= 1."""
    base = FiniteFieldSpec(p, k)
    if p == 2:
        raise BadModel("hyperelliptic models y^2 = f(x) need odd characteristic")
    F = field(p, k)
    f = _trim(int(c) for c in f)
    if any(not 0 <= c < F.q for c in f):
        raise BadModel("coefficient outside the encoding range of F_r")
    if len(f) < 2:
        raise BadModel("f must have degree >= 1")
    if len(poly_gcd(f, derivative(f, F), F)) > 1:
        raise BadModel("f is not squarefree")
    g = model_genus(HYPERELLIPTIC, f)
    if genus is not None and genus != g:
        raise BadModel(f"declared genus {genus} but model formula gives {g}")
    return CurveModel(HYPERELLIPTIC, base, tuple(f), g, label or f"y^2={f}/F{base.r}")


def plane(p: int, terms, k: int = 1, genus: int | None = None, label: str = "") -> CurveModel:
    """Plane projective curve F(X,Y,Z) = 0; smoothness is the caller's claim."""
    base = FiniteFieldSpec(p, k)
    F = field(p, k)
    terms = tuple((int(c), int(i), int(j), int(e)) for c, i, j, e in terms if int(c) % F.q)
    if not terms:
        raise BadModel("empty plane equation")
    degs = {i + j + e for _, i, j, e in terms}
    if len(degs) != 1:
        raise BadModel("plane equation is not homogeneous")
    if any(not 0 < c < F.q for c, *_ in terms):
        raise BadModel("coefficient outside the encoding range of F_r")
    g = model_genus(PLANE, terms)
    if genus is not None and genus != g:
        raise BadModel(f"declared genus {genus} but smooth plane formula gives {g}")
    return CurveModel(PLANE, base, terms, g, label or f"plane deg {degs.pop()}/F{base.r}")


def curve_from_dict(d: dict) -> CurveModel:
    try:
        fd = d["field"]
        p, k = int(fd["p"]), int(fd.get("k", 1))
        model = d["model"]
        kind = model["type"].lower().replace("-", "_")
        genus = model.get("genus")
        label = d.get("label", "")
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InputError(f"bad curve description: {exc}") from exc
    if kind in ("projective_line", "p1"):
        return projective_line(p, k, label)
    if kind == "hyperelliptic":
        return hyperelliptic(p, model["f"], k, genus, label)
    if kind in ("plane", "plane_projective"):
        return plane(p, model["terms"], k, genus, label)
    raise InputError(f"unknown model type {model['type']!r}")


def curve_to_dict(c: CurveModel) -> dict:
    d = {"field": {"p": c.base.p, "k": c.base.k}, "label": c.label}
    if c.kind == PROJECTIVE_LINE:
        d["model"] = {"type": "projective_line"}
    elif c.kind == HYPERELLIPTIC:
        d["model"] = {"type": "hyperelliptic", "f": list(c.coeffs)}
    else:
        d["model"] = {"type": "plane", "terms": [list(t) for t in c.coeffs]}
    return d


def load_curve(path) -> CurveModel:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read curve file {path}: {exc}") from exc
    if isinstance(data, list):
        raise InputError("curve file holds a list; use a corpus file")
    return curve_from_dict(data)


def load_corpus(path) -> list[CurveModel]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read curve file {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("curves", [data])
    return [curve_from_dict(d) for d in data]
