"""JSON encodings for matrices, polynomials, expansions and carries matrices.

Rationals are always ``{"num": int, "den": int}`` in lowest terms with a
positive denominator. Documents are dumped with sorted keys so identical
inputs give identical bytes.
"""

import json
from fractions import Fraction

from .carries import CarriesMatrix
from .errors import InvalidInput
from .laurent import LaurentPoly
from .veronese import AsymptoticExpansion


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise InvalidInput(f"{what} must be an integer, got {x!r}")
    return x


def rational_to_json(q):
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(obj):
    try:
        num, den = _int(obj["num"], "num"), _int(obj["den"], "den")
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad rational {obj!r}") from exc
    if den <= 0:
        raise InvalidInput(f"denominator must be positive in {obj!r}")
    return Fraction(num, den)


def matrix_to_json(A):
    return {"matrix": [list(row) for row in A]}


def matrix_from_json(obj):
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise InvalidInput('matrix document must be {"matrix": [[...], ...]}')
    rows = obj["matrix"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidInput("matrix must be a nonempty list of rows")
    return [[_int(x, "matrix entry") for x in row] for row in rows]


def poly_to_json(F):
    return [{"exp": list(e), **rational_to_json(c)} for e, c in F.items()]


def poly_from_json(obj, nvars):
    if not isinstance(obj, list):
        raise InvalidInput("polynomial must be a list of terms")
    terms = {}
    for term in obj:
        if not isinstance(term, dict) or "exp" not in term:
            raise InvalidInput(f"bad term {term!r}")
        exp = tuple(_int(x, "exponent") for x in term["exp"])
        if len(exp) != nvars:
            raise InvalidInput(f"exponent {list(exp)} should have length {nvars}")
        c = rational_from_json(term)
        if c.numerator != term["num"] or c.denominator != term["den"]:
            raise InvalidInput(f"coefficient {term['num']}/{term['den']} is not in lowest terms")
        if exp in terms:
            raise InvalidInput(f"repeated exponent {list(exp)}")
        terms[exp] = c
    return LaurentPoly(terms, nvars)


def expansion_to_json(E):
    return {"codim": E.codim, "terms": [{"s": list(s), "mu": mu} for s, mu in E.terms]}


def expansion_from_json(obj):
    try:
        codim = _int(obj["codim"], "codim")
        terms = tuple((tuple(_int(i, "index") for i in t["s"]), _int(t["mu"], "mu"))
                      for t in obj["terms"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad expansion document: {exc}") from exc
    return AsymptoticExpansion(codim, terms)


def carries_to_json(C):
    return {"r": C.r, "index": [list(u) for u in C.index],
            "entries": [[rational_to_json(x) for x in row] for row in C.entries]}


def carries_from_json(obj):
    try:
        index = tuple(tuple(_int(x, "index") for x in u) for u in obj["index"])
        rows = tuple(tuple(rational_from_json(x) for x in row) for row in obj["entries"])
        r = _int(obj["r"], "r")
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad carries document: {exc}") from exc
    if len(rows) != len(index) or any(len(row) != len(index) for row in rows):
        raise InvalidInput("carries matrix must be square with one row per index point")
    return CarriesMatrix(r, index, rows)
