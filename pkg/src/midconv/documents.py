"""Canonical document format for systems, data, and reports.

Documents are JSON with a fixed key order, rationals as "p/q" strings
(denominator always present and positive), Gaussian scalars as {re, im}
objects, and matrices as row lists.  Serialization of a parsed canonical
document is byte-identical; parts and blocks are kept sorted by point, so
the canonical form is unambiguous.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .datum import Block, Datum, HarnadDatum
from .errors import ParseError, ValidationError
from .exactalg import GaussianRational, Matrix, gr
from .functors import OkuboTriple
from .normalform import NormalForm
from .systems import PrincipalPart, System

__all__ = [
    "dumps_canonical",
    "parse_document",
    "serialize_document",
    "system_to_document",
    "system_from_document",
    "harnad_to_document",
    "harnad_from_document",
    "okubo_from_document",
    "normal_form_to_document",
    "trace_to_document",
    "scalar_to_json",
    "scalar_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "parse_scalar_flag",
]


def _fraction_to_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _fraction_from_str(s) -> Fraction:
    if not isinstance(s, str) or "/" not in s:
        raise ValidationError(f"rational values must be 'p/q' strings, got {s!r}")
    num, _, den = s.partition("/")
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational {s!r}: {exc}") from None


def scalar_to_json(x: GaussianRational) -> dict:
    return {"re": _fraction_to_str(x.re), "im": _fraction_to_str(x.im)}


def scalar_from_json(obj) -> GaussianRational:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise ValidationError(f"scalar must be an object with re and im, got {obj!r}")
    return GaussianRational(_fraction_from_str(obj["re"]), _fraction_from_str(obj["im"]))


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_to_json(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def matrix_from_json(obj, rows=None, cols=None) -> Matrix:
    if not isinstance(obj, list):
        raise ValidationError("matrix must be a list of rows")
    grid = [[scalar_from_json(e) for e in row] for row in obj]
    r = len(grid)
    c = len(grid[0]) if grid else (cols if cols is not None else 0)
    if any(len(row) != c for row in grid):
        raise ValidationError("matrix rows have unequal lengths")
    if rows is not None and r != rows:
        raise ValidationError(f"matrix has {r} rows, expected {rows}")
    if cols is not None and c != cols:
        raise ValidationError(f"matrix has {c} columns, expected {cols}")
    if r == 0 or c == 0:
        return Matrix.zeros(rows if rows is not None else r, cols if cols is not None else c)
    return Matrix.from_rows(grid)


def system_to_document(sys: System, name=None) -> dict:
    doc = {"kind": "system"}
    if name:
        doc["name"] = name
    doc["dimension"] = sys.dimension
    doc["constant"] = matrix_to_json(sys.constant)
    doc["parts"] = [
        {
            "point": scalar_to_json(p.point),
            "coefficients": [matrix_to_json(c) for c in p.coefficients],
        }
        for p in sys.parts
    ]
    if sys.declaration is not None:
        doc["declarations"] = {
            "points": [scalar_to_json(s) for s, _ in sys.declaration],
            "orders": [l for _, l in sys.declaration],
        }
    return doc


def system_from_document(doc) -> System:
    if not isinstance(doc, dict) or doc.get("kind") != "system":
        raise ValidationError("expected a document of kind 'system'")
    try:
        n = int(doc["dimension"])
        constant = matrix_from_json(doc["constant"], rows=n, cols=n)
        parts = []
        for entry in doc.get("parts", []):
            point = scalar_from_json(entry["point"])
            coeffs = [matrix_from_json(c, rows=n, cols=n) for c in entry["coefficients"]]
            parts.append(PrincipalPart(point, tuple(coeffs)))
        declaration = None
        if "declarations" in doc:
            decl = doc["declarations"]
            pts = [scalar_from_json(s) for s in decl["points"]]
            orders = [int(l) for l in decl["orders"]]
            if len(pts) != len(orders):
                raise ValidationError("declaration points and orders differ in length")
            declaration = tuple(zip(pts, orders))
    except KeyError as exc:
        raise ValidationError(f"missing document field {exc}") from None
    return System(n, constant, tuple(parts), declaration)


def harnad_to_document(h: HarnadDatum, name=None) -> dict:
    doc = {"kind": "datum"}
    if name:
        doc["name"] = name
    doc["dimension"] = h.dim_v
    doc["constant"] = matrix_to_json(h.s_matrix)
    doc["blocks"] = [
        {
            "point": scalar_to_json(b.point),
            "nilpotent": matrix_to_json(b.nilpotent),
            "q": matrix_to_json(b.q),
            "p": matrix_to_json(b.p),
        }
        for b in h.datum.blocks
    ]
    return doc


def harnad_from_document(doc) -> HarnadDatum:
    if not isinstance(doc, dict) or doc.get("kind") != "datum":
        raise ValidationError("expected a document of kind 'datum'")
    try:
        n = int(doc["dimension"])
        constant = matrix_from_json(doc["constant"], rows=n, cols=n)
        blocks = []
        for entry in doc.get("blocks", []):
            point = scalar_from_json(entry["point"])
            nil = matrix_from_json(entry["nilpotent"])
            w = nil.rows
            q = matrix_from_json(entry["q"], rows=n, cols=w)
            p = matrix_from_json(entry["p"], rows=w, cols=n)
            blocks.append(Block(point, nil, q, p))
    except KeyError as exc:
        raise ValidationError(f"missing document field {exc}") from None
    return HarnadDatum(Datum(n, tuple(blocks)), constant)


def okubo_from_document(doc) -> OkuboTriple:
    if not isinstance(doc, dict) or doc.get("kind") != "okubo":
        raise ValidationError("expected a document of kind 'okubo'")
    try:
        w = int(doc["dimension"])
        t = matrix_from_json(doc["t_matrix"], rows=w, cols=w)
        r = matrix_from_json(doc["r_matrix"], rows=w, cols=w)
    except KeyError as exc:
        raise ValidationError(f"missing document field {exc}") from None
    return OkuboTriple(t, r)


def normal_form_to_document(nf: NormalForm, point=None) -> dict:
    doc = {"kind": "normal_form"}
    if point is not None:
        doc["point"] = scalar_to_json(gr(point))
    doc["order_bound"] = nf.k
    doc["spectra"] = [
        {
            "coefficients": [scalar_to_json(c) for c in b.tail],
            "dimension": b.dim,
            "residue": matrix_to_json(b.gamma),
        }
        for b in nf.blocks
    ]
    return doc


def trace_to_document(trace) -> dict:
    return {
        "kind": "trace",
        "steps": [
            {
                "alpha": system_to_document(s.alpha),
                "lambda": scalar_to_json(s.lam),
                "rank_before": s.rank_before,
                "rank_after": s.rank_after,
                "result": system_to_document(s.result),
            }
            for s in trace.steps
        ],
    }


def dumps_canonical(obj) -> str:
    """The one true textual form: two-space indent, fixed key order as
    constructed, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def parse_document(text: str):
    """JSON text -> typed document object, dispatching on 'kind'."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict):
        raise ValidationError("document must be a JSON object")
    kind = obj.get("kind")
    if kind == "system":
        return system_from_document(obj)
    if kind == "datum":
        return harnad_from_document(obj)
    if kind == "okubo":
        return okubo_from_document(obj)
    raise ValidationError(f"unknown document kind {kind!r}")


def serialize_document(value, name=None) -> str:
    if isinstance(value, System):
        return dumps_canonical(system_to_document(value, name=name))
    if isinstance(value, HarnadDatum):
        return dumps_canonical(harnad_to_document(value, name=name))
    if isinstance(value, dict):
        return dumps_canonical(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def parse_scalar_flag(text: str) -> GaussianRational:
    """Lenient scalar syntax for CLI flags: 're' or 're,im', each part an
    integer or 'p/q'."""
    parts = text.split(",")
    if len(parts) > 2:
        raise ValidationError(f"bad scalar {text!r}")
    try:
        re = Fraction(parts[0].strip())
        im = Fraction(parts[1].strip()) if len(parts) == 2 else Fraction(0)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad scalar {text!r}: {exc}") from None
    return GaussianRational(re, im)
