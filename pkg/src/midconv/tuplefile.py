"""On-disk JSON format for tuples.

A tuple file is a JSON document

    {
      "n": 2,
      "infinity": {"m": 1, "coeffs": {"1": [["0","0"],["0","-1"]]}},
      "finite": [
        {"t": "0", "m": 0, "coeffs": {"0": [["-1/3","1"],["1/18","-1/6"]]}}
      ]
    }

with every rational written canonically as "p" or "p/q" (sign on the
numerator, q positive, gcd(p, q) = 1).  `coeffs` maps the pole index j
(as a string) to an n x n matrix given as a list of rows; the infinity
entry carries j = m..1, finite entries j = m..0.  Writing and re-reading
any tuple reproduces it exactly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import ValidationError
from .exactla import Mat
from .model import MatrixTuple, SingularPoint, validate

_RATIONAL_RE = re.compile(r"^[+-]?[0-9]+(/[0-9]+)?$")


def parse_rational(s: str) -> Fraction:
    """Parse "p" or "p/q"; rejects zero denominators and any other shape."""
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise ValidationError(f"not a rational literal: {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValidationError(f"zero denominator in rational literal: {s!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _matrix_to_rows(m: Mat) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.data]


def _rows_to_matrix(rows, n: int, where: str) -> Mat:
    if not isinstance(rows, list) or len(rows) != n:
        raise ValidationError(f"{where}: expected {n} matrix rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise ValidationError(f"{where}: expected rows of length {n}")
        out.append([parse_rational(x) for x in row])
    return Mat(out)


def _point_to_doc(p: SingularPoint) -> dict:
    coeffs = {
        str(p.poincare_rank - k): _matrix_to_rows(a)
        for k, a in enumerate(p.coeffs)
    }
    doc = {"m": p.poincare_rank, "coeffs": coeffs}
    if not p.is_infinity:
        doc = {"t": format_rational(p.location), **doc}
    return doc


def tuple_to_doc(t: MatrixTuple) -> dict:
    validate(t)
    return {
        "n": t.size,
        "infinity": _point_to_doc(t.infinity),
        "finite": [_point_to_doc(p) for p in t.finite],
    }


def _point_from_doc(doc, n: int, at_infinity: bool, where: str) -> SingularPoint:
    if not isinstance(doc, dict):
        raise ValidationError(f"{where}: expected an object")
    m = doc.get("m")
    if not isinstance(m, int) or m < 0:
        raise ValidationError(f"{where}: 'm' must be a non-negative integer")
    coeffs_doc = doc.get("coeffs")
    if not isinstance(coeffs_doc, dict):
        raise ValidationError(f"{where}: 'coeffs' must be an object")
    js = list(range(m, 0, -1)) if at_infinity else list(range(m, -1, -1))
    if sorted(coeffs_doc.keys()) != sorted(str(j) for j in js):
        raise ValidationError(
            f"{where}: coefficient keys must be exactly {[str(j) for j in js]}"
        )
    coeffs = tuple(
        _rows_to_matrix(coeffs_doc[str(j)], n, f"{where}, coefficient {j}")
        for j in js
    )
    if at_infinity:
        return SingularPoint(None, m, coeffs)
    if "t" not in doc:
        raise ValidationError(f"{where}: missing location 't'")
    return SingularPoint(parse_rational(doc["t"]), m, coeffs)


def doc_to_tuple(doc) -> MatrixTuple:
    if not isinstance(doc, dict):
        raise ValidationError("tuple file must contain a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("'n' must be a positive integer")
    if "infinity" not in doc:
        raise ValidationError("missing 'infinity' entry")
    inf = _point_from_doc(doc["infinity"], n, True, "infinity")
    fin_doc = doc.get("finite", [])
    if not isinstance(fin_doc, list):
        raise ValidationError("'finite' must be a list")
    fin = tuple(
        _point_from_doc(d, n, False, f"finite point {k}")
        for k, d in enumerate(fin_doc)
    )
    t = MatrixTuple(n, inf, fin)
    validate(t)
    return t


def dumps_tuple(t: MatrixTuple) -> str:
    return json.dumps(tuple_to_doc(t), indent=2, sort_keys=True) + "\n"


def loads_tuple(text: str) -> MatrixTuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON: {e}") from e
    return doc_to_tuple(doc)


def write_tuple(path, t: MatrixTuple) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_tuple(t))


def read_tuple(path) -> MatrixTuple:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from e
    return loads_tuple(text)
