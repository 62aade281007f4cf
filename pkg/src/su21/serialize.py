"""JSON wire format.

Field: {"minpoly": ["1", "0", "1"], "root_hint": ["0", "1"]}; omitted means Q.
Exact element: a rational string "p/q" or a list of rational strings giving
coordinates over 1, alpha, alpha^2, ...
Float element: a number or [re, im]. A float-mode run on a document that
declares a field reads exact entries and embeds them.
Vectors are lists of elements, matrices lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import SchemaError
from .linalg import EXACT, FLOAT, Matrix, Vector
from .numberfield import (
    QQ,
    FieldElement,
    NumberField,
    SubfieldBasis,
    field_from_json,
    field_to_json,
    fraction_str,
    to_fraction,
)
from .tracefield import Word


class Reader:
    """Decodes elements, vectors and matrices, tracking JSON pointers for errors."""

    def __init__(self, field: NumberField = QQ, mode: str = EXACT, field_coords: bool = False):
        self.field = field
        self.mode = mode
        # float mode on a document with a field: entries are field coordinates
        self.field_coords = field_coords

    @classmethod
    def from_document(cls, doc: dict, mode: str | None = None) -> "Reader":
        if not isinstance(doc, dict):
            raise SchemaError("", "document must be an object")
        mode = mode or doc.get("mode", EXACT)
        if mode not in (EXACT, FLOAT):
            raise SchemaError("/mode", f"unknown mode {mode!r}")
        field = QQ
        if "field" in doc:
            try:
                field = field_from_json(doc["field"])
            except SchemaError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError("/field", f"bad field descriptor: {exc}") from exc
        return cls(field, mode, field_coords="field" in doc)

    def element(self, x: Any, ptr: str):
        if self.mode == FLOAT and self.field_coords:
            return complex(self._exact(x, ptr))
        if self.mode == FLOAT:
            try:
                if isinstance(x, list):
                    if len(x) != 2:
                        raise SchemaError(ptr, "float entries are numbers or [re, im]")
                    return complex(float(x[0]), float(x[1]))
                if isinstance(x, str):
                    return complex(float(to_fraction(x)))
                return complex(float(x))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise SchemaError(ptr, f"not a number: {x!r}") from exc
        return self._exact(x, ptr)

    def _exact(self, x: Any, ptr: str):
        try:
            if isinstance(x, list):
                if len(x) > self.field.degree:
                    raise SchemaError(ptr, f"more than {self.field.degree} coordinates")
                return self.field.element([to_fraction(c) for c in x] + [0] * (self.field.degree - len(x)))
            if isinstance(x, float):
                raise SchemaError(ptr, "floats are not allowed in exact mode; use \"p/q\" strings")
            return self.field(to_fraction(x))
        except SchemaError:
            raise
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(ptr, f"not a rational: {x!r}") from exc

    def vector(self, x: Any, ptr: str, length: int | None = None) -> Vector:
        if not isinstance(x, list) or not x:
            raise SchemaError(ptr, "expected a non-empty list")
        if length is not None and len(x) != length:
            raise SchemaError(ptr, f"expected {length} entries")
        ents = [self.element(v, f"{ptr}/{k}") for k, v in enumerate(x)]
        return Vector(ents, field=self._field(), mode=self.mode)

    def matrix(self, x: Any, ptr: str) -> Matrix:
        if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
            raise SchemaError(ptr, "expected a list of rows")
        n = len(x)
        for i, r in enumerate(x):
            if len(r) != n:
                raise SchemaError(f"{ptr}/{i}", f"expected {n} entries (square matrix)")
        rows = [[self.element(v, f"{ptr}/{i}/{j}") for j, v in enumerate(r)] for i, r in enumerate(x)]
        return Matrix(rows, field=self._field(), mode=self.mode)

    def _field(self):
        return self.field if self.mode == EXACT else None


def require(doc: dict, key: str, ptr: str = ""):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{ptr}/{key}", "missing required key")
    return doc[key]


def as_list(x, ptr: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(ptr, "expected a list")
    return x


# -- encoding -------------------------------------------------------------------


def encode(x: Any):
    """Turn results into JSON-ready values; exact numbers become rational strings."""
    if isinstance(x, FieldElement):
        return x.to_json()
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Matrix):
        return [[encode(a) for a in r] for r in x.rows]
    if isinstance(x, Vector):
        return [encode(a) for a in x.entries]
    if isinstance(x, Word):
        return str(x)
    if isinstance(x, SubfieldBasis):
        return {"degree": x.degree, "basis": [encode(b) for b in x.basis]}
    if isinstance(x, NumberField):
        return field_to_json(x)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")
