"""Small dense matrices and vectors over a number field or over complex doubles.

Every Matrix and Vector carries a mode. Exact objects hold FieldElements of a
single NumberField; float objects hold Python complex numbers. Mixing the two
raises ModeMismatch instead of silently promoting.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import FieldMismatch, ModeMismatch, SingularTransform
from .numberfield import QQ, FieldElement, NumberField

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOL = 1e-9


def conj(x):
    return x.conjugate()


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (FieldElement, int, Fraction)) and not isinstance(x, bool)


def _detect(entries, field: NumberField | None):
    """Decide mode and field for a flat list of raw entries."""
    floats = any(isinstance(x, (float, complex, np.floating, np.complexfloating)) for x in entries)
    fes = [x for x in entries if isinstance(x, FieldElement)]
    if floats and (fes or field is not None):
        raise ModeMismatch("float entries in an exact object")
    if floats:
        return FLOAT, None
    if field is None:
        fields = {x.field for x in fes if x.field.degree > 1}
        if len(fields) > 1:
            raise FieldMismatch("entries from different number fields")
        field = fields.pop() if fields else QQ
    return EXACT, field


def _coerce(x, mode, field):
    if mode == FLOAT:
        if isinstance(x, FieldElement):
            raise ModeMismatch("exact entry in a float object")
        return complex(x)
    if isinstance(x, (list, tuple)):
        return field.element(x)
    if isinstance(x, FieldElement) and x.field != field:
        if x.is_rational():
            return field(x.to_fraction())
        raise FieldMismatch("entry from another number field")
    return field(x)


def scalar_to_complex(x) -> complex:
    return complex(x)


class Vector:
    __slots__ = ("entries", "mode", "field")

    def __init__(self, entries: Sequence, field: NumberField | None = None, mode: str | None = None):
        entries = list(entries)
        if mode is None:
            mode, field = _detect(entries, field)
        elif mode == EXACT and field is None:
            field = QQ
        self.mode = mode
        self.field = field
        self.entries = tuple(_coerce(x, mode, field) for x in entries)

    @classmethod
    def _raw(cls, entries, mode, field):
        v = cls.__new__(cls)
        v.entries, v.mode, v.field = tuple(entries), mode, field
        return v

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _check(self, other):
        if self.mode != other.mode:
            raise ModeMismatch("exact and float vectors mixed")
        if self.mode == EXACT and self.field != other.field:
            raise FieldMismatch("vectors over different fields")

    def __add__(self, other: "Vector"):
        self._check(other)
        return Vector._raw((a + b for a, b in zip(self, other)), self.mode, self.field)

    def __sub__(self, other: "Vector"):
        self._check(other)
        return Vector._raw((a - b for a, b in zip(self, other)), self.mode, self.field)

    def __neg__(self):
        return Vector._raw((-a for a in self), self.mode, self.field)

    def scale(self, c) -> "Vector":
        c = self._scalar(c)
        return Vector._raw((c * a for a in self), self.mode, self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def _scalar(self, c):
        if self.mode == FLOAT:
            if isinstance(c, FieldElement):
                raise ModeMismatch("exact scalar times float vector")
            return complex(c)
        if isinstance(c, (float, complex)):
            raise ModeMismatch("float scalar times exact vector")
        return self.field(c) if not isinstance(c, FieldElement) or c.field != self.field else c

    def conjugate(self) -> "Vector":
        return Vector._raw((conj(a) for a in self), self.mode, self.field)

    def dot(self, other: "Vector"):
        """Bilinear dot product (no conjugation)."""
        self._check(other)
        acc = self.zero_scalar()
        for a, b in zip(self, other):
            acc = acc + a * b
        return acc

    def cross(self, other: "Vector") -> "Vector":
        self._check(other)
        a, b = self.entries, other.entries
        return Vector._raw(
            (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]),
            self.mode,
            self.field,
        )

    def zero_scalar(self):
        return 0j if self.mode == FLOAT else self.field.zero

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.mode == EXACT:
            return all(a.is_zero() for a in self)
        return max(abs(a) for a in self) <= tol

    def normalize_last(self) -> "Vector":
        """Scale so that the last nonzero coordinate equals 1."""
        for a in reversed(self.entries):
            if (a.is_zero() if self.mode == EXACT else a == 0):
                continue
            inv = a.inverse() if self.mode == EXACT else 1 / a
            return self.scale(inv)
        return self

    def to_complex(self) -> "Vector":
        if self.mode == FLOAT:
            return self
        return Vector._raw((complex(a) for a in self), FLOAT, None)

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(a) for a in self], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, Vector) or self.mode != other.mode:
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Vector({list(self.entries)!r})"


class Matrix:
    __slots__ = ("rows", "mode", "field")

    def __init__(self, rows: Sequence[Sequence], field: NumberField | None = None, mode: str | None = None):
        rows = [list(r) for r in rows]
        flat = [x for r in rows for x in r if not isinstance(x, (list, tuple))]
        if mode is None:
            if any(isinstance(x, (list, tuple)) for r in rows for x in r) and field is None:
                raise ModeMismatch("coordinate entries need an explicit field")
            mode, field = _detect(flat, field)
        elif mode == EXACT and field is None:
            field = QQ
        self.mode = mode
        self.field = field
        self.rows = tuple(tuple(_coerce(x, mode, field) for x in r) for r in rows)

    @classmethod
    def _raw(cls, rows, mode, field):
        m = cls.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        m.mode, m.field = mode, field
        return m

    # -- constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, n: int = 3, field: NumberField | None = None, mode: str = EXACT) -> "Matrix":
        return cls.diag([1] * n, field=field, mode=mode)

    @classmethod
    def diag(cls, values: Sequence, field: NumberField | None = None, mode: str | None = None) -> "Matrix":
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        if mode is None:
            mode, field = _detect(list(values), field)
        return cls(rows, field=field, mode=mode)

    @classmethod
    def from_columns(cls, cols: Sequence[Vector]) -> "Matrix":
        mode, field = cols[0].mode, cols[0].field
        n = len(cols[0])
        return cls._raw([[c[i] for c in cols] for i in range(n)], mode, field)

    # -- access ------------------------------------------------------------------
    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return Vector._raw((r[j] for r in self.rows), self.mode, self.field)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.shape[1])]

    def entries(self):
        return [x for r in self.rows for x in r]

    def zero_scalar(self):
        return 0j if self.mode == FLOAT else self.field.zero

    def one_scalar(self):
        return 1 + 0j if self.mode == FLOAT else self.field.one

    # -- arithmetic ----------------------------------------------------------------
    def _check(self, other):
        if self.mode != other.mode:
            raise ModeMismatch("exact and float matrices mixed")
        if self.mode == EXACT and self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __matmul__(self, other):
        if isinstance(other, Vector):
            self._check(other)
            if self.shape[1] != len(other.entries):
                raise ValueError("shape mismatch in matrix-vector product")
            z = self.zero_scalar()
            out = []
            for r in self.rows:
                acc = z
                for a, b in zip(r, other.entries):
                    acc = acc + a * b
                out.append(acc)
            return Vector._raw(out, self.mode, self.field)
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch in matrix product")
        cols = list(zip(*other.rows))
        z = self.zero_scalar()
        rows = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return Matrix._raw(rows, self.mode, self.field)

    def __add__(self, other: "Matrix"):
        self._check(other)
        return Matrix._raw(([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.mode, self.field)

    def __sub__(self, other: "Matrix"):
        self._check(other)
        return Matrix._raw(([a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.mode, self.field)

    def __neg__(self):
        return Matrix._raw(([-a for a in r] for r in self.rows), self.mode, self.field)

    def scale(self, c) -> "Matrix":
        c = Vector._scalar(self, c)
        return Matrix._raw(([c * a for a in r] for r in self.rows), self.mode, self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        if isinstance(c, (Matrix, Vector)):
            return NotImplemented
        return self.scale(c)

    def __pow__(self, n: int) -> "Matrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.shape[0], self.field, self.mode)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def minus_scalar(self, c) -> "Matrix":
        """self - c * Id."""
        c = Vector._scalar(self, c)
        return Matrix._raw(
            ([a - c if i == j else a for j, a in enumerate(r)] for i, r in enumerate(self.rows)), self.mode, self.field
        )

    def conjugate(self) -> "Matrix":
        return Matrix._raw(([conj(a) for a in r] for r in self.rows), self.mode, self.field)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(zip(*self.rows), self.mode, self.field)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return self.conjugate().T

    def trace(self):
        acc = self.zero_scalar()
        for i in range(self.shape[0]):
            acc = acc + self.rows[i][i]
        return acc

    def det(self):
        n = self.shape[0]
        if self.mode == FLOAT:
            return complex(np.linalg.det(self.to_numpy()))
        m = self.rows
        if n == 1:
            return m[0][0]
        if n == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if n == 3:
            return (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
        # Gaussian elimination over the field
        a = [list(r) for r in m]
        det = self.field.one
        for c in range(n):
            p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
            if p is None:
                return self.field.zero
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det = det * a[c][c]
            inv = a[c][c].inverse()
            for i in range(c + 1, n):
                f = a[i][c] * inv
                if not f.is_zero():
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det

    def inverse(self) -> "Matrix":
        n = self.shape[0]
        if self.mode == FLOAT:
            arr = self.to_numpy()
            if np.linalg.cond(arr) > 1e14:
                raise SingularTransform("matrix is numerically singular")
            return Matrix.from_numpy(np.linalg.inv(arr))
        F = self.field
        a = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
            if p is None:
                raise SingularTransform("matrix is singular")
            a[c], a[p] = a[p], a[c]
            inv = a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for i in range(n):
                if i != c and not a[i][c].is_zero():
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return Matrix._raw((r[n:] for r in a), EXACT, F)

    def rank(self, tol: float = DEFAULT_TOL) -> int:
        if self.mode == FLOAT:
            sv = np.linalg.svd(self.to_numpy(), compute_uv=False)
            return int(np.sum(sv > tol * max(1.0, float(sv[0]) if len(sv) else 1.0)))
        return self.shape[1] - len(self.nullspace())

    def nullspace(self, tol: float = DEFAULT_TOL) -> list[Vector]:
        """Basis of {v : self @ v = 0}."""
        n = self.shape[1]
        if self.mode == FLOAT:
            _, sv, vh = np.linalg.svd(self.to_numpy())
            big = float(sv[0]) if len(sv) else 1.0
            r = int(np.sum(sv > tol * max(1.0, big)))
            return [Vector._raw((complex(x) for x in vh[k].conj()), FLOAT, None) for k in range(r, n)]
        a = [list(r) for r in self.rows]
        pivots = []
        row = 0
        for c in range(n):
            p = next((i for i in range(row, len(a)) if not a[i][c].is_zero()), None)
            if p is None:
                continue
            a[row], a[p] = a[p], a[row]
            inv = a[row][c].inverse()
            a[row] = [x * inv for x in a[row]]
            for i in range(len(a)):
                if i != row and not a[i][c].is_zero():
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[row])]
            pivots.append(c)
            row += 1
        F = self.field
        basis = []
        for f in (j for j in range(n) if j not in pivots):
            v = [F.zero] * n
            v[f] = F.one
            for r, c in enumerate(pivots):
                v[c] = -a[r][f]
            basis.append(Vector._raw(v, EXACT, F))
        return basis

    # -- comparisons / conversions ----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.mode != other.mode:
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.mode == EXACT:
            return all(a.is_zero() for a in self.entries())
        return self.max_abs() <= tol

    def is_scalar(self, tol: float = 0.0) -> bool:
        return self.minus_scalar(self.rows[0][0]).is_zero(tol)

    def max_abs(self) -> float:
        return max(abs(complex(a)) for a in self.entries())

    def close_to(self, other: "Matrix", tol: float = DEFAULT_TOL) -> bool:
        return float(np.max(np.abs(self.to_numpy() - other.to_numpy()))) <= tol

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(a) for a in r] for r in self.rows], dtype=complex)

    def to_complex(self) -> "Matrix":
        if self.mode == FLOAT:
            return self
        return Matrix.from_numpy(self.to_numpy())

    @classmethod
    def from_numpy(cls, arr) -> "Matrix":
        return cls._raw(([complex(x) for x in r] for r in np.asarray(arr, dtype=complex)), FLOAT, None)

    def with_field(self, field: NumberField, embed=None) -> "Matrix":
        """Move an exact matrix into another field (via `embed` if given)."""
        f = embed or field
        return Matrix._raw(([f(a) if embed else field(a) for a in r] for r in self.rows), EXACT, field)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"


def same_mode(*objs):
    modes = {o.mode for o in objs}
    if len(modes) > 1:
        raise ModeMismatch("exact and float objects mixed")
    return modes.pop()
