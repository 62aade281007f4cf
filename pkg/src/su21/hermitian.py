"""Hermitian forms of signature (n,1) and the geometry they define.

The default form is the Siegel form J, for which <z, w> = z1 w3' + z2 w2' + z3 w1'
(primes denoting complex conjugation). The inner product is linear in the
first slot and antilinear in the second: <z, w> = w* H z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import qlinalg
from .errors import DegenerateForm, FieldMismatch, ModeMismatch, NotInteriorPoint, ProportionalPoints, SingularTransform
from .linalg import DEFAULT_TOL, EXACT, FLOAT, Matrix, Vector, conj
from .numberfield import QQ, FieldElement, NumberField

POSITIVE, NULL, NEGATIVE = "positive", "null", "negative"


def siegel_matrix(field: NumberField | None = None, mode: str = EXACT) -> Matrix:
    return Matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]], field=field if mode == EXACT else None, mode=mode)


def ball_matrix(field: NumberField | None = None, mode: str = EXACT) -> Matrix:
    return Matrix.diag([1, 1, -1], field=field if mode == EXACT else None, mode=mode)


def cayley_matrix(field: NumberField | None = None, mode: str = EXACT) -> Matrix:
    """C with C* J C = diag(1,1,-1): conjugation by C carries ball-model unitaries to J-unitaries."""
    h = Fraction(1, 2)
    return Matrix([[1, 0, 1], [0, 1, 0], [h, 0, -h]], field=field if mode == EXACT else None, mode=mode)


@dataclass(frozen=True)
class HermitianForm:
    matrix: Matrix
    signature: tuple[int, int]

    @classmethod
    def from_matrix(cls, M: Matrix, tol: float = DEFAULT_TOL) -> "HermitianForm":
        if M.mode == EXACT:
            if M != M.H:
                raise ValueError("matrix is not Hermitian")
        elif not M.close_to(M.H, tol):
            raise ValueError("matrix is not Hermitian")
        return cls(M, signature(M, tol))

    @property
    def mode(self):
        return self.matrix.mode

    @property
    def field(self):
        return self.matrix.field


def siegel_form(field: NumberField | None = None, mode: str = EXACT) -> HermitianForm:
    return HermitianForm(siegel_matrix(field, mode), (2, 1))


def ball_form(field: NumberField | None = None, mode: str = EXACT) -> HermitianForm:
    return HermitianForm(ball_matrix(field, mode), (2, 1))


def _form_matrix(H, like) -> Matrix:
    """Resolve H (None, HermitianForm or Matrix) to a matrix matching `like`'s mode and field."""
    if H is None:
        return siegel_matrix(like.field, like.mode)
    if isinstance(H, HermitianForm):
        H = H.matrix
    if H.mode != like.mode:
        raise ModeMismatch("form and vectors in different modes")
    if H.mode == EXACT and H.field != like.field:
        if H.field == QQ:
            return H.with_field(like.field)
        raise FieldMismatch("form and vectors over different fields")
    return H


def inner(z: Vector, w: Vector, H=None):
    """<z, w>_H = w* H z."""
    M = _form_matrix(H, z)
    return w.conjugate().dot(M @ z)


# ---------------------------------------------------------------------------
# signatures


def descartes_signature(coeffs_signs: list[int]) -> tuple[int, int]:
    """(positive, negative) root counts of a real-rooted polynomial from its coefficient signs.

    For a polynomial whose roots are all real, Descartes' rule of signs is
    exact. coeffs_signs are the signs of c0, c1, ..., cn.
    """
    if coeffs_signs[0] == 0:
        raise DegenerateForm("form is degenerate (zero eigenvalue)")

    def changes(signs):
        s = [x for x in signs if x != 0]
        return sum(1 for a, b in zip(s, s[1:]) if a != b)

    pos = changes(coeffs_signs)
    neg = changes([s if k % 2 == 0 else -s for k, s in enumerate(coeffs_signs)])
    return pos, neg


def charpoly(M: Matrix) -> list:
    return qlinalg.charpoly([list(r) for r in M.rows], one=M.one_scalar())


def signature(H, tol: float = DEFAULT_TOL) -> tuple[int, int]:
    """(p, q): numbers of positive and negative eigenvalues of a Hermitian matrix."""
    M = H.matrix if isinstance(H, HermitianForm) else H
    if M.mode == FLOAT:
        ev = np.linalg.eigvalsh(M.to_numpy())
        scale = max(1.0, float(np.max(np.abs(ev))))
        if np.min(np.abs(ev)) <= tol * scale:
            raise DegenerateForm("form is degenerate (zero eigenvalue within tolerance)")
        return int(np.sum(ev > 0)), int(np.sum(ev < 0))
    F = M.field
    return descartes_signature([F.sign(c) for c in charpoly(M)])


def point_type(v: Vector, H=None, tol: float = DEFAULT_TOL) -> str:
    val = inner(v, v, H)
    if v.mode == EXACT:
        s = v.field.sign(val)
    else:
        x = val.real
        scale = max(1.0, float(np.max(np.abs(v.to_numpy()))) ** 2)
        s = 0 if abs(x) <= tol * scale else (1 if x > 0 else -1)
    return {1: POSITIVE, 0: NULL, -1: NEGATIVE}[s]


def cosh2_half_distance(q1: Vector, q2: Vector, H=None):
    """|<q1,q2>|^2 / (<q1,q1><q2,q2>), exact when the inputs are."""
    for q in (q1, q2):
        if point_type(q, H) != NEGATIVE:
            raise NotInteriorPoint("distance needs negative-type lifts")
    a = inner(q1, q2, H)
    num = a * conj(a)
    den = inner(q1, q1, H) * inner(q2, q2, H)
    return num / den


def distance(q1: Vector, q2: Vector, H=None) -> float:
    r = cosh2_half_distance(q1, q2, H)
    x = complex(r).real
    return 2.0 * math.acosh(math.sqrt(max(1.0, x)))


# ---------------------------------------------------------------------------
# boundary and horospherical coordinates


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the boundary: infinity, or (z, t) in C x R (u = 0)."""

    z: object = 0
    t: object = 0
    infinity: bool = False

    def lift(self, field: NumberField | None = None) -> Vector:
        if self.infinity:
            return infinity_lift(field, EXACT if field is not None or _all_exact(self.z, self.t) else FLOAT)
        return horospherical_lift(self.z, self.t, 0, field=field)


def _all_exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction, FieldElement)) and not isinstance(x, bool) for x in xs)


def infinity_lift(field: NumberField | None = None, mode: str = EXACT) -> Vector:
    return Vector([1, 0, 0], field=field if mode == EXACT else None, mode=mode)


def origin_lift(field: NumberField | None = None, mode: str = EXACT) -> Vector:
    return Vector([0, 0, 1], field=field if mode == EXACT else None, mode=mode)


def horospherical_lift(z, t, u=0, field: NumberField | None = None, *, it=None) -> Vector:
    """The lift (-(|z|^2 + u - i t)/2, z, 1) of the point with coordinates (z, t, u).

    In exact mode `t` may be replaced by the element `it` = i*t, which avoids
    needing i in the field.
    """
    exact = field is not None or (_all_exact(z, u) and (it is not None and _all_exact(it) or _all_exact(t)))
    if not exact:
        z, t, u = complex(z), float(t if it is None else (complex(it) / 1j).real), float(complex(u).real)
        if u < 0:
            raise ValueError("u must be nonnegative")
        return Vector([-(abs(z) ** 2 + u - 1j * t) / 2, z, 1], mode=FLOAT)
    if field is None:
        fes = [x for x in (z, t, u, it) if isinstance(x, FieldElement)]
        field = fes[0].field if fes else QQ
    z, u = field(z), field(u)
    if it is None:
        t = field(t)
        if t.is_zero():
            it = field.zero
        else:
            i = field.imag_unit
            if i is None:
                raise FieldMismatch("i is not in the field; pass it= instead of t")
            it = i * t
    else:
        it = field(it)
    if field.sign(u) < 0:
        raise ValueError("u must be nonnegative")
    half = Fraction(1, 2)
    first = -(z * conj(z) + u - it) * half
    return Vector([first, z, field.one], field=field)


def horospherical_coordinates(v: Vector):
    """(z, it, u) of a non-positive vector with v3 != 0 (it = i*t).

    Returns None for a lift of infinity.
    """
    if (v[2].is_zero() if v.mode == EXACT else abs(v[2]) < DEFAULT_TOL):
        return None
    v = v.normalize_last()
    z = v[1]
    w = -2 * v[0] if v.mode == FLOAT else v[0] * (-2)
    half = 0.5 if v.mode == FLOAT else Fraction(1, 2)
    u = (w + conj(w)) * half - z * conj(z)
    it = (conj(w) - w) * half
    return z, it, u


# ---------------------------------------------------------------------------
# polar vectors, unitarity, Cayley transport


def polar_vector(p: Vector, q: Vector, H=None, tol: float = DEFAULT_TOL) -> Vector:
    """A vector c with <p, c> = <q, c> = 0 (unique up to scale)."""
    M = _form_matrix(H, p)
    c = (M @ p).cross(M @ q).conjugate()
    if p.mode == EXACT:
        if c.is_zero():
            raise ProportionalPoints("polar vector of proportional points")
        return c.normalize_last()
    scale = float(np.linalg.norm(p.to_numpy()) * np.linalg.norm(q.to_numpy())) or 1.0
    if c.is_zero(tol * scale):
        raise ProportionalPoints("polar vector of proportional points")
    return c


def is_special_unitary(M: Matrix, H=None, tol: float = DEFAULT_TOL) -> bool:
    if H is None:
        Hm = siegel_matrix(M.field, M.mode)
    else:
        Hm = H.matrix if isinstance(H, HermitianForm) else H
        if Hm.mode == EXACT and M.mode == EXACT and Hm.field != M.field and Hm.field == QQ:
            Hm = Hm.with_field(M.field)
    lhs = M.H @ Hm @ M
    if M.mode == EXACT:
        return lhs == Hm and M.det() == M.field.one
    scale = max(1.0, Hm.max_abs())
    return lhs.close_to(Hm, tol * scale * max(1.0, M.max_abs()) ** 2) and abs(M.det() - 1) <= tol * max(1.0, M.max_abs()) ** 3


def is_unitary(M: Matrix, H=None, tol: float = DEFAULT_TOL) -> bool:
    """M* H M = H, no determinant condition."""
    Hm = siegel_matrix(M.field, M.mode) if H is None else (H.matrix if isinstance(H, HermitianForm) else H)
    lhs = M.H @ Hm @ M
    if M.mode == EXACT:
        return lhs == Hm
    return lhs.close_to(Hm, tol * max(1.0, M.max_abs()) ** 2)


def cayley_conjugate(M: Matrix, C: Matrix) -> Matrix:
    """C M C^-1."""
    try:
        Ci = C.inverse()
    except (ZeroDivisionError, SingularTransform) as exc:
        raise SingularTransform("transform is not invertible") from exc
    return C @ M @ Ci


def transport_form(H, C: Matrix) -> Matrix:
    """C^-* H C^-1: the form preserved by C M C^-1 when M preserves H."""
    Hm = H.matrix if isinstance(H, HermitianForm) else H
    Ci = C.inverse()
    return Ci.H @ Hm @ Ci
