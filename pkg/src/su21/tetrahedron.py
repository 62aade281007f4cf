"""Ideal tetrahedra: cross-ratio invariants, reconstruction, invariant fields.

A tetrahedron is four null lifts p0..p3. Writing c01 for the polar vector of
p0, p1 and c23 for that of p2, p3, its invariant is the quadruple

    z1   = <p3,c01><p2,p0> / (<p2,c01><p3,p0>)
    z1'  = <p2,c01><p3,p1> / (<p3,c01><p2,p1>)
    z~1  = <p1,c23><p0,p2> / (<p0,c23><p1,p2>)
    z~1' = <p0,c23><p1,p3> / (<p1,c23><p0,p3>)

Every formula is homogeneous of degree 0 in each lift.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    DegeneratePosition,
    DegenerateTriple,
    FieldRepresentationFailure,
    InconsistentInvariant,
    ProportionalPoints,
    SingularSystem,
    ZeroDenominator,
)
from .hermitian import inner, polar_vector, siegel_matrix
from .linalg import DEFAULT_TOL, EXACT, FLOAT, Matrix, Vector, conj
from .numberfield import QQ, FieldElement, SubfieldBasis, subfield_generated

# Vertex order under which vertex_t returns i*t: p0 = 0, p1 = infinity,
# p2 = ((-1 + it)/2, 1, 1), the horospherical lift of (1, t). Swapping p0 and
# p1 negates the result.
STANDARD_ORDER = ("origin", "infinity", "(1,t)")


def _div(a, b):
    if (b.is_zero() if isinstance(b, FieldElement) else b == 0):
        raise ZeroDenominator("zero denominator")
    return a / b


@dataclass(frozen=True)
class TetraInvariant:
    z1: object
    z1p: object
    z1t: object
    z1tp: object

    def as_tuple(self):
        return (self.z1, self.z1p, self.z1t, self.z1tp)

    def conjugate(self) -> "TetraInvariant":
        return TetraInvariant(*(conj(x) for x in self.as_tuple()))


@dataclass(frozen=True)
class IdealTetrahedron:
    vertices: tuple[Vector, Vector, Vector, Vector]
    form: Matrix | None = None

    def __post_init__(self):
        if len(self.vertices) != 4:
            raise ValueError("a tetrahedron has four vertices")

    @property
    def mode(self):
        return self.vertices[0].mode

    def transform(self, M: Matrix) -> "IdealTetrahedron":
        return IdealTetrahedron(tuple(M @ v for v in self.vertices), self.form)


def _tol_zero(x, tol):
    if isinstance(x, FieldElement):
        return x.is_zero()
    return abs(x) <= tol


def genericity(T: IdealTetrahedron | Sequence[Vector], H=None, tol: float = 1e-9) -> bool:
    """No three vertices lie on one C-circle (boundary of a complex line)."""
    verts = T.vertices if isinstance(T, IdealTetrahedron) else tuple(T)
    H = H if H is not None else (T.form if isinstance(T, IdealTetrahedron) else None)
    for a, b, c in itertools.combinations(range(len(verts)), 3):
        try:
            pol = polar_vector(verts[a], verts[b], H)
        except ProportionalPoints:
            return False
        val = inner(verts[c], pol, H)
        if verts[0].mode == FLOAT:
            scale = float(np.linalg.norm(verts[c].to_numpy()) * np.linalg.norm(pol.to_numpy()))
            if abs(val) <= tol * max(scale, 1e-300):
                return False
        elif val.is_zero():
            return False
    return True


def invariants(T: IdealTetrahedron, H=None, check_generic: bool = True) -> TetraInvariant:
    H = H if H is not None else T.form
    if check_generic and not genericity(T, H):
        raise DegeneratePosition("three vertices lie on a common C-circle")
    p0, p1, p2, p3 = T.vertices
    c01 = polar_vector(p0, p1, H)
    c23 = polar_vector(p2, p3, H)

    def ip(a, b):
        return inner(a, b, H)

    z1 = _div(ip(p3, c01) * ip(p2, p0), ip(p2, c01) * ip(p3, p0))
    z1p = _div(ip(p2, c01) * ip(p3, p1), ip(p3, c01) * ip(p2, p1))
    z1t = _div(ip(p1, c23) * ip(p0, p2), ip(p0, c23) * ip(p1, p2))
    z1tp = _div(ip(p0, c23) * ip(p1, p3), ip(p1, c23) * ip(p0, p3))
    return TetraInvariant(z1, z1p, z1t, z1tp)


def _conj_formula(z1, z1p, z1t, z1tp):
    num = (-z1p + z1 * z1p + z1tp * z1p - z1tp) * z1t
    den = z1t * z1 - z1t + z1 * z1p - z1
    return _div(num, den)


def conjugate_z1(inv: TetraInvariant):
    """conj(z1) expressed through the four invariants."""
    return _conj_formula(inv.z1, inv.z1p, inv.z1t, inv.z1tp)


# The same relation applied to relabelled tetrahedra. Relabelling the
# vertices by (1,0,3,2), (2,3,0,1) and (3,2,1,0) permutes the invariant tuple
# as below; these three are derived, not displayed formulas.
def conjugate_z1p(inv: TetraInvariant):
    return _conj_formula(inv.z1p, inv.z1, inv.z1tp, inv.z1t)


def conjugate_z1t(inv: TetraInvariant):
    return _conj_formula(inv.z1t, inv.z1tp, inv.z1, inv.z1p)


def conjugate_z1tp(inv: TetraInvariant):
    return _conj_formula(inv.z1tp, inv.z1t, inv.z1p, inv.z1)


def conjugate_invariant(inv: TetraInvariant) -> TetraInvariant:
    return TetraInvariant(conjugate_z1(inv), conjugate_z1p(inv), conjugate_z1t(inv), conjugate_z1tp(inv))


def vertex_t(inv: TetraInvariant):
    """i*t of the third vertex for a tetrahedron in STANDARD_ORDER."""
    a = inv.z1t * (inv.z1 - 1)
    b = inv.z1 * (inv.z1p - 1)
    return _div(a - b, a + b)


def standard_vertices(it, field=None) -> tuple[Vector, Vector, Vector]:
    """Lifts of 0, infinity and (1, t) in STANDARD_ORDER, given it = i*t."""
    if isinstance(it, FieldElement) or field is not None:
        F = field or it.field
        it = F(it)
        half = Fraction(1, 2)
        return (
            Vector([0, 0, 1], field=F),
            Vector([1, 0, 0], field=F),
            Vector([(it - 1) * half, 1, 1], field=F),
        )
    it = complex(it)
    return (
        Vector([0, 0, 1], mode=FLOAT),
        Vector([1, 0, 0], mode=FLOAT),
        Vector([(it - 1) / 2, 1, 1], mode=FLOAT),
    )


def reconstruct_p3(p0: Vector, p1: Vector, p2: Vector, inv: TetraInvariant, H=None, tol: float = 1e-8) -> Vector:
    """The fourth vertex determined by three vertices and the invariant."""
    c01 = polar_vector(p0, p1, H)
    k = inner(c01, p2, H)
    v1 = c01 - p0.scale(_div(k * conj(inv.z1), inner(p0, p2, H)))
    v2 = c01 - p1.scale(_div(k, inner(p1, p2, H) * conj(inv.z1p)))
    try:
        p3 = polar_vector(v1, v2, H)
    except ProportionalPoints as exc:
        raise SingularSystem("the two orthogonality conditions are dependent") from exc
    norm = inner(p3, p3, H)
    scale = float(np.linalg.norm(p3.to_numpy())) ** 2
    if not _tol_zero(norm, tol * scale):
        raise InconsistentInvariant("reconstructed vertex is not null")
    if p3.mode == FLOAT:
        j = int(np.argmax(np.abs(p3.to_numpy())))
        p3 = p3.scale(1 / p3[2]) if abs(p3[2]) > tol * abs(p3[j]) else p3.scale(1 / p3[j])
    try:
        again = invariants(IdealTetrahedron((p0, p1, p2, p3), H), H)
    except (DegeneratePosition, ZeroDivisionError) as exc:
        raise InconsistentInvariant("reconstructed tetrahedron is degenerate") from exc
    for a, b in zip(again.as_tuple(), inv.as_tuple()):
        if not _tol_zero(a - b, tol * max(1.0, abs(complex(b)))):
            raise InconsistentInvariant("invariant is not realized by any fourth vertex")
    return p3


# ---------------------------------------------------------------------------
# triples of boundary points


@dataclass(frozen=True)
class TripleResult:
    """Data of the matrix sending (infinity, 0, (1,t)) to a triple (p0, p1, p2)."""

    it: object  # i*t of the source point (1, t); determined by the triple
    lambda_abs2: object
    lambda_cubed: object
    m_over_lambda: Matrix
    cube: Matrix
    candidates: tuple[Matrix, ...]

    @property
    def source(self) -> Vector:
        half = Fraction(1, 2) if self.cube.mode == EXACT else 0.5
        F = self.cube.field
        if self.cube.mode == EXACT:
            return Vector([(self.it - 1) * half, 1, 1], field=F)
        return Vector([(self.it - 1) * half, 1, 1], mode=FLOAT)


def triple_to_matrix(p0: Vector, p1: Vector, p2: Vector, H=None) -> TripleResult:
    """Special unitary M with M(inf) ~ p0, M(0) ~ p1, M((1,t)) ~ p2.

    M = [mu p0, kappa m0, lam p1] with m0 the polar vector of p0, p1. Only
    |lam|^2 and lam^3 are rational in the coordinates, so lam is fixed up to
    a cube root of unity; M^3 = lam^3 (M/lam)^3 is always rational.
    """
    exact = p0.mode == EXACT
    try:
        m0 = polar_vector(p0, p1, H)
    except ProportionalPoints as exc:
        raise DegenerateTriple("p0 and p1 coincide") from exc

    def ip(a, b):
        return inner(a, b, H)

    try:
        x = _div(ip(p2, p0), ip(p1, p0) * ip(p2, p1))
        it = _div(x - conj(x), x + conj(x))
    except ZeroDivisionError as exc:
        raise DegenerateTriple("points are not pairwise distinct or lie on a C-circle") from exc
    half = Fraction(1, 2) if exact else 0.5
    s1 = (it - 1) * half
    lam2 = s1 * ip(p2, p0) / (ip(p2, p1) * ip(p1, p0))
    det012 = Matrix.from_columns([p0, p1, p2]).det()
    D = Matrix.from_columns([p0, m0, p1]).det()
    if _tol_zero(det012, 1e-14) or _tol_zero(D, 1e-14):
        raise DegenerateTriple("points are dependent")
    lam3 = -(s1 * ip(p0, p1) * ip(p2, p0) ** 2) / (det012 * ip(p2, p1) * ip(p1, p0) ** 2)
    a01 = ip(p0, p1)
    mu_l = 1 / (lam2 * a01) if not exact else (lam2 * a01).inverse()
    ka_l = lam2 * a01 / (lam3 * D)
    B = Matrix.from_columns([p0.scale(mu_l), m0.scale(ka_l), p1])
    cube = (B @ B @ B).scale(lam3)
    if exact:
        lams = p0.field.roots_of(lam3, 3)
    else:
        r = complex(lam3) ** (1 / 3)
        w = np.exp(2j * np.pi / 3)
        lams = [r, r * w, r * w * w]
    cands = tuple(B.scale(lam) for lam in lams)
    return TripleResult(it, lam2, lam3, B, cube, cands)


# ---------------------------------------------------------------------------
# invariant fields


@dataclass(frozen=True)
class InvariantFieldReport:
    field: SubfieldBasis
    coordinate_field: SubfieldBasis | None = None
    equal: bool | None = None


def invariant_field(tetrahedra: Sequence[IdealTetrahedron], normalized: bool = False, H=None, ambient=None) -> InvariantFieldReport:
    """k_Delta: field generated by all invariants (and conjugates).

    With normalized=True the field of vertex coordinates (normalized lifts,
    infinity excluded) is computed too and compared.
    """
    tetrahedra = list(tetrahedra)
    if not tetrahedra:
        F = ambient or QQ
        return InvariantFieldReport(subfield_generated([], F), subfield_generated([], F) if normalized else None, True if normalized else None)
    if any(T.mode != EXACT for T in tetrahedra):
        raise FieldRepresentationFailure("invariant fields need exact vertex coordinates")
    fields = {T.vertices[0].field for T in tetrahedra}
    if len(fields) != 1:
        raise FieldRepresentationFailure("tetrahedra over different number fields")
    F = fields.pop()
    vals = []
    for T in tetrahedra:
        for z in invariants(T, H).as_tuple():
            vals.extend([z, conj(z)])
    K = subfield_generated(vals, F)
    if not normalized:
        return InvariantFieldReport(K)
    coords = []
    for T in tetrahedra:
        for v in T.vertices:
            if v[2].is_zero():
                continue
            w = v.scale(v[2].inverse())
            coords.extend([w[0], conj(w[0]), w[1], conj(w[1])])
    C = subfield_generated(coords, F)
    return InvariantFieldReport(K, C, K.same_span(C))
