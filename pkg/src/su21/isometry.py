"""Classification of SU(2,1) elements, standard parabolic forms and lifts.

Classification is trace based. For A in SU(2,1) with trace tau the sign of

    f(tau) = |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27

separates loxodromic (f > 0) from regular elliptic (f < 0) elements. When
f = 0 there is a repeated eigenvalue e, which lies in the field generated by
the entries, and the minimal polynomial decides between parabolic and
elliptic.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import (
    BoundaryCase,
    CubeRootUnavailable,
    DegenerateDenominator,
    NotParabolic,
    NotUnitary,
    UnipotentTrace,
)
from .hermitian import BoundaryPoint, inner, is_special_unitary, point_type
from .linalg import DEFAULT_TOL, EXACT, FLOAT, Matrix, Vector, conj
from .numberfield import QQ, FieldElement, NumberField

ELLIPTIC = "elliptic"
VERTICAL = "pure_parabolic_vertical"
HORIZONTAL = "pure_parabolic_horizontal"
SCREW = "screw_parabolic"
LOXODROMIC = "loxodromic"
PARABOLIC_TAGS = (VERTICAL, HORIZONTAL, SCREW)

OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class IsometryClass:
    tag: str
    trace: object
    discriminant: object
    eigenvalue: object = None  # e^{i theta} for parabolics, lambda for loxodromics
    eigenvalues_approx: tuple = ()
    fixed_points: tuple = ()
    nilpotency_index: int | None = None

    @property
    def is_parabolic(self) -> bool:
        return self.tag in PARABOLIC_TAGS


def goldman_discriminant(tau):
    a2 = tau * conj(tau)
    t3 = tau * tau * tau
    re3 = (t3 + conj(t3)) * (Fraction(1, 2) if isinstance(tau, FieldElement) else 0.5)
    return a2 * a2 - 8 * re3 + 18 * a2 - 27


# ---------------------------------------------------------------------------
# polynomial helpers over a field (coefficient lists, low degree first)


def _strip(p):
    while len(p) > 1 and p[-1].is_zero():
        p = p[:-1]
    return p


def _poly_rem(a, b):
    a = list(a)
    zero = b[-1].field.zero
    inv = b[-1].inverse()
    while len(a) >= len(b):
        q = a[-1] * inv
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[shift + k] = a[shift + k] - q * c
        a.pop()
    return _strip(a) if a else [zero]


def _poly_gcd(a, b):
    a, b = _strip(a), _strip(b)
    while not (len(b) == 1 and b[0].is_zero()):
        a, b = b, _poly_rem(a, b)
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _nilpotency_index(N: Matrix, tol: float) -> int:
    P = N
    for k in range(1, 4):
        if P.is_zero(tol):
            return k
        P = P @ N
    return 4


def _column_point(M: Matrix, tol: float) -> Vector:
    """A nonzero column of M, scaled to a canonical lift."""
    cols = M.columns()
    best = max(cols, key=lambda c: max(abs(complex(x)) for x in c))
    return canonical_lift(best, tol)


def canonical_lift(v: Vector, tol: float = DEFAULT_TOL) -> Vector:
    """Scale so the last coordinate is 1, or the first when the last vanishes (infinity)."""
    if v.mode == EXACT:
        if not v[2].is_zero():
            return v.scale(v[2].inverse())
        return v.normalize_last() if v[0].is_zero() else v.scale(v[0].inverse())
    scale = max(abs(x) for x in v)
    if abs(v[2]) > tol * scale:
        return v.scale(1 / v[2])
    return v.scale(1 / v[0]) if abs(v[0]) > tol * scale else v


def _eigen_approx(M: Matrix):
    return tuple(sorted((complex(x) for x in np.linalg.eigvals(M.to_numpy())), key=lambda z: (-abs(z), z.real, z.imag)))


def classify(M: Matrix, H=None, tol: float = DEFAULT_TOL, check: bool = True, details: bool = True) -> IsometryClass:
    """Tag an element of SU(H) as elliptic, parabolic (three kinds) or loxodromic.

    details=False skips the exact eigenvalue search for loxodromics.
    """
    if check and not is_special_unitary(M, H, tol):
        raise NotUnitary("matrix is not in SU(2,1) for this form")
    tau = M.trace()
    f = goldman_discriminant(tau)
    approx = _eigen_approx(M)
    if M.mode == EXACT:
        return _classify_exact(M, H, tau, f, approx, details)
    return _classify_float(M, H, tau, f, approx, tol)


def _classify_exact(M, H, tau, f, approx, details=True):
    F = M.field
    s = F.sign(f)
    if s > 0:
        if not details:
            return IsometryClass(LOXODROMIC, tau, f, approx[0], approx)
        return _loxodromic(M, H, tau, f, approx)
    if s < 0:
        return IsometryClass(ELLIPTIC, tau, f, None, approx)
    e, e2 = repeated_eigenvalue(M)
    if e == e2:
        N = M.minus_scalar(e)
        idx = _nilpotency_index(N, 0.0)
        if idx == 1:
            return IsometryClass(ELLIPTIC, tau, f, e, approx, (), 1)
        tag = VERTICAL if idx == 2 else HORIZONTAL
        fp = _column_point(N if idx == 2 else N @ N, 0.0)
        return IsometryClass(tag, tau, f, e, approx, (fp,), idx)
    R = M.minus_scalar(e) @ M.minus_scalar(e2)
    if R.is_zero():
        return IsometryClass(ELLIPTIC, tau, f, e, approx)
    return IsometryClass(SCREW, tau, f, e, approx, (_column_point(R, 0.0),), None)


def repeated_eigenvalue(M: Matrix):
    """(e, e') with charpoly (x-e)^2 (x-e'), assuming f(tau) = 0; exact mode.

    e is the double root of the characteristic polynomial, obtained as the
    root of gcd(p, p'); it lies in the field of the entries.
    """
    F = M.field
    tau = M.trace()
    if (tau * tau * tau) == F(27):
        e = tau * Fraction(1, 3)
        return e, e
    # x^3 - tau x^2 + conj(tau) x - 1
    p = [F(-1), conj(tau), -tau, F.one]
    dp = [conj(tau), -2 * tau, F(3)]
    g = _poly_gcd(p, dp)
    if len(g) != 2:
        raise NotParabolic("characteristic polynomial has no repeated root")
    e = -g[0]
    return e, (e * e).inverse()


def _loxodromic(M, H, tau, f, approx):
    lam = approx[0]
    fixed = ()
    if M.mode == EXACT:
        F = M.field
        p = [F(-1), conj(tau), -tau, F.one]
        roots = [r for r in F.poly_roots(p) if abs(complex(r)) > 1]
        if roots:
            lam = roots[0]
            fixed = _lox_fixed_exact(M, lam)
        else:
            fixed = _lox_fixed_float(M)
    else:
        fixed = _lox_fixed_float(M)
    return IsometryClass(LOXODROMIC, tau, f, lam, approx, fixed)


def _lox_fixed_exact(M, lam):
    pts = []
    for val in (lam, conj(lam).inverse()):
        ker = M.minus_scalar(val).nullspace()
        if ker:
            pts.append(canonical_lift(ker[0]))
    return tuple(pts)


def _lox_fixed_float(M):
    Mf = M.to_complex()
    w, V = np.linalg.eig(Mf.to_numpy())
    order = np.argsort(-np.abs(w))
    pts = []
    for k in (order[0], order[-1]):
        pts.append(canonical_lift(Vector._raw((complex(x) for x in V[:, k]), FLOAT, None)))
    return tuple(pts)


def _classify_float(M, H, tau, f, approx, tol):
    f = f.real
    m = max(1.0, M.max_abs())
    # a Jordan block perturbed by tol moves eigenvalue moduli by about (tol m^3)^(1/3)
    eta = (tol * m**3) ** (1 / 3)
    r = max(abs(math.log(abs(z))) for z in approx)
    if r > 5 * eta:
        return _loxodromic(M, H, tau, f, approx)
    if r > 2 * eta:
        raise BoundaryCase(f"eigenvalue modulus {math.exp(r):.6g} is too close to 1 to decide the class")
    scale = (1 + abs(tau)) ** 4
    lo, hi = 1e2 * tol * scale * m, 1e5 * tol * scale * m
    if f > hi:
        return _loxodromic(M, H, tau, f, approx)
    if f < -hi:
        return IsometryClass(ELLIPTIC, tau, f, None, approx)
    if abs(f) > lo:
        raise BoundaryCase(f"discriminant {f:.3e} is too close to 0 to decide the class")
    # repeated eigenvalue: cube roots of unity when tau ~ 3 omega^k, else the closest pair
    k = min(range(3), key=lambda j: abs(tau - 3 * OMEGA**j))
    if abs(tau - 3 * OMEGA**k) <= 1e3 * tol * m:
        e = OMEGA**k
        N = M.minus_scalar(e)
        small, big = 1e3 * tol * m, 1e-4 * m
        sizes = [N.max_abs(), (N @ N).max_abs()]
        if sizes[0] <= small:
            return IsometryClass(ELLIPTIC, tau, f, e, approx, (), 1)
        if sizes[0] < big:
            raise BoundaryCase("element is within tolerance of a scalar")
        if sizes[1] <= small * m:
            return IsometryClass(VERTICAL, tau, f, e, approx, (_column_point(N, tol),), 2)
        if sizes[1] < big * m:
            raise BoundaryCase("nilpotency index undecidable at this tolerance")
        if (N @ N @ N).max_abs() > small * m * m:
            raise BoundaryCase("element is not unipotent within tolerance")
        return IsometryClass(HORIZONTAL, tau, f, e, approx, (_column_point(N @ N, tol),), 3)
    ev = list(approx)
    pairs = [(abs(ev[a] - ev[b]), a, b) for a in range(3) for b in range(a + 1, 3)]
    _, a, b = min(pairs)
    e = (ev[a] + ev[b]) / 2
    e /= abs(e)
    e2 = 1 / (e * e)
    R = M.minus_scalar(e) @ M.minus_scalar(e2)
    r = R.max_abs()
    if r <= 1e3 * tol * m * m:
        return IsometryClass(ELLIPTIC, tau, f, e, approx)
    if r < 1e-4 * m * m:
        raise BoundaryCase("Jordan defect undecidable at this tolerance")
    return IsometryClass(SCREW, tau, f, e, approx, (_column_point(R, tol),))


# ---------------------------------------------------------------------------
# standard forms


def _exp_i(theta):
    return cmath.exp(1j * theta)


def standard_parabolic(theta=0.0, z=0, t=0, *, eitheta=None, it=None, field: NumberField | None = None) -> Matrix:
    """Lift of a parabolic fixing infinity with rotation e^{i theta}, translation (z, t).

    Exact mode: pass `eitheta` (a unit of the field) and `it` (= i t) or
    rational `t` with i in the field.
    """
    exact = field is not None or isinstance(eitheta, FieldElement) or isinstance(it, FieldElement)
    if not exact:
        e = _exp_i(theta) if eitheta is None else complex(eitheta)
        z = complex(z)
        itv = 1j * float(t) if it is None else complex(it)
        e3 = (1 / e) ** 3
        rows = [
            [1, -z.conjugate() * e3, -(abs(z) ** 2 - itv) / 2],
            [0, e3, z],
            [0, 0, 1],
        ]
        return Matrix([[e * x for x in r] for r in rows], mode=FLOAT)
    if field is None:
        field = next(x.field for x in (eitheta, it, z) if isinstance(x, FieldElement))
    e = field.one if eitheta is None else field(eitheta)
    z = field(z)
    if it is None:
        t = field(t)
        it = field.zero if t.is_zero() else _need_i(field) * t
    it = field(it)
    e3 = conj(e) ** 3
    half = Fraction(1, 2)
    rows = [
        [field.one, -conj(z) * e3, -(z * conj(z) - it) * half],
        [field.zero, e3, z],
        [field.zero, field.zero, field.one],
    ]
    return Matrix([[e * x for x in r] for r in rows], field=field)


def _need_i(field: NumberField):
    i = field.imag_unit
    if i is None:
        raise ValueError("i is not in the field; pass it= explicitly")
    return i


def loxodromic_lift(lam, field: NumberField | None = None) -> Matrix:
    """diag(lambda, conj(lambda)/lambda, 1/conj(lambda)): fixes 0 and infinity."""
    if isinstance(lam, FieldElement) or field is not None:
        lam = (field or lam.field)(lam)
        return Matrix.diag([lam, conj(lam) / lam, conj(lam).inverse()], field=lam.field)
    lam = complex(lam)
    return Matrix.diag([lam, lam.conjugate() / lam, 1 / lam.conjugate()], mode=FLOAT)


def parabolic_eigenvalue_from_trace(tr, conj_tr=None, *, allow_unipotent: bool = True, tol: float = 1e-12):
    """e^{i theta} from the trace of a parabolic with eigenvalues e, e, e^{-2 i theta}."""
    if conj_tr is None:
        conj_tr = conj(tr)
    exact = isinstance(tr, FieldElement)
    if exact:
        F = tr.field
        cube = tr * tr * tr
        if cube == F(27):
            if allow_unipotent:
                return tr * Fraction(1, 3)
            raise UnipotentTrace("trace is 3 omega^k; the eigenvalue is omega^k")
        half = Fraction(1, 2)
        re = (tr + conj_tr) * half
        denom = 2 * re + 3
        if denom.is_zero():
            raise DegenerateDenominator("2 Re(tr) + 3 = 0")
        abs2 = tr * conj_tr
        cos = ((abs2 - 5) * Fraction(1, 4) + 2 * re + 2) / denom
        isin = (tr - conj_tr) * half / (2 * (1 - cos))
        return cos + isin
    tr, conj_tr = complex(tr), complex(conj_tr)
    k = min(range(3), key=lambda j: abs(tr - 3 * OMEGA**j))
    if abs(tr - 3 * OMEGA**k) <= 1e-9:
        if allow_unipotent:
            return OMEGA**k
        raise UnipotentTrace("trace is 3 omega^k; the eigenvalue is omega^k")
    re = ((tr + conj_tr) / 2).real
    denom = 2 * re + 3
    if abs(denom) <= tol:
        raise DegenerateDenominator("2 Re(tr) + 3 = 0")
    cos = (((tr * conj_tr).real - 5) / 4 + 2 * re + 2) / denom
    isin = ((tr - conj_tr) / 2) / (2 * (1 - cos))
    return cos + isin


def parabolic_fixed_point(P: Matrix, H=None, tol: float = DEFAULT_TOL) -> Vector:
    """Lift of the boundary fixed point of a parabolic, (w1, w2, 1) or (1, 0, 0)."""
    c = classify(P, H, tol, check=False)
    if not c.is_parabolic:
        raise NotParabolic(f"element is {c.tag}")
    return c.fixed_points[0]


def fixed_point_as_boundary(v: Vector) -> BoundaryPoint:
    from .hermitian import horospherical_coordinates

    hc = horospherical_coordinates(v)
    if hc is None:
        return BoundaryPoint(infinity=True)
    z, it, _ = hc
    t = (it / 1j).real if v.mode == FLOAT else it
    return BoundaryPoint(z, t)


# ---------------------------------------------------------------------------
# lifts and boundary action


@dataclass(frozen=True)
class LiftTriple:
    lifts: tuple
    omega: object


def omega_for(M: Matrix):
    if M.mode == FLOAT:
        return OMEGA
    w = M.field.omega
    if w is None:
        raise CubeRootUnavailable("the field has no primitive cube root of unity")
    return w


def lifts(M: Matrix) -> LiftTriple:
    w = omega_for(M)
    return LiftTriple((M, M.scale(w), M.scale(w * w)), w)


def loxodromic_boundary_action(lam, p: BoundaryPoint) -> BoundaryPoint:
    """(z, t) -> (conj(lam)^2/lam z, |lam|^2 t); infinity is fixed."""
    if p.infinity:
        return p
    if not isinstance(lam, FieldElement):
        lam = complex(lam)
        return BoundaryPoint(lam.conjugate() ** 2 / lam * complex(p.z), abs(lam) ** 2 * float(p.t))
    lc = conj(lam)
    return BoundaryPoint(lc * lc / lam * p.z, lam * lc * p.t)
