"""Arithmetic groups of the first type: CM extensions, admissible forms, integrality.

Places of the totally real field F are represented by embeddings of E (root
indices of E's minimal polynomial), one from each complex-conjugate pair,
with the identity place first. Signatures at a place are certified: the
characteristic polynomial of H has coefficients in F, their images are real,
and for a Hermitian form it is real-rooted, so Descartes' rule is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Sequence

import mpmath
import numpy as np
import sympy

from . import qlinalg
from .errors import (
    DegenerateForm,
    EntryOutsideField,
    HypothesisNotCertified,
    NoIntegralBasis,
    NotLoxodromic,
    WrongSignatureAtIdentity,
)
from .hermitian import HermitianForm, charpoly, descartes_signature, signature
from .isometry import LOXODROMIC, classify
from .linalg import EXACT, FLOAT, Matrix
from .numberfield import FieldElement, NumberField, SubfieldBasis, subfield_generated
from .tracefield import Word, enumerate_words, trace_field


@dataclass(frozen=True)
class CMExtension:
    E: NumberField
    F_basis: SubfieldBasis
    places: tuple[int, ...]  # root indices of E, identity first

    @property
    def d(self) -> int:
        return len(self.places)


def cm_extension(E: NumberField, place_hints: Sequence | None = None) -> CMExtension:
    """E over its real subfield F, with one embedding per place of F.

    place_hints, if given, are approximate images of E's generator selecting
    the embeddings; otherwise the one with positive imaginary part is taken
    from each conjugate pair.
    """
    F = E.real_subfield()
    if 2 * F.degree != E.degree:
        raise ValueError("E is not a quadratic extension of its real subfield")
    roots = E.embeddings()
    if any(abs(r.imag) < 1e-12 for r in roots):
        raise ValueError("E is not totally imaginary")
    # F totally real: basis elements real at every embedding
    for b in F.basis:
        for j in range(E.degree):
            if abs(complex(E.embed(b, 80, index=j)).imag) > 1e-15 * (1 + abs(complex(E.embed(b, 80, index=j)))):
                raise ValueError("the real subfield is not totally real")
    if place_hints is not None:
        places = []
        for h in place_hints:
            h = complex(*h) if isinstance(h, (list, tuple)) else complex(h)
            places.append(min(range(len(roots)), key=lambda k: abs(roots[k] - h)))
        if places[0] != E.root_index:
            raise ValueError("the first place must be the identity embedding")
    else:
        places = [E.root_index]
        for k, r in enumerate(roots):
            paired = min(range(len(roots)), key=lambda j: abs(roots[j] - r.conjugate()))
            if k in places or paired in places:
                continue
            places.append(k if r.imag > 0 else paired)
    if len(places) != F.degree:
        raise ValueError("places do not match the degree of F")
    return CMExtension(E, F, tuple(places))


# ---------------------------------------------------------------------------
# forms at places


def _certified_sign(E: NumberField, a: FieldElement, index: int) -> int:
    """Sign of the real number tau(a), tau the embedding `index`."""
    if a.is_zero():
        return 0
    prec = 64
    while True:
        lo, hi = E.embed(a, prec, index=index).real_interval()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
        if prec > 1 << 14:  # pragma: no cover
            raise DegenerateForm("sign at a place could not be certified")


def galois_conjugate_form(H: Matrix, ext: CMExtension, place: int) -> Matrix:
    """^tau H for the place ext.places[place].

    Exact when the embedding is induced by an automorphism of E, otherwise a
    float matrix of the embedded entries.
    """
    if H.mode != EXACT or H.field != ext.E:
        raise EntryOutsideField("form entries must lie in E")
    idx = ext.places[place]
    if idx == ext.E.root_index:
        return H
    aut = ext.E.automorphism_to(idx)
    if aut is not None:
        _, mapping = aut
        return Matrix._raw(([ext.E.apply_homomorphism(mapping, x) for x in r] for r in H.rows), EXACT, ext.E)
    return Matrix.from_numpy([[complex(ext.E.embed(x, 60, index=idx).mid) for x in r] for r in H.rows])


def signature_at_place(H: Matrix, ext: CMExtension, place: int) -> tuple[int, int]:
    idx = ext.places[place]
    return descartes_signature([_certified_sign(ext.E, c, idx) for c in charpoly(H)])


@dataclass(frozen=True)
class AdmissiblePair:
    H: Matrix
    ext: CMExtension
    admissible: bool
    signatures: tuple[tuple[int, int], ...]
    conjugate_forms: tuple[Matrix, ...] = dc_field(default=(), repr=False)


def is_admissible(H, ext: CMExtension) -> AdmissiblePair:
    """Signature (n,1) at the identity, definite at every other place."""
    Hm = H.matrix if isinstance(H, HermitianForm) else H
    if Hm.mode != EXACT or Hm.field != ext.E:
        raise EntryOutsideField("form entries must lie in E")
    n1 = Hm.shape[0]
    sigs = tuple(signature_at_place(Hm, ext, k) for k in range(ext.d))
    if sigs[0] != (n1 - 1, 1):
        raise WrongSignatureAtIdentity(f"signature at the identity place is {sigs[0]}")
    ok = all(s in ((n1, 0), (0, n1)) for s in sigs[1:])
    forms = tuple(galois_conjugate_form(Hm, ext, k) for k in range(ext.d))
    return AdmissiblePair(Hm, ext, ok, sigs, forms)


# ---------------------------------------------------------------------------
# integrality


def multiplication_matrix(a: FieldElement, basis: Sequence[FieldElement] | None = None) -> list[list[Fraction]]:
    """Matrix of x -> a x on the Q-span of `basis` (default: powers of the generator).

    The span must be a subfield containing a.
    """
    E = a.field
    if basis is None:
        basis = [E.gen**k for k in range(E.degree)]
    A = [[b.coords[i] for b in basis] for i in range(E.degree)]
    cols = qlinalg.solve_many(A, [list((a * b).coords) for b in basis])
    if cols is None:
        raise EntryOutsideField("element does not preserve the given span")
    n = len(basis)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def is_algebraic_integer(a: FieldElement, basis: Sequence[FieldElement] | None = None) -> bool:
    cp = qlinalg.charpoly(multiplication_matrix(a, basis), one=Fraction(1))
    return all(Fraction(c).denominator == 1 for c in cp)


@dataclass(frozen=True)
class IntegralityWitness:
    """A Z-basis of O_E, as elements of some ambient field containing E."""

    integral_basis: tuple[FieldElement, ...]

    def coordinates(self, a: FieldElement) -> tuple[Fraction, ...] | None:
        B = self.integral_basis
        A = [[b.coords[i] for b in B] for i in range(len(a.coords))]
        return None if (x := qlinalg.solve(A, list(a.coords))) is None else tuple(x)


def _squarefree_sqrt(delta: FieldElement) -> tuple[int, FieldElement]:
    """Given delta with delta^2 rational, return (m, s) with s = sqrt(m), m squarefree."""
    D = (delta * delta).to_fraction()
    N = D.numerator * D.denominator
    sign = -1 if N < 0 else 1
    k, m = 1, sign
    for p, e in sympy.factorint(abs(N)).items():
        k *= p ** (e // 2)
        if e % 2:
            m *= p
    return m, delta * Fraction(D.denominator, k)


def _refine(order: list[FieldElement], den: int) -> list[FieldElement]:
    """Integral closure inside (1/den) * Z-span(order), by testing every coset."""
    n = len(order)
    vecs = [[den if i == j else 0 for j in range(n)] for i in range(n)]
    for combo in product(range(den), repeat=n):
        if not any(combo):
            continue
        x = order[0] * 0
        for c, b in zip(combo, order):
            x = x + b * c
        x = x * Fraction(1, den)
        if is_algebraic_integer(x, order):
            vecs.append(list(combo))
    basis = qlinalg.lattice_basis(vecs)
    out = []
    for v in basis:
        x = order[0] * 0
        for c, b in zip(v, order):
            x = x + b * c
        out.append(x * Fraction(1, den))
    return out


def quadratic_integral_basis(s: FieldElement, m: int) -> tuple[FieldElement, FieldElement]:
    one = s.field.one
    if m % 4 == 1:
        return one, (one + s) * Fraction(1, 2)
    return one, s


def biquadratic_integral_basis(s1: FieldElement, m1: int, s2: FieldElement, m2: int) -> list[FieldElement]:
    """Z-basis of the ring of integers of Q(sqrt m1, sqrt m2)."""
    g = math.gcd(m1, m2)
    s3 = s1 * s2 * Fraction(1, g)
    order = [s1.field.one, s1, s2, s3]
    return _refine(order, 4)


def _quadratic_subfield_generators(E: NumberField):
    """Square roots of squarefree integers generating E (degree 2 or biquadratic 4)."""
    if E.degree == 2:
        delta = 2 * E.gen + E.minpoly[1]
        return [_squarefree_sqrt(delta)]
    if E.degree != 4:
        raise NoIntegralBasis(f"integral bases are built only for degree 2 and 4 fields, not {E.degree}")
    auts = {}
    for idx in range(E.degree):
        aut = E.automorphism_to(idx)
        if aut is None:
            raise NoIntegralBasis("quartic field is not Galois")
        if idx != E.root_index:
            auts[idx] = aut[1]
    if any(E.apply_homomorphism(m, E.apply_homomorphism(m, E.gen)) != E.gen for m in auts.values()):
        raise NoIntegralBasis("quartic field is cyclic, not biquadratic")
    found: dict[int, FieldElement] = {}
    for idx, sigma in auts.items():
        mat, den = sigma
        A = [[Fraction(mat[i][j], den) - (1 if i == j else 0) for j in range(4)] for i in range(4)]
        b = next(x for x in (E.element(v) for v in qlinalg.nullspace(A)) if not x.is_rational())
        # b = r + s sqrt(m); another automorphism flips the sign of sqrt(m)
        tau = next(m for k, m in auts.items() if k != idx)
        m, root = _squarefree_sqrt((b - E.apply_homomorphism(tau, b)) * Fraction(1, 2))
        found.setdefault(m, root)
    return [(m, found[m]) for m in sorted(found)[:2]]


def integral_basis(E: NumberField) -> IntegralityWitness:
    """Z-basis of O_E for Q, quadratic and biquadratic fields."""
    if E.degree == 1:
        return IntegralityWitness((E.one,))
    gens = _quadratic_subfield_generators(E)
    if E.degree == 2:
        m, s = gens[0]
        return IntegralityWitness(quadratic_integral_basis(s, m))
    (m1, s1), (m2, s2) = gens
    return IntegralityWitness(tuple(biquadratic_integral_basis(s1, m1, s2, m2)))


def subfield_integral_basis(sqrts: Sequence[tuple[int, FieldElement]]) -> IntegralityWitness:
    """O_E for E = Q(sqrt m) or Q(sqrt m1, sqrt m2) sitting inside a larger field."""
    if len(sqrts) == 1:
        m, s = sqrts[0]
        return IntegralityWitness(quadratic_integral_basis(s, m))
    if len(sqrts) == 2:
        (m1, s1), (m2, s2) = sqrts
        return IntegralityWitness(tuple(biquadratic_integral_basis(s1, m1, s2, m2)))
    raise NoIntegralBasis("only one or two square roots are supported")


def is_integral(M: Matrix, witness: IntegralityWitness, strict: bool = False) -> bool:
    """Every entry has integer coordinates over the integral basis.

    An entry outside E gives False, or EntryOutsideField when strict.
    """
    for x in M.entries():
        c = witness.coordinates(x)
        if c is None:
            if strict:
                raise EntryOutsideField("entry is not in E")
            return False
        if any(v.denominator != 1 for v in c):
            return False
    return True


# ---------------------------------------------------------------------------
# traces of powers


@dataclass(frozen=True)
class TraceGrowth:
    values: tuple[float, ...]  # |Tr g^m| for m = 1..m_max
    spectral_radius: float
    dominant: bool  # |Tr g^m| >= rho^m - n for the second half of the range


def trace_sequence(g: Matrix, m_max: int, place: int | None = None) -> list[float]:
    """|Tr g^m| for m = 1..m_max, optionally at the embedding with root index `place`."""
    out = []
    P = g
    for _ in range(m_max):
        tr = P.trace()
        if place is not None and g.mode == EXACT:
            out.append(abs(complex(g.field.embed(tr, 80, index=place).mid)))
        else:
            out.append(abs(complex(tr)))
        P = P @ g
    return out


def trace_growth(g: Matrix, m_max: int = 30) -> TraceGrowth:
    ev = np.linalg.eigvals(g.to_numpy())
    rho = float(np.max(np.abs(ev)))
    if rho <= 1 + 1e-9:
        raise NotLoxodromic("all eigenvalues have modulus 1")
    vals = trace_sequence(g, m_max)
    n = g.shape[0] - 1
    tail = range(m_max // 2, m_max)
    dominant = all(vals[m] >= rho ** (m + 1) - n - 1e-6 * rho ** (m + 1) for m in tail)
    return TraceGrowth(tuple(vals), rho, dominant)


# ---------------------------------------------------------------------------
# the dichotomy Tr = E or Tr = F


@dataclass(frozen=True)
class DichotomyReport:
    verdict: str  # "E", "F" or "violation"
    trace_field: SubfieldBasis
    loxodromic_word: Word | None
    offending_word: Word | None = None
    offending_trace: FieldElement | None = None
    stabilized: bool = True


def trace_dichotomy_report(
    gens: Sequence[Matrix],
    depth: int,
    E_sub: SubfieldBasis,
    F_sub: SubfieldBasis,
    witness: IntegralityWitness | None = None,
    allow_nonintegral: bool = False,
    H=None,
) -> DichotomyReport:
    gens = list(gens)
    if not allow_nonintegral:
        if witness is None:
            raise NoIntegralBasis("an integral basis is needed to check the generators")
        for g in gens:
            if not is_integral(g, witness):
                raise EntryOutsideField("a generator is not integral over O_E (use allow_nonintegral)")
    lox = None
    for w, M in enumerate_words(gens, depth):
        if M.shape[0] == 3:
            try:
                tag = classify(M, H, check=False, details=False).tag
            except Exception:
                continue
            is_lox = tag == LOXODROMIC
        else:
            is_lox = float(np.max(np.abs(np.linalg.eigvals(M.to_numpy())))) > 1 + 1e-9
        if is_lox:
            lox = w
            break
    if lox is None:
        raise HypothesisNotCertified(f"no loxodromic element up to depth {depth}")
    rep = trace_field(gens, depth)
    K, stab = rep.field, rep.stabilized
    for w, M in enumerate_words(gens, depth):
        t = M.trace()
        if not E_sub.contains(t).member:
            return DichotomyReport("violation", K, lox, w, t, stab)
    if K.same_span(E_sub):
        return DichotomyReport("E", K, lox, stabilized=stab)
    if K.same_span(F_sub):
        return DichotomyReport("F", K, lox, stabilized=stab)
    return DichotomyReport("violation", K, lox, stabilized=stab)


def coefficients_in_extension(gens: Sequence[Matrix], K: SubfieldBasis, alpha: FieldElement) -> bool:
    """Are all entries in K(alpha)?"""
    KA = subfield_generated(list(K.basis) + [alpha], K.ambient)
    return all(KA.contains(x).member for g in gens for x in g.entries())
