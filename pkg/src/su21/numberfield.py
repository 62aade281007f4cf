"""Exact arithmetic in number fields E = Q(alpha) inside C.

A field is presented by the monic minimal polynomial of a primitive element
together with a chosen complex root, so every element has a well defined
complex value. Complex conjugation must map E to itself; its action on the
power basis is stored as a rational matrix.

Elements keep an integer numerator vector and a positive common denominator,
which keeps the inner loops on Python ints.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy

from . import qlinalg
from .errors import (
    AmbiguousRoot,
    ConjugationNotInternal,
    DivisionByZero,
    FieldMismatch,
    ModeMismatch,
    ReducibleMinimalPolynomial,
)

_BASE_BITS = 256


def to_fraction(x) -> Fraction:
    """Parse an exact rational: int, Fraction, or a string like "-3/7"."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    raise ModeMismatch(f"not an exact rational: {x!r}")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# certified complex discs


class ComplexBall:
    """A disc |z - mid| <= rad in C; arithmetic keeps the enclosure valid."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpmath.mpc(mid)
        self.rad = mpmath.mpf(rad)

    def _slack(self, z):
        return abs(z) * mpmath.ldexp(1, -mpmath.mp.prec + 2)

    def __add__(self, other):
        other = _ball(other)
        m = self.mid + other.mid
        return ComplexBall(m, self.rad + other.rad + self._slack(m))

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_ball(other))

    def __mul__(self, other):
        other = _ball(other)
        m = self.mid * other.mid
        r = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return ComplexBall(m, r + self._slack(m))

    __rmul__ = __mul__

    def contains(self, z) -> bool:
        return abs(mpmath.mpc(z) - self.mid) <= self.rad

    def overlaps(self, other: "ComplexBall") -> bool:
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def __complex__(self):
        return complex(self.mid)

    def real_interval(self):
        return (self.mid.real - self.rad, self.mid.real + self.rad)

    def imag_interval(self):
        return (self.mid.imag - self.rad, self.mid.imag + self.rad)

    def __repr__(self):
        return f"ComplexBall({mpmath.nstr(self.mid, 15)} +/- {mpmath.nstr(self.rad, 3)})"


def _ball(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, Fraction):
        return ComplexBall(mpmath.mpf(x.numerator) / x.denominator)
    return ComplexBall(x)


# ---------------------------------------------------------------------------
# polynomials over Q (coefficient lists, low degree first)


def _poly_mod_table(minpoly: Sequence[Fraction]) -> list[list[Fraction]]:
    """Coordinates of x^k mod minpoly for k = d .. 2d-2."""
    d = len(minpoly) - 1
    cur = [-c for c in minpoly[:d]]  # x^d
    table = [cur]
    for _ in range(d - 2):
        shifted = [Fraction(0)] + cur[:-1]
        top = cur[-1]
        cur = [s + top * t for s, t in zip(shifted, table[0])]
        table.append(cur)
    return table


def is_irreducible(minpoly: Sequence[Fraction]) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(minpoly)], x, domain="QQ")
    if poly.degree() <= 1:
        return True
    return poly.is_irreducible


class NumberField:
    """E = Q(alpha) with alpha a chosen root of `minpoly`.

    minpoly: monic coefficients, constant term first (ints, Fractions or "p/q").
    root_hint: approximate complex value of alpha; without one the root with
    the largest imaginary part (then real part) is taken.
    conjugation_image: coordinates of conj(alpha) over 1, alpha, ...; found
    automatically when omitted.
    """

    def __init__(
        self,
        minpoly: Sequence,
        root_hint=None,
        conjugation_image: Sequence | None = None,
        *,
        name: str | None = None,
        check_irreducible: bool = True,
    ):
        coeffs = [to_fraction(c) for c in minpoly]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly: tuple[Fraction, ...] = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.name = name
        if check_irreducible and not is_irreducible(self.minpoly):
            raise ReducibleMinimalPolynomial(f"{self.minpoly_str()} is reducible over Q")
        d = self.degree
        table = _poly_mod_table(self.minpoly) if d > 1 else []
        self._red_den = 1
        for row in table:
            for c in row:
                self._red_den = lcm(self._red_den, c.denominator)
        self._red = [[int(c * self._red_den) for c in row] for row in table]
        # scale making D*alpha an algebraic integer
        self._int_scale = 1
        for c in self.minpoly:
            self._int_scale = lcm(self._int_scale, c.denominator)
        self._cache: dict = {}
        self.root_index = self._select_root(root_hint)
        self._conj = None
        if conjugation_image is not None:
            img = self.element(conjugation_image)
            self._install_conjugation(img)
        else:
            self._install_conjugation(self._find_conjugation())

    # -- identity -----------------------------------------------------------
    def _key(self):
        return (self.minpoly, self.root_index)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def minpoly_str(self, var="x") -> str:
        return str(sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.minpoly)], sympy.Symbol(var)).as_expr())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"NumberField{label}({self.minpoly_str()}, root #{self.root_index} ~ {complex(self.root_approx()):.6g})"

    # -- elements -------------------------------------------------------------
    def element(self, coords: Sequence) -> "FieldElement":
        coords = [to_fraction(c) for c in coords]
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        den = 1
        for c in coords:
            den = lcm(den, c.denominator)
        return FieldElement(self, tuple(int(c * den) for c in coords), den)

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatch("element belongs to another field")
            return x
        q = to_fraction(x)
        num = [0] * self.degree
        num[0] = q.numerator
        return FieldElement(self, tuple(num), q.denominator, _normalized=True)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(-self.minpoly[0])
        num = [0] * self.degree
        num[1] = 1
        return FieldElement(self, tuple(num), 1, _normalized=True)

    @property
    def one(self):
        return self(1)

    @property
    def zero(self):
        return self(0)

    def from_json(self, data) -> "FieldElement":
        if isinstance(data, (int, str)):
            return self(data)
        return self.element(data)

    # -- roots and embeddings -----------------------------------------------------
    def _roots(self, bits: int = _BASE_BITS):
        """All roots of minpoly as certified balls at roughly `bits` precision."""
        key = ("roots", bits)
        if key in self._cache:
            return self._cache[key]
        d = self.degree
        with mpmath.workprec(bits + 32):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(self.minpoly)]
            if d == 1:
                raw = [-coeffs[1]]
            else:
                raw = mpmath.polyroots(coeffs, maxsteps=400, extraprec=2 * bits)
            dcoeffs = [c * (d - k) for k, c in enumerate(coeffs[:-1])]
            balls = []
            for r in raw:
                r = mpmath.mpc(r)
                for _ in range(6):
                    fr = mpmath.polyval(coeffs, r)
                    dfr = mpmath.polyval(dcoeffs, r)
                    if dfr == 0:
                        break
                    r = r - fr / dfr
                fr = mpmath.polyval(coeffs, r)
                dfr = mpmath.polyval(dcoeffs, r)
                # a polynomial of degree d has a root within d|f/f'| of r
                rad = d * abs(fr) / abs(dfr) + mpmath.ldexp(1, -bits - 8) if dfr != 0 else mpmath.mpf(1)
                balls.append(ComplexBall(r, rad))
        if bits != _BASE_BITS and ("roots", _BASE_BITS) in self._cache:
            # keep the ordering of the base computation
            base = self._cache[("roots", _BASE_BITS)]
            ordered = []
            for b in base:
                j = min(range(d), key=lambda k: abs(balls[k].mid - b.mid))
                ordered.append(balls[j])
            balls = ordered
        else:
            balls.sort(key=lambda b: (float(b.mid.real), float(b.mid.imag)))
        self._cache[key] = balls
        return balls

    def root_approx(self, index: int | None = None) -> complex:
        i = self.root_index if index is None else index
        return complex(self._roots()[i].mid)

    def embeddings(self) -> list[complex]:
        """Approximations of all complex roots of the minimal polynomial."""
        return [complex(b.mid) for b in self._roots()]

    def _select_root(self, hint) -> int:
        roots = self.embeddings()
        if self.degree == 1:
            return 0
        if hint is None:
            return max(range(len(roots)), key=lambda k: (round(roots[k].imag, 12), round(roots[k].real, 12)))
        if isinstance(hint, (list, tuple)):
            hint = complex(float(hint[0]), float(hint[1]))
        hint = complex(hint)
        dists = sorted((abs(r - hint), k) for k, r in enumerate(roots))
        if not dists[1][0] > 2 * dists[0][0]:
            raise AmbiguousRoot(f"hint {hint} does not isolate a root of {self.minpoly_str()}")
        return dists[0][1]

    def _eval_ball(self, num: Sequence[int], den: int, index: int, bits: int) -> ComplexBall:
        root = self._roots(bits)[index] if bits > _BASE_BITS else self._roots()[index]
        with mpmath.workprec(bits + 64):
            acc = ComplexBall(0)
            for c in reversed(num):
                acc = acc * root + ComplexBall(mpmath.mpf(c))
            return ComplexBall(acc.mid / den, acc.rad / den + abs(acc.mid / den) * mpmath.ldexp(1, -bits - 60))

    def embed(self, a: "FieldElement", precision: int = 53, index: int | None = None) -> ComplexBall:
        """Certified disc containing the image of `a` (radius <= 2**-precision)."""
        a = self(a)
        index = self.root_index if index is None else index
        target = mpmath.ldexp(1, -precision)
        bits = max(_BASE_BITS, precision + 64)
        while True:
            ball = self._eval_ball(a.num, a.den, index, bits)
            if ball.rad <= target:
                return ball
            bits *= 2
            if bits > 1 << 16:
                return ball

    # -- conjugation / automorphisms -------------------------------------------
    def _install_conjugation(self, img: "FieldElement"):
        if img.field != self:
            raise FieldMismatch("conjugation image in another field")
        if not self.minpoly_value(img).is_zero():
            raise ConjugationNotInternal("supplied conjugation image is not a root of the minimal polynomial")
        target = self.root_approx().conjugate()
        if abs(complex(self.embed(img, 60)) - target) > 1e-8 * (1 + abs(target)):
            raise ConjugationNotInternal("supplied conjugation image does not embed to conj(alpha)")
        self._conj_image = img
        self._conj = self._linear_map(img)

    def _linear_map(self, img: "FieldElement"):
        """Integer matrix (with common denominator) of the homomorphism alpha -> img."""
        d = self.degree
        cols = []
        p = self.one
        for _ in range(d):
            cols.append(p)
            p = p * img
        den = 1
        for c in cols:
            den = lcm(den, c.den)
        mat = [[cols[j].num[i] * (den // cols[j].den) for j in range(d)] for i in range(d)]
        return mat, den

    def apply_homomorphism(self, mapping, a: "FieldElement") -> "FieldElement":
        mat, mden = mapping
        d = self.degree
        num = tuple(sum(mat[i][j] * a.num[j] for j in range(d)) for i in range(d))
        return FieldElement(self, num, a.den * mden)

    @property
    def conjugation_image(self) -> "FieldElement":
        return self._conj_image

    def minpoly_value(self, a: "FieldElement") -> "FieldElement":
        acc = self.zero
        for c in reversed(self.minpoly):
            acc = acc * a + c
        return acc

    def _disc(self) -> int:
        if "disc" not in self._cache:
            x = sympy.Symbol("x")
            D = self._int_scale
            d = self.degree
            ic = [int(c * D ** (d - k)) for k, c in enumerate(self.minpoly)]
            poly = sympy.Poly(list(reversed(ic)), x)
            self._cache["disc"] = abs(int(sympy.discriminant(poly))) if d > 1 else 1
        return self._cache["disc"]

    def _integral_coords_scale(self, a: "FieldElement") -> int:
        """Smallest m > 0 making m*a have integer coordinates over powers of D*alpha."""
        D = self._int_scale
        m = 1
        for k, c in enumerate(a.num):
            q = Fraction(c, a.den * D**k)
            m = lcm(m, q.denominator)
        return m

    def _recognize(self, values, scale: int = 1) -> "FieldElement | None":
        """Element whose embeddings are `values` (one per root, root order).

        `scale` must make scale*element an algebraic integer; its coordinates
        over powers of D*alpha then lie in disc^-1 Z, which lets us round.
        """
        d = self.degree
        D = self._int_scale
        disc = self._disc()
        dps = 40 + len(str(disc)) + 4 * d
        for attempt in range(3):
            with mpmath.workdps(dps):
                roots = [b.mid for b in self._roots(max(_BASE_BITS, int(dps * 3.4) + 64))]
                V = mpmath.matrix([[(D * r) ** m for m in range(d)] for r in roots])
                vals = mpmath.matrix([mpmath.mpc(v) * scale for v in values])
                try:
                    c = mpmath.lu_solve(V, vals)
                except ZeroDivisionError:
                    return None
                big = max(abs(c[m]) for m in range(d)) * disc
                needed = int(mpmath.log10(big + 1)) + 30 + len(str(disc))
                if needed > dps and attempt < 2:
                    dps = needed
                    continue
                coords = []
                for m in range(d):
                    x = c[m] * disc
                    if abs(x.imag) > 1e-6:
                        return None
                    n = int(mpmath.nint(x.real))
                    if abs(x.real - n) > 1e-6:
                        return None
                    coords.append(Fraction(n, disc * D**0) * D**m / scale)
                return self.element(coords)
        return None

    def _find_root_element(self, target_index: int, prefer_conjugation: bool = False):
        """Element g of E with minpoly(g) = 0 embedding to root `target_index`."""
        d = self.degree
        if d == 1:
            return self.gen
        roots = np.array(self.embeddings())
        V = np.vander(roots, d, increasing=True)
        try:
            Vinv = np.linalg.inv(V)
        except np.linalg.LinAlgError:
            Vinv = None
        sel = self.root_index
        candidates = []
        if prefer_conjugation:
            conj_idx = [int(np.argmin(abs(roots - r.conjugate()))) for r in roots]
            candidates.append(tuple(conj_idx))
        if d <= 8 and Vinv is not None:
            others = [k for k in range(d) if k != target_index]
            positions = [k for k in range(d) if k != sel]
            scored = []
            for perm in itertools.permutations(others):
                pi = [0] * d
                pi[sel] = target_index
                for pos, val in zip(positions, perm):
                    pi[pos] = val
                c = Vinv @ roots[pi]
                score = float(np.max(np.abs(c.imag)) / (1 + np.max(np.abs(c))))
                scored.append((score, tuple(pi)))
            scored.sort()
            candidates.extend(p for s, p in scored[:6] if s < 1e-4)
        seen = set()
        for pi in candidates:
            if pi in seen or pi[sel] != target_index:
                continue
            seen.add(pi)
            base = self._roots()
            g = self._recognize([base[k].mid for k in pi], scale=self._int_scale)
            if g is None:
                continue
            if self.minpoly_value(g).is_zero() and abs(complex(self.embed(g, 60)) - roots[target_index]) < 1e-8 * (1 + abs(roots[target_index])):
                return g
        return None

    def _find_conjugation(self):
        roots = self.embeddings()
        sel = roots[self.root_index]
        dist = [abs(r - sel.conjugate()) for r in roots]
        target = min(range(len(roots)), key=lambda k: dist[k])
        if dist[target] > 1e-8 * (1 + abs(sel)):
            raise ConjugationNotInternal("conj(alpha) is not a root of the minimal polynomial")
        g = self._find_root_element(target, prefer_conjugation=True)
        if g is None:
            raise ConjugationNotInternal("conj(alpha) is not expressible as a polynomial in alpha")
        return g

    def automorphism_to(self, root_index: int):
        """The automorphism alpha -> root `root_index`, or None if E has none."""
        key = ("aut", root_index)
        if key not in self._cache:
            if root_index == self.root_index:
                img = self.gen
            else:
                img = self._find_root_element(root_index)
            self._cache[key] = None if img is None else (img, self._linear_map(img))
        return self._cache[key]

    # -- roots of elements ------------------------------------------------------------
    def roots_of(self, a: "FieldElement", k: int) -> list["FieldElement"]:
        """All s in E with s**k == a (exactly verified)."""
        a = self(a)
        if a.is_zero():
            return [self.zero]
        d = self.degree
        if d == 1:
            q = a.to_fraction()
            out = []
            for r in sympy.Poly(sympy.Symbol("y") ** k - sympy.Rational(q.numerator, q.denominator)).ground_roots():
                out.append(self(Fraction(int(r.p), int(r.q))))
            return sorted(set(out), key=lambda e: e.coords)
        if k**d > 2_000_000:
            raise NotImplementedError("root search too large for this degree")
        m = self._integral_coords_scale(a)
        vals = np.array([complex(self.embed(a, 60, index=j)) for j in range(d)])
        roots = np.array(self.embeddings())
        V = np.vander(roots, d, increasing=True)
        Vinv = np.linalg.inv(V)
        base = np.array([complex(mpmath.root(mpmath.mpc(v), k)) for v in vals])
        zeta = np.exp(2j * np.pi * np.arange(k) / k)
        found = []
        for choice in itertools.product(range(k), repeat=d):
            w = base * zeta[list(choice)]
            c = Vinv @ w
            if np.max(np.abs(c.imag)) > 1e-6 * (1 + np.max(np.abs(c))):
                continue
            hp = []
            with mpmath.workdps(60):
                for j, ch in enumerate(choice):
                    v = self.embed(a, 200, index=j).mid
                    hp.append(mpmath.root(v, k) * mpmath.exp(2j * mpmath.pi * ch / k))
            s = self._recognize(hp, scale=m)
            if s is not None and s**k == a and s not in found:
                found.append(s)
        return found

    def poly_roots(self, coeffs: Sequence) -> list["FieldElement"]:
        """Roots in E of the polynomial with coefficients `coeffs` (low degree first).

        Each root is pinned down by its images under all embeddings, so we try
        every way of matching numerical roots of the conjugate polynomials and
        keep the candidates that verify exactly.
        """
        coeffs = [self(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        n = len(coeffs) - 1
        if n < 1:
            return []
        coeffs = _squarefree_part(coeffs)
        n = len(coeffs) - 1
        if n < 1:
            return []
        d = self.degree
        if n**d > 2_000_000:
            raise NotImplementedError("root search too large for this degree")
        m = 1
        for c in coeffs:
            m = lcm(m, self._integral_coords_scale(c))
        with mpmath.workdps(60):
            per_place = []
            for j in range(d):
                cj = [self.embed(c, 200, index=j).mid for c in reversed(coeffs)]
                per_place.append([mpmath.mpc(r) for r in mpmath.polyroots(cj, maxsteps=200, extraprec=200)] if n > 1 else [-cj[1] / cj[0]])
        approx = np.array([[complex(r) for r in rs] for rs in per_place])
        roots = np.array(self.embeddings())
        Vinv = np.linalg.inv(np.vander(roots, d, increasing=True)) if d > 1 else np.array([[1.0]])
        found: list[FieldElement] = []
        for choice in itertools.product(range(n), repeat=d):
            w = approx[np.arange(d), list(choice)]
            c = Vinv @ w
            if np.max(np.abs(c.imag)) > 1e-6 * (1 + np.max(np.abs(c))):
                continue
            if d == 1:
                s = self._recognize([per_place[0][choice[0]]], scale=m)
            else:
                s = self._recognize([per_place[j][ch] for j, ch in enumerate(choice)], scale=m)
            if s is None or s in found:
                continue
            acc = self.zero
            for cc in reversed(coeffs):
                acc = acc * s + cc
            if acc.is_zero():
                found.append(s)
        return found

    @property
    def imag_unit(self) -> "FieldElement | None":
        """i as an element of E (the square root of -1 with positive imaginary part)."""
        if "i" not in self._cache:
            rts = [s for s in self.roots_of(self(-1), 2) if complex(s).imag > 0]
            self._cache["i"] = rts[0] if rts else None
        return self._cache["i"]

    @property
    def omega(self) -> "FieldElement | None":
        """exp(2 pi i / 3) as an element of E, if present."""
        if "omega" not in self._cache:
            rts = [s for s in self.roots_of(self.one, 3) if complex(s).imag > 0]
            self._cache["omega"] = rts[0] if rts else None
        return self._cache["omega"]

    # -- real structure ---------------------------------------------------------------
    def sign(self, a: "FieldElement") -> int:
        """Sign of a real element under the chosen embedding (certified)."""
        a = self(a)
        if a.is_zero():
            return 0
        if a != a.conjugate():
            raise ValueError("sign of a non-real element")
        prec = 64
        while True:
            ball = self.embed(a, prec)
            lo, hi = ball.real_interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def real_subfield(self) -> "SubfieldBasis":
        d = self.degree
        mat, den = self._conj
        A = [[Fraction(mat[i][j], den) - (1 if i == j else 0) for j in range(d)] for i in range(d)]
        gens = [self.element(v) for v in qlinalg.nullspace(A)]
        return subfield_generated(gens, ambient=self)


class FieldElement:
    """An element sum(num[k] alpha^k) / den of a NumberField."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: tuple, den: int = 1, _normalized: bool = False):
        if not _normalized:
            if den < 0:
                num = tuple(-c for c in num)
                den = -den
            g = gcd(den, *num)
            if g > 1:
                num = tuple(c // g for c in num)
                den //= g
        self.field = field
        self.num = num
        self.den = den

    # -- coercion --------------------------------------------------------------
    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field(other.to_fraction())
            if self.field.degree == 1 and self.is_rational():
                return None
            raise FieldMismatch("elements of different number fields")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        if isinstance(other, (float, complex)):
            raise ModeMismatch("cannot mix exact field elements with floating point values")
        return None

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other + self
            return NotImplemented
        if self.den == o.den:
            return FieldElement(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return FieldElement(
            self.field,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.num), self.den, _normalized=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return -(other - self)
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other * self
            return NotImplemented
        F = self.field
        d = F.degree
        a, b = self.num, o.num
        if d == 1:
            return FieldElement(F, (a[0] * b[0],), self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        rd = F._red_den
        if rd == 1:
            res = prod[:d]
        else:
            res = [c * rd for c in prod[:d]]
        for k in range(d, 2 * d - 1):
            ck = prod[k]
            if ck:
                row = F._red[k - d]
                for j in range(d):
                    if row[j]:
                        res[j] += ck * row[j]
        return FieldElement(F, tuple(res), self.den * o.den * rd)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a number field")
        F = self.field
        d = F.degree
        if d == 1:
            return FieldElement(F, (self.den,), self.num[0])
        # columns: coordinates of self * alpha^j
        cols = []
        p = self
        g = F.gen
        for _ in range(d):
            cols.append(p.coords)
            p = p * g
        A = [[cols[j][i] for j in range(d)] for i in range(d)]
        e = [0] * d
        e[0] = 1
        x = qlinalg.solve(A, e)
        if x is None:
            raise DivisionByZero("element is not invertible")
        return F.element(x)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other.field(self.to_fraction()) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "FieldElement":
        F = self.field
        if F.degree == 1:
            return self
        return F.apply_homomorphism(F._conj, self)

    def real_part(self) -> "FieldElement":
        return (self + self.conjugate()) * Fraction(1, 2)

    def abs2(self) -> "FieldElement":
        return self * self.conjugate()

    # -- comparison ---------------------------------------------------------------
    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (FieldMismatch, ModeMismatch):
            return False
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- numerics / display ----------------------------------------------------------
    def embed(self, precision: int = 53) -> ComplexBall:
        return self.field.embed(self, precision)

    def __complex__(self):
        return complex(self.field.embed(self, 60).mid)

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self.coords]

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            cs = fraction_str(c)
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ") or "0"


QQ = NumberField([0, 1], name="Q")


# ---------------------------------------------------------------------------
# subfields


@dataclass(frozen=True)
class Membership:
    member: bool
    coords: tuple[Fraction, ...] | None = None

    def __bool__(self):
        return self.member


@dataclass(frozen=True, eq=False)
class SubfieldBasis:
    """A subfield of `ambient` given by a Q-basis that contains 1."""

    ambient: NumberField
    basis: tuple[FieldElement, ...]
    _columns: tuple = dc_field(default=(), repr=False)

    @property
    def degree(self) -> int:
        return len(self.basis)

    def contains(self, a) -> Membership:
        a = self.ambient(a)
        A = [[b.coords[i] for b in self.basis] for i in range(self.ambient.degree)]
        x = qlinalg.solve(A, list(a.coords))
        if x is None:
            return Membership(False, None)
        return Membership(True, tuple(x))

    def __contains__(self, a) -> bool:
        return self.contains(a).member

    def issubset(self, other: "SubfieldBasis") -> bool:
        return all(other.contains(b).member for b in self.basis)

    def same_span(self, other: "SubfieldBasis") -> bool:
        return self.degree == other.degree and self.issubset(other)

    def __eq__(self, other):
        return isinstance(other, SubfieldBasis) and self.ambient == other.ambient and self.same_span(other)

    def __hash__(self):
        return hash((self.ambient, self.degree))

    def is_real(self) -> bool:
        return all(b == b.conjugate() for b in self.basis)

    def element(self, coords: Sequence) -> FieldElement:
        out = self.ambient.zero
        for c, b in zip(coords, self.basis):
            out = out + b * to_fraction(c)
        return out

    def to_json(self) -> list[list[str]]:
        return [b.to_json() for b in self.basis]



def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    """Division of polynomials over a field, coefficients low degree first."""
    a = list(a)
    inv = b[-1].inverse()
    q = [a[0] * 0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(not c.is_zero() for c in a):
        k = len(a) - len(b)
        f = a[-1] * inv
        q[k] = f
        for j, c in enumerate(b):
            a[j + k] = a[j + k] - f * c
        a.pop()
    while len(a) > 1 and a[-1].is_zero():
        a.pop()
    return q, a


def _poly_monic_gcd(a: list, b: list) -> list:
    while any(not c.is_zero() for c in b):
        a, b = b, _poly_divmod(a, b)[1]
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _squarefree_part(coeffs: list) -> list:
    """Monic p / gcd(p, p'), which has the same roots, all simple."""
    inv = coeffs[-1].inverse()
    p = [c * inv for c in coeffs]
    dp = [c * k for k, c in enumerate(p)][1:]
    g = _poly_monic_gcd(p, dp)
    if len(g) == 1:
        return p
    return _poly_divmod(p, g)[0]


def subfield_generated(gens: Iterable, ambient: NumberField | None = None) -> SubfieldBasis:
    """Smallest subfield of the ambient field containing Q and `gens`.

    A finite-dimensional Q-subalgebra of a field is a field, so closing the
    span under products suffices; inverses come for free.
    """
    gens = list(gens)
    if ambient is None:
        fe = [g for g in gens if isinstance(g, FieldElement)]
        ambient = fe[0].field if fe else QQ
    gens = [ambient(g) for g in gens]
    basis: list[FieldElement] = []
    rows: list[list[Fraction]] = []

    def add(x: FieldElement) -> bool:
        trial = rows + [list(x.coords)]
        if qlinalg.rank(trial) > len(rows):
            rows.append(list(x.coords))
            basis.append(x)
            return True
        return False

    add(ambient.one)
    for g in gens:
        add(g)
    grew = True
    while grew and len(basis) < ambient.degree:
        grew = False
        current = list(basis)
        for i, x in enumerate(current):
            for y in current[i:]:
                if add(x * y):
                    grew = True
                if len(basis) == ambient.degree:
                    break
    return SubfieldBasis(ambient, tuple(ambient.element(r) for r in _rref(rows)))


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form of independent rows (canonical basis of their span)."""
    a = [list(r) for r in rows]
    n = len(a[0]) if a else 0
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def contains(sub: SubfieldBasis, a) -> Membership:
    return sub.contains(a)


# ---------------------------------------------------------------------------
# field construction helpers


@dataclass(frozen=True)
class FieldExtension:
    """E' = E(sqrt(kappa)) with the inclusion E -> E' made explicit."""

    base: NumberField
    field: NumberField
    sqrt: FieldElement
    _embedding: tuple = dc_field(repr=False, default=())

    def embed(self, a) -> FieldElement:
        if self.field is self.base:
            return self.base(a)
        a = self.base(a)
        mat, den = self._embedding
        n = self.field.degree
        num = tuple(sum(mat[i][j] * a.num[j] for j in range(self.base.degree)) for i in range(n))
        return FieldElement(self.field, num, a.den * den)


def adjoin_sqrt(base: NumberField, kappa, *, name: str | None = None) -> FieldExtension:
    """Extend `base` by a square root of the real element `kappa`.

    The new primitive element is alpha + r*y with y**2 = kappa; its minimal
    polynomial, the inclusion of `base`, and the conjugation are all computed
    exactly from the tower E[y]/(y^2 - kappa).
    """
    kappa = base(kappa)
    if kappa != kappa.conjugate():
        raise ConjugationNotInternal("only real elements can be adjoined as square roots here")
    existing = base.roots_of(kappa, 2)
    if existing:
        s = max(existing, key=lambda e: (complex(e).real, complex(e).imag))
        return FieldExtension(base, base, s)
    d = base.degree
    n = 2 * d
    positive = base.sign(kappa) > 0
    alpha = base.gen

    def mul(u, v):
        return (u[0] * v[0] + kappa * u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    def flat(u):
        return list(u[0].coords) + list(u[1].coords)

    for r in range(1, 20):
        gamma = (alpha, base(r))
        powers = [(base.one, base.zero)]
        for _ in range(n):
            powers.append(mul(powers[-1], gamma))
        T = [[flat(powers[k])[i] for k in range(n)] for i in range(n)]
        if qlinalg.rank(T) == n:
            break
    else:  # pragma: no cover
        raise RuntimeError("no primitive element found")
    x = qlinalg.solve(T, flat(powers[n]))
    minpoly = [-c for c in x] + [1]
    Tinv = qlinalg.inverse(T)

    def coords_in_new(u):
        f = flat(u)
        return [sum(Tinv[i][j] * f[j] for j in range(n)) for i in range(n)]

    conj_y_sign = 1 if positive else -1
    conj_gamma = (alpha.conjugate(), base(r * conj_y_sign))
    kap_c = complex(kappa)
    y_val = complex(mpmath.sqrt(kap_c)) if positive else 1j * math.sqrt(-kap_c.real)
    hint = base.root_approx() + r * y_val
    new = NumberField(minpoly, hint, coords_in_new(conj_gamma), name=name)
    cols = [coords_in_new((alpha**m, base.zero)) for m in range(d)]
    den = 1
    for col in cols:
        for c in col:
            den = lcm(den, c.denominator)
    mat = [[int(cols[j][i] * den) for j in range(d)] for i in range(n)]
    sqrt_el = new.element(coords_in_new((base.zero, base.one)))
    return FieldExtension(base, new, sqrt_el, (mat, den))


def multiquadratic_field(ms: Sequence[int], name: str | None = None) -> tuple[NumberField, dict[int, FieldElement]]:
    """Q(sqrt(m1), sqrt(m2), ...) with the chosen square roots as elements.

    Positive m get the positive root, negative m the root i*sqrt(|m|).
    """
    F = QQ
    roots: dict[int, FieldElement] = {}
    for m in ms:
        ext = adjoin_sqrt(F, m, name=name)
        roots = {k: ext.embed(v) for k, v in roots.items()}
        s = ext.sqrt
        val = complex(s)
        if (m > 0 and val.real < 0) or (m < 0 and val.imag < 0):
            s = -s
        roots[m] = s
        F = ext.field
    if name:
        F.name = name
    return F, roots


def cyclotomic_field(n: int) -> NumberField:
    """Q(zeta_n) with zeta_n = exp(2 pi i / n)."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    hint = complex(math.cos(2 * math.pi / n), math.sin(2 * math.pi / n))
    F = NumberField(coeffs, hint, name=f"Q(zeta{n})")
    return F


def compose_quadratics(m: int, n: int) -> NumberField:
    """Degree-4 field Q(sqrt m, sqrt n) presented by one primitive element."""
    F, _ = multiquadratic_field([m, n])
    return F


# functional spellings of the element operations


def nf_create(minpoly: Sequence, root_hint=None, conjugation_image: Sequence | None = None) -> NumberField:
    return NumberField(minpoly, root_hint, conjugation_image)


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def fe_conj(a: FieldElement) -> FieldElement:
    return a.conjugate()


def fe_eq(a: FieldElement, b: FieldElement) -> bool:
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field != b.field:
        raise FieldMismatch("elements of different number fields")
    return a == b


def embed(a: FieldElement, precision: int = 53) -> ComplexBall:
    return a.field.embed(a, precision)


def field_from_json(data: dict) -> NumberField:
    """{"minpoly": [...], "root_hint": [re, im], "conjugation_image": [...]} -> NumberField."""
    hint = data.get("root_hint")
    return NumberField(data["minpoly"], hint, data.get("conjugation_image"), name=data.get("name"))


def field_to_json(F: NumberField) -> dict:
    z = F.root_approx()
    out = {
        "minpoly": [fraction_str(c) for c in F.minpoly],
        "root_hint": [repr(round(z.real, 12)), repr(round(z.imag, 12))],
        "conjugation_image": F.conjugation_image.to_json(),
    }
    if F.name:
        out["name"] = F.name
    return out
