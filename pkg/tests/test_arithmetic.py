from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from su21.arithmetic import (
    cm_extension,
    galois_conjugate_form,
    integral_basis,
    is_admissible,
    is_algebraic_integer,
    is_integral,
    multiplication_matrix,
    signature_at_place,
    subfield_integral_basis,
    trace_dichotomy_report,
    trace_growth,
    trace_sequence,
    coefficients_in_extension,
)
from su21.errors import EntryOutsideField, NotLoxodromic, WrongSignatureAtIdentity
from su21.isometry import loxodromic_lift
from su21.linalg import Matrix
from su21.numberfield import NumberField, multiquadratic_field, subfield_generated
from su21.samples import gaussian_field, sqrt15_example, sqrt2_pair
from su21.tracefield import Word


@pytest.fixture(scope="module")
def sqrt2():
    return sqrt2_pair()


@pytest.fixture(scope="module")
def sqrt15():
    K, H, g, named = sqrt15_example()
    i, s15 = named["i"], named["sqrt15"]
    E_sub = subfield_generated([i, s15], K)
    F_sub = subfield_generated([s15], K)
    witness = subfield_integral_basis([(-1, i), (15, s15)])
    return K, H, g, named, E_sub, F_sub, witness


# -- places and admissibility -------------------------------------------------------------


def test_identity_place_returns_form(sqrt2):
    E, H, _, _ = sqrt2
    ext = cm_extension(E)
    assert ext.d == 2
    assert galois_conjugate_form(H, ext, 0) == H


def test_conjugate_form_sqrt15():
    E, r = multiquadratic_field([-1, 15])
    ext = cm_extension(E)
    H = Matrix.diag([-r[15], E.one])
    tH = galois_conjugate_form(H, ext, 1)
    assert tH == Matrix.diag([r[15], E.one])
    # an involution on F: applying it twice returns H
    assert galois_conjugate_form(tH, ext, 1) == H


def test_sqrt2_pair_admissible(sqrt2):
    E, H, _, _ = sqrt2
    res = is_admissible(H, cm_extension(E))
    assert res.admissible and res.signatures == ((2, 1), (3, 0))


def test_gaussian_vacuous():
    K = gaussian_field()
    res = is_admissible(Matrix.diag([1, 1, -1], field=K), cm_extension(K))
    assert res.admissible and res.signatures == ((2, 1),)


def test_mixed_sign_form(sqrt2):
    E, _, _, r = sqrt2
    ext = cm_extension(E)
    r2 = r[2]
    # diag(1, -sqrt2, sqrt2 - 3) is already (1, 2) at the identity place
    with pytest.raises(WrongSignatureAtIdentity):
        is_admissible(Matrix.diag([E.one, -r2, r2 - 3]), ext)
    H = Matrix.diag([-E.one, r2, 3 - r2])
    res = is_admissible(H, ext)
    assert not res.admissible and res.signatures[1] == (1, 2)


def test_signature_oracle_numeric(sqrt2):
    E, H, _, _ = sqrt2
    ext = cm_extension(E)
    for k in range(ext.d):
        ev = np.linalg.eigvalsh(np.array([[complex(E.embed(x, 60, index=ext.places[k]).mid) for x in r] for r in H.rows]))
        assert signature_at_place(H, ext, k) == (int((ev > 0).sum()), int((ev < 0).sum()))


@pytest.mark.parametrize("A_entries", [[[1, 1, 0], [0, 1, "r"], [0, 0, 1]], [[0, 1, 0], [1, 0, 0], [0, 0, -1]]])
def test_admissibility_congruence_invariant(sqrt2, A_entries):
    E, H, _, r = sqrt2
    A = Matrix([[r[2] if x == "r" else E(x) for x in row] for row in A_entries], field=E)
    ext = cm_extension(E)
    a, b = is_admissible(H, ext), is_admissible(A.H @ H @ A, ext)
    assert a.admissible == b.admissible and a.signatures == b.signatures


# -- integrality --------------------------------------------------------------------------------


def _discriminant(basis):
    # det of the trace form, traces from multiplication matrices
    n = len(basis)
    tr = [[sum(multiplication_matrix(a * b)[k][k] for k in range(n)) for b in basis] for a in basis]
    return sp.Matrix(tr).det()


@pytest.mark.parametrize(
    "ms,disc",
    [
        ([-1], -4),
        ([-3], -3),
        ([5], 5),
        ([-2], -8),
        ([-1, 2], 256),
        ([-1, 3], 144),
        ([-3, 5], 225),
        ([-1, 15], 3600),
    ],
)
def test_integral_basis_discriminant(ms, disc):
    # oracle: conductor-discriminant formula over the quadratic subfields
    E, _ = multiquadratic_field(ms)
    W = integral_basis(E)
    assert len(W.integral_basis) == E.degree
    assert all(is_algebraic_integer(b) for b in W.integral_basis)
    assert _discriminant(list(W.integral_basis)) == disc


def test_integrality_examples():
    K = gaussian_field()
    W = integral_basis(K)
    assert is_integral(Matrix.identity(3, K), W)
    assert not is_integral(Matrix.identity(3, K).scale(Fraction(1, 2)), W)


def test_section4_example(sqrt15):
    K, H, g, named, E_sub, _, W = sqrt15
    s15 = named["sqrt15"]
    assert g.H @ H @ g == H
    assert g.det() == K.one
    assert not E_sub.contains(g.trace()).member
    assert not is_integral(g, W)
    with pytest.raises(EntryOutsideField):
        is_integral(g, W, strict=True)
    g2 = g @ g
    assert g2 == Matrix([[31 + 8 * s15, 16 + 4 * s15], [60 + 16 * s15, 31 + 8 * s15]], field=K)
    assert is_integral(g2, W)


# -- trace growth and the compact-place bound -------------------------------------------------------------


def test_dilation_growth():
    K = gaussian_field()
    tg = trace_growth(loxodromic_lift(2 * K.one), 30)
    assert abs(tg.spectral_radius - 2) < 1e-9 and tg.dominant
    for m, v in enumerate(tg.values, start=1):
        assert abs(v - (2**m + 1 + 2.0**-m)) < 1e-6 * 2**m


def test_elliptic_not_loxodromic():
    K = gaussian_field()
    with pytest.raises(NotLoxodromic):
        trace_growth(Matrix.diag([K.gen, -K.one, K.gen], field=K))


def test_section4_growth_unbounded(sqrt15):
    g = sqrt15[2]
    vals = trace_sequence(g, 20)
    assert vals[-1] > 1e10 and all(b > a for a, b in zip(vals[5:], vals[6:]))


def test_compact_place_trace_bound(sqrt2):
    E, H, gamma, _ = sqrt2
    ext = cm_extension(E)
    assert is_integral(gamma, integral_basis(E))
    assert gamma.H @ H @ gamma == H
    vals = trace_sequence(gamma, 50, place=ext.places[1])
    assert max(vals) <= 3 + 1e-9
    # at the identity place the same element is loxodromic
    assert trace_growth(gamma, 20).spectral_radius > 1


# -- dichotomy ----------------------------------------------------------------------------------------------


def _gaussian_group():
    K = gaussian_field()
    i = K.gen
    a, b = 2 + i, K(2)
    gamma = Matrix([[a, 0, b], [0, 1, 0], [b.conjugate(), 0, a.conjugate()]], field=K)
    R = Matrix.diag([i, -K.one, i], field=K)
    return K, Matrix.diag([1, 1, -1], field=K), gamma, R


def test_dichotomy_gaussian_E():
    K, H, gamma, R = _gaussian_group()
    assert gamma.H @ H @ gamma == H and R.H @ H @ R == H
    E_sub, F_sub = subfield_generated([K.gen], K), subfield_generated([], K)
    rep = trace_dichotomy_report([gamma, R], 3, E_sub, F_sub, integral_basis(K), H=H)
    assert rep.verdict == "E" and rep.loxodromic_word is not None


def test_dichotomy_real_entries_F():
    K, H, _, _ = _gaussian_group()
    gamma = Matrix([[3, 0, 2], [0, 1, 0], [4, 0, 3]], field=K)
    H = Matrix.diag([2, 1, -1], field=K)
    assert gamma.H @ H @ gamma == H
    E_sub, F_sub = subfield_generated([K.gen], K), subfield_generated([], K)
    rep = trace_dichotomy_report([gamma], 3, E_sub, F_sub, integral_basis(K), H=H)
    assert rep.verdict == "F"


def test_dichotomy_sqrt2(sqrt2):
    E, H, gamma, r = sqrt2
    R = Matrix.diag([r[-1], -E.one, r[-1]], field=E)
    assert R.H @ H @ R == H
    E_sub, F_sub = subfield_generated([r[-1], r[2]], E), subfield_generated([r[2]], E)
    rep = trace_dichotomy_report([gamma, R], 3, E_sub, F_sub, integral_basis(E), H=H)
    assert rep.verdict == "E"


def test_dichotomy_section4(sqrt15):
    K, H, g, named, E_sub, F_sub, W = sqrt15
    with pytest.raises(EntryOutsideField):
        trace_dichotomy_report([g], 2, E_sub, F_sub, W)
    rep = trace_dichotomy_report([g], 2, E_sub, F_sub, W, allow_nonintegral=True)
    assert rep.verdict == "violation" and rep.offending_word == Word(((0, 1),))
    assert rep.offending_trace == 4 * named["s"]
    assert trace_dichotomy_report([g @ g], 3, E_sub, F_sub, W).verdict == "F"


def test_coefficients_in_trace_field_extension(sqrt2):
    E, H, gamma, r = sqrt2
    R = Matrix.diag([r[-1], -E.one, r[-1]], field=E)
    K = subfield_generated([r[-1], r[2]], E)
    assert coefficients_in_extension([gamma, R], subfield_generated([r[2]], E), r[-1])
    assert coefficients_in_extension([gamma, R], K, E.one)
    assert not coefficients_in_extension([gamma, R], subfield_generated([r[-1]], E), r[-1])
