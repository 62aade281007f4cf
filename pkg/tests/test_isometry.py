import cmath
import math
import random

import numpy as np
import pytest

from conftest import random_su21
from su21.errors import BoundaryCase, CubeRootUnavailable, NotParabolic, NotUnitary, UnipotentTrace
from su21.hermitian import BoundaryPoint, horospherical_lift, infinity_lift, origin_lift, siegel_matrix
from su21.isometry import (
    ELLIPTIC,
    HORIZONTAL,
    LOXODROMIC,
    SCREW,
    VERTICAL,
    classify,
    goldman_discriminant,
    lifts,
    loxodromic_boundary_action,
    loxodromic_lift,
    parabolic_eigenvalue_from_trace,
    parabolic_fixed_point,
    standard_parabolic,
)
from su21.linalg import FLOAT, Matrix, Vector
from su21.numberfield import cyclotomic_field


def closed_form_trace(theta):
    # trace formula for the standard parabolic with rotation theta
    c, s = math.cos(theta), math.sin(theta)
    return complex(2 * c * c + 2 * c - 1, 2 * s * (1 - c))


def test_classify_examples(qi):
    assert classify(Matrix.identity(3, qi)).tag == ELLIPTIC
    P = standard_parabolic(it=qi.gen, eitheta=qi.one, field=qi)
    c = classify(P)
    assert c.tag == VERTICAL and c.nilpotency_index == 2
    assert c.fixed_points[0] == infinity_lift(qi)
    # acts as (w, s) -> (w, s + 1)
    v = horospherical_lift(qi.one + qi.gen, 2, field=qi)
    assert P @ v == horospherical_lift(qi.one + qi.gen, 3, field=qi)
    L = loxodromic_lift(2 * qi.one)
    c = classify(L)
    assert c.tag == LOXODROMIC and c.eigenvalue == 2 * qi.one
    assert set(c.fixed_points) == {infinity_lift(qi), origin_lift(qi)}


def test_standard_parabolic_examples(qi):
    i = qi.gen
    P = standard_parabolic(it=i, eitheta=qi.one, field=qi)
    assert P.trace() == qi(3)
    Ph = standard_parabolic(z=qi.one, it=i, eitheta=qi.one, field=qi)
    c = classify(Ph)
    assert c.tag == HORIZONTAL and c.nilpotency_index == 3
    S = standard_parabolic(it=i, eitheta=i, field=qi)
    assert S.trace() == -1 + 2 * i
    assert classify(S).tag == SCREW
    assert abs(complex(S.trace()) - closed_form_trace(math.pi / 2)) < 1e-15


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5, 4.0, 5.9])
def test_float_trace_formula_and_round_trip(theta):
    P = standard_parabolic(theta, 0, 1)
    assert abs(P.trace() - closed_form_trace(theta)) < 1e-12
    assert abs(abs(P.trace()) ** 2 - (5 + 4 * math.cos(3 * theta))) < 1e-12
    assert abs(parabolic_eigenvalue_from_trace(P.trace()) - cmath.exp(1j * theta)) < 1e-10
    assert classify(P).tag == SCREW


def test_eigenvalue_from_trace_examples(qi):
    i = qi.gen
    assert parabolic_eigenvalue_from_trace(-1 + 2 * i) == i
    assert parabolic_eigenvalue_from_trace(qi(3)) == qi.one
    with pytest.raises(UnipotentTrace):
        parabolic_eigenvalue_from_trace(qi(3), allow_unipotent=False)


def test_eigenvalue_exact_in_trace_subfield():
    K = cyclotomic_field(24)
    z = K.gen
    from su21.numberfield import subfield_generated

    for k in (1, 5, 7):
        P = standard_parabolic(it=K.imag_unit, eitheta=z**k, field=K)
        tr = P.trace()
        e = parabolic_eigenvalue_from_trace(tr)
        assert e == z**k
        assert subfield_generated([tr, tr.conjugate()], K).contains(e).member


def test_nilpotency_index_of_translations(qi):
    for zc in (0, 1, 2 + qi.gen):
        P = standard_parabolic(z=qi(zc), it=3 * qi.gen, eitheta=qi.one, field=qi)
        assert classify(P).nilpotency_index == (2 if zc == 0 else 3)


def test_not_unitary(qi):
    with pytest.raises(NotUnitary):
        classify(Matrix.diag([2, 1, 1], field=qi))


def test_fixed_point_examples(qi):
    i = qi.gen
    P = standard_parabolic(it=2 * i, eitheta=i, field=qi)
    assert parabolic_fixed_point(P) == infinity_lift(qi)
    # with both rotation and horizontal translation the map fixes a point of C:
    # diagonalizable (checked by hand: eigenvalues i, i, -1 with a 2-dim i-eigenspace)
    assert classify(standard_parabolic(z=1 + i, it=2 * i, eitheta=i, field=qi)).tag == ELLIPTIC
    J = siegel_matrix(qi)
    U = standard_parabolic(it=i, eitheta=qi.one, field=qi)
    # the 0 <-> infinity swap carries it to a unipotent fixing 0
    assert parabolic_fixed_point(J @ U @ J) == origin_lift(qi)
    with pytest.raises(NotParabolic):
        parabolic_fixed_point(loxodromic_lift(2 * qi.one))


def test_fixed_point_equivariance_and_eigen_relation(qi):
    i = qi.gen
    Q = standard_parabolic(z=2 - i, it=i, eitheta=qi.one, field=qi) @ siegel_matrix(qi).scale(-1) @ loxodromic_lift(1 + i)
    for P in (
        standard_parabolic(it=2 * i, eitheta=i, field=qi),
        standard_parabolic(z=qi.one, it=i, eitheta=qi.one, field=qi),
        standard_parabolic(it=5 * i, eitheta=-qi.one, field=qi),
    ):
        conj_P = Q @ P @ Q.inverse()
        p = parabolic_fixed_point(conj_P)
        expected = Q @ infinity_lift(qi)
        assert p.cross(expected).is_zero()
        e = classify(conj_P).eigenvalue
        assert conj_P @ p == p.scale(e)


def test_classify_conjugation_invariant(rng):
    cases = [standard_parabolic(0.0, 0, 1), standard_parabolic(0.0, 1, 1), standard_parabolic(1.0, 0, 1), loxodromic_lift(1.7 + 0.2j)]
    for M in cases:
        tag = classify(M).tag
        for _ in range(5):
            Q = random_su21(rng)
            N = Q @ M @ Q.inverse()
            try:
                assert classify(N).tag == tag
            except BoundaryCase:
                pass  # an honest refusal is allowed for ill-conditioned Q


def _dilated(eps):
    return standard_parabolic(0.0, 1, 1) @ Matrix.diag([1 + eps, 1, 1 / (1 + eps)], mode=FLOAT)


def test_float_perturbation_gray_zone():
    assert classify(_dilated(1e-13)).tag == HORIZONTAL
    assert classify(_dilated(1e-2)).tag == LOXODROMIC
    with pytest.raises(BoundaryCase):
        classify(_dilated(3e-3))
    assert classify(loxodromic_lift(1.7 + 0.2j)).tag == LOXODROMIC


def test_discriminant_signs():
    assert goldman_discriminant(3) == 0
    assert goldman_discriminant(complex(-1, 2)) == pytest.approx(0, abs=1e-12)
    assert goldman_discriminant(10) > 0
    assert goldman_discriminant(1) < 0


def test_lifts(qi):
    K = cyclotomic_field(12)
    M = standard_parabolic(z=K.one, it=K.imag_unit, eitheta=K.one, field=K)
    T = lifts(M)
    w = T.omega
    assert [L.trace() for L in T.lifts] == [M.trace(), w * M.trace(), w * w * M.trace()]
    assert all(L.det() == K.one for L in T.lifts)
    I3 = lifts(Matrix.identity(3, K))
    assert I3.lifts[1] == Matrix.identity(3, K).scale(w)
    with pytest.raises(CubeRootUnavailable):
        lifts(Matrix.identity(3, qi))


def test_boundary_action(qi):
    b = loxodromic_boundary_action(2, BoundaryPoint(1, 1))
    assert b.z == pytest.approx(2) and b.t == pytest.approx(4)
    o = loxodromic_boundary_action(2, BoundaryPoint(0, 0))
    assert o.z == 0 and o.t == 0
    assert loxodromic_boundary_action(2, BoundaryPoint(infinity=True)).infinity
    back = loxodromic_boundary_action(0.5, b)
    assert back.z == pytest.approx(1) and back.t == pytest.approx(1)


def test_boundary_action_matches_matrix(rng):
    for _ in range(20):
        lam = cmath.rect(rng.uniform(0.3, 3), rng.uniform(0, 6))
        z, t = complex(rng.gauss(0, 1), rng.gauss(0, 1)), rng.gauss(0, 1)
        v = loxodromic_lift(lam) @ horospherical_lift(z, t)
        v = v.scale(1 / v[2])
        b = loxodromic_boundary_action(lam, BoundaryPoint(z, t))
        assert np.allclose(v.to_numpy(), horospherical_lift(b.z, b.t).to_numpy(), atol=1e-10)
