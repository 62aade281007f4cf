import random
import time
from collections import Counter

import pytest

from conftest import random_su21
from su21.errors import FloatModeUnsupported, HypothesisNotCertified, NotFound
from su21.hermitian import infinity_lift, is_special_unitary, origin_lift, siegel_matrix
from su21.isometry import PARABOLIC_TAGS, classify, loxodromic_lift, standard_parabolic
from su21.linalg import FLOAT, Matrix
from su21.numberfield import contains
from su21.samples import gaussian_field, messy_conjugation, picard_generators, remark_pair
from su21.tracefield import (
    Word,
    cube_trace_field,
    enumerate_words,
    find_companion,
    find_parabolic,
    move_to_standard_position,
    rationalize_group,
    t_functional,
    trace_field,
    word_traces,
    zariski_density_check,
)


@pytest.fixture(scope="module")
def K():
    return gaussian_field()


def exact_su(K):
    i = K.gen
    return standard_parabolic(z=2 - i, it=i, eitheta=K.one, field=K) @ siegel_matrix(K).scale(-1) @ loxodromic_lift(1 + i)


# -- words -----------------------------------------------------------------------


def test_word_counts(K):
    g = loxodromic_lift(2 * K.one)
    words = [w for w, _ in enumerate_words([g], 2)]
    assert [str(w) for w in words] == ["g0", "g0^-1", "g0 g0", "g0^-1 g0^-1"]
    gens = [g, siegel_matrix(K).scale(-1)]
    assert len(list(enumerate_words(gens, 1))) == 4
    assert len(list(enumerate_words(gens, 3))) == 4 + 12 + 36


def test_word_matrices_and_inverse(K):
    gens = picard_generators(1)
    for w, M in enumerate_words(gens, 3):
        assert w.evaluate(gens) == M
        assert w.inverse().evaluate(gens) @ M == Matrix.identity(3, K)


# -- trace fields ---------------------------------------------------------------------


def test_identity_group_trace_field_is_q(K):
    rep = trace_field([Matrix.identity(3, K)], 3)
    assert rep.field.degree == 1
    assert cube_trace_field([Matrix.identity(3, K)], 3).field.degree == 1


@pytest.mark.parametrize("d", [1, 3])
def test_picard_trace_fields(d):
    gens = picard_generators(d)
    rep = trace_field(gens, 4)
    F = gens[0].field
    assert rep.field.degree == 2 and rep.stabilized
    assert not rep.field.is_real()
    # the field is Q(i sqrt d): contains i sqrt d, which squares to -d
    isd = F.gen if d == 3 else F.gen
    assert rep.field.contains(isd).member and isd * isd == F(-d)
    cubes = cube_trace_field(gens, 4)
    assert cubes.field.same_span(rep.field)
    assert cube_trace_field(gens, 2).field.issubset(trace_field(gens, 6).field)


def test_traces_conjugation_invariant(K):
    gens = picard_generators(1)
    Q = exact_su(K)
    Qi = Q.inverse()
    conj_gens = [Q @ g @ Qi for g in gens]
    assert Counter(word_traces(gens, 3)) == Counter(word_traces(conj_gens, 3))
    assert trace_field(conj_gens, 3).field.same_span(trace_field(gens, 3).field)


def test_float_trace_field_unsupported():
    gens = [standard_parabolic(0.5, 1, 1)]
    with pytest.raises(FloatModeUnsupported):
        trace_field(gens, 2)
    assert len(word_traces(gens, 2)) == 4


# -- density ------------------------------------------------------------------------------


def test_single_unipotent_not_dense(K):
    P = standard_parabolic(z=K.one, it=K.gen, eitheta=K.one, field=K)
    res = zariski_density_check([P], 6)
    assert not res.dense and res.dimension <= 3
    assert res.witness[0] == Word()


@pytest.mark.parametrize("depth", [1, 2, 3, 4, 5, 6])
def test_remark_pair_not_dense(depth):
    res = zariski_density_check(remark_pair(), depth)
    assert not res.dense and res.dimension < 9


def test_random_float_pair_dense(rng):
    res = zariski_density_check([random_su21(rng), random_su21(rng)], 3)
    assert res.dense and len(res.witness) == 9


# -- parabolic / companion search -----------------------------------------------------------


def test_find_parabolic_length_one(K):
    P = standard_parabolic(it=K.gen, eitheta=K.one, field=K)
    w, M = find_parabolic([loxodromic_lift(2 * K.one), P], 3)
    assert w == Word(((1, 1),))


def test_find_parabolic_cyclic_loxodromic(K):
    with pytest.raises(NotFound):
        find_parabolic([loxodromic_lift(2 * K.one)], 5)


def test_parabolic_commutator_at_depth_four(K):
    # two loxodromics sharing the fixed point infinity: dilation parts 2^a 3^b
    # vanish only for words with zero exponent sums, the first being commutators
    T = standard_parabolic(z=K.one, it=K.zero, eitheta=K.one, field=K)
    A = loxodromic_lift(2 * K.one)
    B = T @ loxodromic_lift(3 * K.one) @ T.inverse()
    with pytest.raises(NotFound):
        find_parabolic([A, B], 3)
    w, M = find_parabolic([A, B], 4)
    assert len(w) == 4 and classify(M).tag in PARABOLIC_TAGS
    assert Counter(i for i, _ in w.letters) == {0: 2, 1: 2}


def test_find_companion(K):
    i = K.gen
    # a horizontal component keeps <P, L> off the complex line through 0 and infinity
    P = standard_parabolic(z=K.one, it=i, eitheta=K.one, field=K)
    L0 = siegel_matrix(K).scale(-1) @ Matrix.diag([i, -K.one, i], field=K)
    w, L = find_companion([P, L0], P, 2)
    assert not (L @ infinity_lift(K)).cross(infinity_lift(K)).is_zero()
    assert zariski_density_check([P, L], 3).dense


def test_companion_not_found_elementary(K):
    P = standard_parabolic(it=K.gen, eitheta=K.one, field=K)
    with pytest.raises(NotFound):
        find_companion([P, loxodromic_lift(2 * K.one)], P, 3)


def test_companion_not_found_remark():
    P, L = remark_pair()
    with pytest.raises(NotFound):
        find_companion([P, L], P, 4)


# -- standard position -------------------------------------------------------------------------


def _check_standard(Q, P, L, K):
    inf, zero = infinity_lift(K), origin_lift(K)
    Qi = Q.inverse()
    assert is_special_unitary(Q)
    assert ((Q @ P @ Qi) @ inf).cross(inf).is_zero()
    assert ((Q @ L @ Qi) @ inf).cross(zero).is_zero()


def test_standard_position_trivial_case(K):
    P = standard_parabolic(it=K.gen, eitheta=K.one, field=K)
    L = siegel_matrix(K).scale(-1)
    _check_standard(move_to_standard_position(P, L), P, L, K)


def test_standard_position_random_conjugate(K):
    P = standard_parabolic(z=K.one, it=K.gen, eitheta=K.one, field=K)
    L = siegel_matrix(K).scale(-1) @ Matrix.diag([K.gen, -K.one, K.gen], field=K)
    Q0 = exact_su(K)
    Pc, Lc = Q0 @ P @ Q0.inverse(), Q0 @ L @ Q0.inverse()
    _check_standard(move_to_standard_position(Pc, Lc), Pc, Lc, K)


# -- t functional --------------------------------------------------------------------------------


def test_t_functional_identity(K):
    i = K.gen
    P = standard_parabolic(z=K.one, it=i, eitheta=i, field=K)
    e = i
    expected = (P.trace() - 3 * e) * (e**-2 + e) - ((P @ P).trace() - 3 * e**2)
    assert t_functional(Matrix.identity(3, K), P, e) == expected


def _case1(K, e, lam, u):
    i = K.gen
    lb = lam.conjugate()
    P = Matrix([[e, 0, e * i / 2], [0, e**-2, 0], [0, 0, e]], field=K)
    L = Matrix([[0, 0, 1 / lb], [0, -lb / lam, i / lb], [lam, -i * lb / lam, (-1 + i * u) / (2 * lb)]], field=K)
    return P, L


@pytest.mark.parametrize("lam", [1, 2, "1+i"])
def test_t_functional_case1_two_routes(K, lam):
    i = K.gen
    lam = 1 + i if lam == "1+i" else K(lam)
    P, L = _case1(K, i, lam, 0)
    assert is_special_unitary(L) and is_special_unitary(P)
    assert t_functional(L, P, i) == -((i**3 - 1) / (2 * i)) * i * lam


def test_unipotent_case_trace_difference(K):
    i = K.gen
    for lam in (K.one, 2 + i):
        P, L = _case1(K, K.one, lam, 3)
        assert (L @ P).trace() - L.trace() == i * lam / 2


# -- rationalization ---------------------------------------------------------------------------------


def test_rationalize_messy_conjugate():
    G, gens, X = messy_conjugation()
    t0 = time.time()
    res = rationalize_group(gens, 4)
    assert time.time() - t0 < 60
    i = G.roots_of(G(-1), 2)[0]
    assert res.trace_field.degree == 2 and res.trace_field.contains(i).member
    C = res.conjugator
    for g, h, cert in zip(gens, res.conjugated_gens, res.certificates):
        assert C @ g @ C.inverse() == h
        for a in range(3):
            for b in range(3):
                assert res.trace_field.element(cert[a][b]) == h[a, b]
        assert is_special_unitary(h, res.form)


def test_rationalize_recovery_reproduces_generators():
    G, gens, _ = messy_conjugation()
    res = rationalize_group(gens, 4)
    words = res.basis_words
    for h, coeffs in zip(res.conjugated_gens, res.recovery):
        basis = [w.evaluate(list(res.conjugated_gens)) for w in words]
        X = basis[0].scale(0)
        for c, A in zip(coeffs, basis):
            X = X + A.scale(c)
        assert X == h


def test_rationalize_remark_pair():
    with pytest.raises(HypothesisNotCertified, match="zariski_density_check failed"):
        rationalize_group(remark_pair(), 6)


def test_rationalize_identity_group(K):
    with pytest.raises(HypothesisNotCertified):
        rationalize_group([Matrix.identity(3, K)], 3)
