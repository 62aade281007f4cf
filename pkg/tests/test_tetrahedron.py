import cmath
import random

import numpy as np
import pytest
import sympy as sp

from conftest import random_su21
from su21.errors import DegeneratePosition, InconsistentInvariant
from su21.hermitian import horospherical_lift, infinity_lift, origin_lift
from su21.linalg import FLOAT, Matrix, Vector
from su21.numberfield import contains, cyclotomic_field, subfield_generated
from su21.samples import eisenstein_field, gaussian_field
from su21.tetrahedron import (
    IdealTetrahedron,
    TetraInvariant,
    conjugate_invariant,
    conjugate_z1,
    genericity,
    invariant_field,
    invariants,
    reconstruct_p3,
    standard_vertices,
    triple_to_matrix,
    vertex_t,
)


@pytest.fixture(scope="module")
def K():
    return gaussian_field()


def pt(K, z, t):
    return horospherical_lift(K(z), K(t), field=K)


def concrete(K):
    i = K.gen
    return IdealTetrahedron((infinity_lift(K), pt(K, 0, 0), pt(K, 1, 1), pt(K, i, 2)))


def random_point(rng):
    z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    return horospherical_lift(z, rng.uniform(-2, 2))


def random_tetra(rng):
    return IdealTetrahedron(tuple(random_point(rng) for _ in range(4)))


def proj_dist(a, b):
    # sine of the angle between the complex lines, from the wedge product
    a, b = a.to_numpy(), b.to_numpy()
    w = np.outer(a, b) - np.outer(b, a)
    return float(np.linalg.norm(w) / (np.sqrt(2) * np.linalg.norm(a) * np.linalg.norm(b)))


def close(a, b, tol):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


# -- genericity -----------------------------------------------------------------------


def test_genericity_examples(K):
    assert genericity(concrete(K))
    # (0, t) lies on the C-circle through 0 and infinity
    bad = (infinity_lift(K), pt(K, 0, 0), pt(K, 0, 3), pt(K, K.gen, 2))
    assert not genericity(bad)
    eps = K(1) / 1000
    assert genericity((infinity_lift(K), pt(K, 0, 0), pt(K, eps, 3), pt(K, K.gen, 2)))
    with pytest.raises(DegeneratePosition):
        invariants(IdealTetrahedron(bad))


# -- invariants ------------------------------------------------------------------------------


def _sympy_invariants(T):
    # independent route: sympy matrices, polar vectors from a nullspace
    J = sp.Matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    vs = [sp.Matrix([sp.nsimplify(complex(x).real) + sp.I * sp.nsimplify(complex(x).imag) for x in v.entries]) for v in T.vertices]

    def ip(z, w):
        return sp.expand((w.H * J * z)[0])

    def polar(a, b):
        return sp.Matrix.vstack((J * a).H, (J * b).H).nullspace()[0]

    def cr(a, b, c, d):
        return sp.nsimplify(sp.simplify(ip(c, a) * ip(d, b) / (ip(d, a) * ip(c, b))))

    p0, p1, p2, p3 = vs
    c01, c23 = polar(p0, p1), polar(p2, p3)
    return (cr(p0, c01, p2, p3), cr(p1, c01, p3, p2), cr(p2, c23, p0, p1), cr(p3, c23, p1, p0))


def test_concrete_tetrahedron_two_routes(K):
    T = concrete(K)
    inv = invariants(T)
    for mine, ref in zip(inv.as_tuple(), _sympy_invariants(T)):
        assert abs(complex(mine) - complex(ref)) < 1e-12


def test_scale_invariance_exact(K):
    T = concrete(K)
    i = K.gen
    S = IdealTetrahedron(tuple(v.scale(c) for v, c in zip(T.vertices, (2 + i, K(-3), i, 1 - 5 * i))))
    assert invariants(S) == invariants(T)


def test_unitary_invariance_exact(K):
    from su21.isometry import loxodromic_lift, standard_parabolic
    from su21.hermitian import siegel_matrix

    i = K.gen
    Q = standard_parabolic(z=2 - i, it=i, eitheta=i, field=K) @ siegel_matrix(K) @ loxodromic_lift(1 + 2 * i)
    T = concrete(K)
    assert invariants(T.transform(Q)) == invariants(T)


def test_conjugation_covariance(K):
    T = concrete(K)
    Tc = IdealTetrahedron(tuple(v.conjugate() for v in T.vertices))
    assert invariants(Tc) == invariants(T).conjugate()


def test_conjugate_z1_exact(K):
    inv = invariants(concrete(K))
    assert conjugate_z1(inv) == inv.z1.conjugate()
    assert conjugate_invariant(inv) == inv.conjugate()


def test_real_configuration_is_fixed(K):
    # all lifts real: the tetrahedron is symmetric under complex conjugation
    T = IdealTetrahedron((infinity_lift(K), pt(K, 0, 0), pt(K, 1, 0), pt(K, 3, 0)))
    inv = invariants(T)
    assert all(z.conjugate() == z for z in inv.as_tuple())
    assert conjugate_z1(inv) == inv.z1


def test_random_quadruple_violates_relation():
    rng = random.Random(5)
    bad = 0
    for _ in range(20):
        q = TetraInvariant(*(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4)))
        bad += abs(conjugate_z1(q) - q.z1.conjugate()) > 1e-3
    assert bad >= 19


# -- vertex_t ------------------------------------------------------------------------------------


def test_vertex_t_exact(K):
    i = K.gen
    p0, p1, p2 = standard_vertices(i)
    for p3 in (pt(K, 2 + i, 1), pt(K, -1, 5)):
        assert vertex_t(invariants(IdealTetrahedron((p0, p1, p2, p3)))) == i
    q0, q1, q2 = standard_vertices(-i)
    assert vertex_t(invariants(IdealTetrahedron((q0, q1, q2, pt(K, 2 + i, 1))))) == -i


def test_vertex_t_float_property(rng):
    for _ in range(30):
        t = rng.uniform(-3, 3)
        p3 = random_point(rng)
        a = vertex_t(invariants(IdealTetrahedron((*standard_vertices(1j * t), p3))))
        b = vertex_t(invariants(IdealTetrahedron((*standard_vertices(-1j * t), p3))))
        assert abs(a.real) < 1e-9 and abs(a - 1j * t) < 1e-9
        assert abs(b + a) < 1e-9


# -- reconstruction --------------------------------------------------------------------------------


def test_reconstruct_exact_round_trip(K):
    T = concrete(K)
    inv = invariants(T)
    p3 = reconstruct_p3(*T.vertices[:3], inv)
    assert p3.cross(T.vertices[3]).is_zero()


def test_reconstruct_perturbed_invariant(K):
    T = concrete(K)
    inv = invariants(T)
    bad = TetraInvariant(inv.z1 + 1, inv.z1p, inv.z1t, inv.z1tp)
    with pytest.raises(InconsistentInvariant):
        reconstruct_p3(*T.vertices[:3], bad)


def test_reconstruct_equivariant(rng):
    T = random_tetra(rng)
    Q = random_su21(rng)
    inv = invariants(T)
    p3 = reconstruct_p3(*(Q @ v for v in T.vertices[:3]), inv)
    assert proj_dist(p3, Q @ T.vertices[3]) < 1e-8


def test_invariant_suite_100_random(rng):
    for _ in range(100):
        T = random_tetra(rng)
        Q = random_su21(rng)
        inv = invariants(T)
        moved = invariants(T.transform(Q))
        assert all(close(a, b, 1e-9) for a, b in zip(moved.as_tuple(), inv.as_tuple()))
        assert close(conjugate_z1(inv), inv.z1.conjugate(), 1e-9)
        assert proj_dist(reconstruct_p3(*T.vertices[:3], inv), T.vertices[3]) < 1e-8


# -- triples -------------------------------------------------------------------------------------------


def _maps_standard(M, res, p0, p1, p2, tol):
    inf = infinity_lift(mode=FLOAT)
    zero = origin_lift(mode=FLOAT)
    src = Vector([complex(x) for x in res.source.entries], mode=FLOAT)
    return all(proj_dist(M @ a, b) < tol for a, b in ((inf, p0), (zero, p1), (src, p2)))


def test_standard_triple_gives_identity():
    Z = cyclotomic_field(12)
    zero, inf, p2 = standard_vertices(Z.imag_unit)
    res = triple_to_matrix(inf, zero, p2)
    assert len(res.candidates) == 3
    assert Matrix.identity(3, Z) in res.candidates


def test_random_triples_float():
    rng = random.Random(11)
    w = cmath.exp(2j * cmath.pi / 3)
    for _ in range(50):
        p0, p1, p2 = (random_point(rng) for _ in range(3))
        res = triple_to_matrix(p0, p1, p2)
        assert len(res.candidates) == 3
        for M in res.candidates:
            assert _maps_standard(M, res, p0, p1, p2, 1e-9)
        A = res.candidates[0].to_numpy()
        for M in res.candidates[1:]:
            ratio = M.to_numpy() @ np.linalg.inv(A)
            assert min(np.abs(ratio - w * np.eye(3)).max(), np.abs(ratio - w * w * np.eye(3)).max()) < 1e-9


def test_triple_exact_identities(K):
    i = K.gen
    p0, p1, p2 = pt(K, 1 + i, 2), pt(K, -i, 0), pt(K, 2, -1)
    res = triple_to_matrix(p0, p1, p2)
    # |lambda|^2 real positive and lambda^3 conj(lambda^3) = (|lambda|^2)^3
    assert res.lambda_abs2.conjugate() == res.lambda_abs2 and K.sign(res.lambda_abs2) > 0
    assert res.lambda_cubed * res.lambda_cubed.conjugate() == res.lambda_abs2**3
    coord = subfield_generated([c for v in (p0, p1, p2) for x in v.entries for c in (x, x.conjugate())], K)
    for r in res.cube.rows:
        for x in r:
            m = contains(coord, x)
            assert m.member and coord.element(m.coords) == x
    # M = lambda B with B = m_over_lambda; M^3 = lambda^3 B^3
    B = res.m_over_lambda
    assert res.cube == (B @ B @ B).scale(res.lambda_cubed)
    assert (B @ infinity_lift(K)).cross(p0).is_zero()
    assert (B @ origin_lift(K)).cross(p1).is_zero()
    assert (B @ res.source).cross(p2).is_zero()


# -- invariant field -------------------------------------------------------------------------------------


def test_invariant_field_gaussian(K):
    rep = invariant_field([concrete(K)])
    assert rep.field.degree <= 2
    assert subfield_generated([K.gen], K).issubset(rep.field) or rep.field.degree == 1


def test_invariant_field_empty():
    assert invariant_field([]).field.degree == 1


def test_normalized_complex_eisenstein():
    E = eisenstein_field()
    s = E.gen

    def p(z, it):
        return horospherical_lift(E(z), None, it=E(it), field=E)

    base = [infinity_lift(E), origin_lift(E), p(1, s)]
    tets = [IdealTetrahedron((*base, p(2 + s / 2, s / 3))), IdealTetrahedron((*base, p((1 + s) / 3, -s)))]
    rep = invariant_field(tets, normalized=True)
    assert rep.equal and rep.field.same_span(rep.coordinate_field)
    assert rep.field.degree == 2


def test_float_invariant_field_rejected(rng):
    from su21.errors import FieldRepresentationFailure

    with pytest.raises(FieldRepresentationFailure):
        invariant_field([random_tetra(rng)])
