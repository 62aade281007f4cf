"""Sample groups and forms used by the documentation examples and the test suite."""
from __future__ import annotations

from fractions import Fraction

from .hermitian import siegel_matrix
from .isometry import loxodromic_lift, standard_parabolic
from .linalg import Matrix
from .numberfield import NumberField, multiquadratic_field


def gaussian_field() -> NumberField:
    return NumberField([1, 0, 1], name="Q(i)")


def eisenstein_field() -> NumberField:
    """Q(i sqrt 3), generated by a = i sqrt 3."""
    return NumberField([3, 0, 1], name="Q(i sqrt3)")


def picard_generators(d: int) -> list[Matrix]:
    """Generators of a subgroup of SU(2,1; O_d) for d in {1, 3}.

    A unipotent parabolic, the involution -J and a diagonal elliptic.
    """
    if d == 1:
        K = gaussian_field()
        i = K.gen
        P = standard_parabolic(z=1 + i, it=2 * i, eitheta=K.one, field=K)
        R = Matrix.diag([i, -K.one, i], field=K)
    elif d == 3:
        K = eisenstein_field()
        s = K.gen  # i sqrt 3
        u = (1 + s) / 2  # e^{i pi / 3}
        P = standard_parabolic(z=K.one, it=s, eitheta=K.one, field=K)
        R = Matrix.diag([u, u.conjugate() / u, u.conjugate().inverse()], field=K)
    else:
        raise ValueError("only d = 1 and d = 3 are provided")
    return [P, -siegel_matrix(K), R]


def messy_conjugation():
    """The d = 1 generators conjugated into Q(i, sqrt 2) by an unrelated SU(J) element.

    Returns (field, conjugated generators, conjugator X).
    """
    G, roots = multiquadratic_field([-1, 2])
    i, r2 = roots[-1], roots[2]
    J = siegel_matrix(G)
    P1 = standard_parabolic(z=r2 + i / 2, it=i * r2 / 3, eitheta=G.one, field=G)
    P2 = standard_parabolic(z=Fraction(1, 3) + i * r2, it=i * Fraction(5, 7), eitheta=G.one, field=G)
    D = loxodromic_lift(1 + r2, field=G)
    X = P1 @ D @ J @ P2 @ J
    Xi = X.inverse()
    gens = []
    for g in picard_generators(1):
        gG = Matrix([[G(x.coords[0]) + i * x.coords[1] for x in r] for r in g.rows], field=G)
        gens.append(X @ gG @ Xi)
    return G, gens, X


def remark_pair() -> list[Matrix]:
    """Two elements preserving the complex line through 0 and infinity.

    They generate a non Zariski-dense subgroup (spans dimension 5).
    """
    K = gaussian_field()
    i = K.gen
    P = Matrix([[1, 0, i / 2], [0, 1, 0], [0, 0, 1]], field=K)
    L = -Matrix([[0, 0, i / 2], [0, -1, 0], [2 * i, 0, 1]], field=K)
    return [P, L]


def sqrt2_pair():
    """E = Q(i, sqrt 2) with H = diag(1, 1, -sqrt 2) and an integral loxodromic in SU(H).

    Returns (E, H, gamma, roots) with roots = {-1: i, 2: sqrt 2}.
    """
    E, roots = multiquadratic_field([-1, 2])
    r2 = roots[2]
    H = Matrix.diag([E.one, E.one, -r2])
    x, y = 3 + 2 * r2, 2 + 2 * r2  # x^2 - sqrt2 y^2 = 1
    gamma = Matrix([[x, 0, r2 * y], [0, 1, 0], [y, 0, x]], field=E)
    return E, H, gamma, roots


def sqrt15_example():
    """The SU(1,1) element g = s [[2, 1], [sqrt15, 2]] with s^2 = 4 + sqrt 15.

    Lives in K = Q(i, sqrt 6, sqrt 10), where s = (sqrt 10 + sqrt 6)/2.
    Returns (K, H, g, named elements).
    """
    K, roots = multiquadratic_field([-1, 6, 10])
    i = roots[-1]
    s15 = roots[6] * roots[10] / 2
    s = (roots[10] + roots[6]) / 2
    H = Matrix.diag([-s15, K.one])
    g = Matrix([[2 * s, s], [s15 * s, 2 * s]], field=K)
    return K, H, g, {"i": i, "sqrt15": s15, "s": s}
