"""Words, trace fields, Zariski density and rationalization of subgroups of SU(2,1).

Rationalization conjugates a group into SU(2,1) with entries in its trace
field K. Once a parabolic P and a companion L generating a Zariski dense
subgroup are found, the pair is moved to standard position (P fixes
infinity, L sends infinity to 0). The frame of that position is K-rational
up to a diagonal rescaling, which is fixed by making a spanning set of
entries of L and P equal to 1. Each generator X is then recovered from the
traces Tr(X A_k) against a basis A_0 = Id, A_1, ..., A_8 of words in P and L.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DegenerateConfiguration,
    FloatModeUnsupported,
    GramSingular,
    HypothesisNotCertified,
    InternalContradiction,
    NotFound,
)
from .hermitian import HermitianForm, inner, polar_vector, siegel_matrix, transport_form
from .isometry import PARABOLIC_TAGS, classify, repeated_eigenvalue
from .linalg import DEFAULT_TOL, EXACT, FLOAT, Matrix, Vector, conj, same_mode
from .numberfield import FieldElement, SubfieldBasis, subfield_generated

DENSITY_DIM = 9


@dataclass(frozen=True)
class Word:
    """A reduced word; letters are (generator index, +1 or -1)."""

    letters: tuple[tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "Id"
        return " ".join(f"g{i}" if s > 0 else f"g{i}^-1" for i, s in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((i, -s) for i, s in reversed(self.letters)))

    def evaluate(self, gens: Sequence[Matrix], inverses: Sequence[Matrix] | None = None) -> Matrix:
        inverses = inverses or [g.inverse() for g in gens]
        M = Matrix.identity(gens[0].shape[0], gens[0].field, gens[0].mode)
        for i, s in self.letters:
            M = M @ (gens[i] if s > 0 else inverses[i])
        return M

    def to_json(self) -> list[list[int]]:
        return [[i, s] for i, s in self.letters]


def _letters(n: int):
    return [(i, s) for i in range(n) for s in (1, -1)]


def enumerate_words(gens: Sequence[Matrix], max_length: int, include_identity: bool = False) -> Iterator[tuple[Word, Matrix]]:
    """All reduced words of length 1..max_length in shortlex order, with their matrices."""
    if not gens:
        return
    inverses = [g.inverse() for g in gens]
    mats = {(i, 1): g for i, g in enumerate(gens)}
    mats.update({(i, -1): g for i, g in enumerate(inverses)})
    letters = _letters(len(gens))
    if include_identity:
        yield Word(), Matrix.identity(gens[0].shape[0], gens[0].field, gens[0].mode)
    layer = [(Word(), Matrix.identity(gens[0].shape[0], gens[0].field, gens[0].mode))]
    for _ in range(max_length):
        nxt = []
        for w, M in layer:
            last = w.letters[-1] if w.letters else None
            for a in letters:
                if last is not None and a[0] == last[0] and a[1] == -last[1]:
                    continue
                item = (Word(w.letters + (a,)), M @ mats[a])
                nxt.append(item)
                yield item
        layer = nxt


def word_traces(gens: Sequence[Matrix], depth: int, cubes: bool = False) -> list:
    out = []
    for _, M in enumerate_words(gens, depth):
        out.append((M @ M @ M).trace() if cubes else M.trace())
    return out


# ---------------------------------------------------------------------------
# trace fields


@dataclass(frozen=True)
class TraceFieldReport:
    field: SubfieldBasis
    depth: int
    stabilized: bool
    degrees: tuple[int, ...]  # degree of the field after each depth 1..depth
    cubes: bool = False

    @property
    def degree(self) -> int:
        return self.field.degree

    def contains(self, a):
        return self.field.contains(a)


def _require_exact(gens):
    if not gens:
        return None
    mode = same_mode(*gens)
    if mode != EXACT:
        raise FloatModeUnsupported("trace fields need exact entries; use word_traces for floats")
    return gens[0].field


def _trace_field(gens, depth, cubes):
    F = _require_exact(gens)
    if F is None or depth < 1:
        from .numberfield import QQ

        F = F or QQ
        return TraceFieldReport(subfield_generated([], F), depth, True, (), cubes)
    by_len: dict[int, list] = {}
    for w, M in enumerate_words(gens, depth):
        t = (M @ M @ M).trace() if cubes else M.trace()
        by_len.setdefault(len(w), []).extend([t, conj(t)])
    gathered = []
    degrees = []
    sub = subfield_generated([], F)
    for k in range(1, depth + 1):
        gathered.extend(by_len.get(k, []))
        new = [t for t in by_len.get(k, []) if not sub.contains(t).member]
        if new:
            sub = subfield_generated(list(sub.basis) + new, F)
        degrees.append(sub.degree)
    stabilized = depth == 1 and degrees[0] == 1 or len(degrees) >= 2 and degrees[-1] == degrees[-2]
    return TraceFieldReport(sub, depth, bool(stabilized), tuple(degrees), cubes)


def trace_field(gens: Sequence[Matrix], depth: int) -> TraceFieldReport:
    """Field generated by traces (and their conjugates) of words up to `depth`."""
    return _trace_field(list(gens), depth, cubes=False)


def cube_trace_field(gens: Sequence[Matrix], depth: int) -> TraceFieldReport:
    """Field generated by traces of cubes of words up to `depth`."""
    return _trace_field(list(gens), depth, cubes=True)


# ---------------------------------------------------------------------------
# Zariski density


class _Span:
    """Incremental echelon basis of a subspace of E^n (or C^n)."""

    def __init__(self, mode, tol=DEFAULT_TOL):
        self.mode = mode
        self.tol = tol
        self.rows: list = []
        self.pivots: list[int] = []
        self.float_rows: list = []

    def add(self, vec) -> bool:
        if self.mode == FLOAT:
            v = np.array([complex(x) for x in vec])
            trial = np.array(self.float_rows + [v])
            sv = np.linalg.svd(trial, compute_uv=False)
            if sv[-1] > self.tol * 1e3 * max(1.0, sv[0]):
                self.float_rows.append(v)
                return True
            return False
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if not v[p].is_zero():
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        p = next((j for j, a in enumerate(v) if not a.is_zero()), None)
        if p is None:
            return False
        inv = v[p].inverse()
        v = [a * inv for a in v]
        # keep rows reduced at the new pivot
        self.rows = [[a - r[p] * b for a, b in zip(r, v)] if not r[p].is_zero() else r for r in self.rows]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    @property
    def dim(self):
        return len(self.float_rows) if self.mode == FLOAT else len(self.rows)


@dataclass(frozen=True)
class DensityResult:
    dense: bool
    dimension: int
    witness: tuple[Word, ...]
    witness_matrices: tuple[Matrix, ...] = dc_field(default=(), repr=False)

    def __bool__(self):
        return self.dense


def zariski_density_check(gens: Sequence[Matrix], depth: int, tol: float = DEFAULT_TOL) -> DensityResult:
    """Does the span of word matrices up to `depth` reach all of M_3?"""
    gens = list(gens)
    if not gens:
        return DensityResult(False, 1, (Word(),))
    span = _Span(gens[0].mode, tol)
    witness, mats = [], []
    for w, M in enumerate_words(gens, depth, include_identity=True):
        if span.add(M.entries()):
            witness.append(w)
            mats.append(M)
            if span.dim == DENSITY_DIM:
                break
    return DensityResult(span.dim == DENSITY_DIM, span.dim, tuple(witness), tuple(mats))


# ---------------------------------------------------------------------------
# parabolic and companion search


def find_parabolic(gens: Sequence[Matrix], depth: int, H=None, tol: float = DEFAULT_TOL) -> tuple[Word, Matrix]:
    for w, M in enumerate_words(list(gens), depth):
        if classify(M, H, tol, check=False, details=False).tag in PARABOLIC_TAGS:
            return w, M
    raise NotFound(f"no parabolic element among words of length <= {depth}")


def _proportional(u: Vector, v: Vector, tol: float) -> bool:
    c = u.cross(v)
    if u.mode == EXACT:
        return c.is_zero()
    return c.is_zero(tol * max(1.0, float(np.linalg.norm(u.to_numpy()) * np.linalg.norm(v.to_numpy()))))


def find_companion(
    gens: Sequence[Matrix], P: Matrix, depth: int, H=None, tol: float = DEFAULT_TOL
) -> tuple[Word, Matrix]:
    """A word L moving the fixed point of P with <P, L> Zariski dense."""
    p = classify(P, H, tol, check=False).fixed_points[0]
    for w, L in enumerate_words(list(gens), depth):
        if _proportional(L @ p, p, tol):
            continue
        if zariski_density_check([P, L], max(depth, 3), tol).dense:
            return w, L
    raise NotFound(f"no companion for the parabolic among words of length <= {depth}")


def move_to_standard_position(P: Matrix, L: Matrix, H=None, tol: float = DEFAULT_TOL) -> Matrix:
    """Q with Q P Q^-1 fixing infinity and Q L Q^-1 sending infinity to 0.

    Columns of Q^-1 are the fixed point p of P, a polar vector c of p and Lp,
    and Lp scaled so <Lp, p> = 1. Dividing c by the determinant of the frame
    makes Q^-1 special unitary for J without adjoining any square root.
    """
    Hm = siegel_matrix(P.field, P.mode) if H is None else (H.matrix if isinstance(H, HermitianForm) else H)
    p = classify(P, Hm, tol, check=False).fixed_points[0]
    q = L @ p
    if _proportional(q, p, tol):
        raise DegenerateConfiguration("L fixes the fixed point of P")
    a = inner(p, q, Hm)
    q1 = q.scale(1 / conj(a) if P.mode == FLOAT else conj(a).inverse())
    c0 = polar_vector(p, q1, Hm)
    N0 = Matrix.from_columns([p, c0, q1])
    d0 = N0.det()
    c = c0.scale(1 / d0 if P.mode == FLOAT else d0.inverse())
    N = Matrix.from_columns([p, c, q1])
    return N.inverse()


def t_functional(X: Matrix, P: Matrix, e):
    """(Tr PX - e Tr X)(e^-2 + e) - (Tr P^2 X - e^2 Tr X), e the double eigenvalue of P."""
    trX = X.trace()
    e2 = e * e
    einv2 = 1 / e2 if not isinstance(e, FieldElement) else e2.inverse()
    return ((P @ X).trace() - e * trX) * (einv2 + e) - ((P @ P @ X).trace() - e2 * trX)


# ---------------------------------------------------------------------------
# rationalization


@dataclass(frozen=True)
class RationalizationResult:
    conjugator: Matrix
    conjugated_gens: tuple[Matrix, ...]
    trace_field: SubfieldBasis
    certificates: tuple  # per generator: 3x3 nested tuples of rational coordinate tuples
    case_tag: str
    form: Matrix
    parabolic_word: Word
    companion_word: Word
    basis_words: tuple[Word, ...]
    recovery: tuple  # per generator: coefficients over the basis words (field elements)
    diagnostics: dict


def _dilation(Ps: Sequence[Matrix]) -> Matrix:
    """Diagonal D making a spanning tree of nonzero off-diagonal entries equal to 1."""
    F = Ps[0].field
    d: dict[int, FieldElement] = {0: F.one}
    changed = True
    while len(d) < 3 and changed:
        changed = False
        for M in Ps:
            for i in range(3):
                for j in range(3):
                    if i == j or M[i, j].is_zero():
                        continue
                    # (D M D^-1)_ij = d_i m_ij / d_j
                    if j in d and i not in d:
                        d[i] = d[j] * M[i, j].inverse()
                        changed = True
                    elif i in d and j not in d:
                        d[j] = d[i] * M[i, j]
                        changed = True
    if len(d) < 3:
        raise InternalContradiction("the pair stabilizes a coordinate line")
    return Matrix.diag([d[0], d[1], d[2]], field=F)


def _case_tag(P1: Matrix, e) -> str:
    unip = (e * e * e) == e.field.one
    case = "case1" if P1[1, 2].is_zero() else "case2"
    return f"{case}_{'unipotent' if unip else 'screw'}"


def rationalize_group(gens: Sequence[Matrix], depth: int, H=None, tol: float = DEFAULT_TOL) -> RationalizationResult:
    gens = list(gens)
    F = _require_exact(gens)
    if F is None:
        raise HypothesisNotCertified("empty group")
    Hm = siegel_matrix(F) if H is None else (H.matrix if isinstance(H, HermitianForm) else H)
    dens = zariski_density_check(gens, depth)
    if not dens.dense:
        raise HypothesisNotCertified("zariski_density_check failed")
    try:
        wP, P = find_parabolic(gens, depth, Hm)
    except NotFound as exc:
        raise HypothesisNotCertified(f"no parabolic element up to depth {depth}") from exc
    try:
        wL, L = find_companion(gens, P, depth, Hm)
    except NotFound as exc:
        raise HypothesisNotCertified(f"no companion element up to depth {depth}") from exc

    Q = move_to_standard_position(P, L, Hm)
    Qi = Q.inverse()
    P1, L1 = Q @ P @ Qi, Q @ L @ Qi
    e, _ = repeated_eigenvalue(P1)
    tag = _case_tag(P1, e)
    diagnostics = _check_normal_form(P1, L1, e, tag)

    D = _dilation([L1, P1])
    C = D @ Q
    Ci = C.inverse()

    # basis of M_3 from words in P and L
    basis_words, basis = [], []
    span = _Span(EXACT)
    for w, M in enumerate_words([P, L], max(depth, 3), include_identity=True):
        if span.add(M.entries()):
            basis_words.append(w)
            basis.append(M)
            if len(basis) == DENSITY_DIM:
                break
    if len(basis) < DENSITY_DIM:
        raise HypothesisNotCertified("words in P and L do not span M_3 at this depth")

    gram = [[(A @ B).trace() for B in basis] for A in basis]
    rhs = [[(X @ A).trace() for A in basis] for X in gens]

    extra = [t for row in gram for t in row] + [t for row in rhs for t in row]
    report = trace_field(gens, depth)
    K = subfield_generated(list(report.field.basis) + extra + [conj(t) for t in extra], F)
    diagnostics["trace_field_degree_from_words"] = report.field.degree
    diagnostics["trace_field_stabilized"] = report.stabilized

    try:
        G_inv = Matrix(gram, field=F).inverse()
    except Exception as exc:
        raise GramSingular("trace Gram matrix of the basis is singular") from exc
    basis_conj = [C @ A @ Ci for A in basis]

    conj_gens, certs, recovery = [], [], []
    for X, b in zip(gens, rhs):
        coeffs = G_inv @ Vector(b, field=F)
        Xr = Matrix.identity(3, F).scale(0)
        for c, A in zip(coeffs, basis_conj):
            Xr = Xr + A.scale(c)
        Xc = C @ X @ Ci
        if Xr != Xc:
            raise InternalContradiction("trace recovery does not reproduce the generator")
        cert = []
        for r in Xc.rows:
            row = []
            for x in r:
                m = K.contains(x)
                if not m.member:
                    raise HypothesisNotCertified("an entry lies outside the trace field computed at this depth")
                row.append(m.coords)
            cert.append(tuple(row))
        conj_gens.append(Xc)
        certs.append(tuple(cert))
        recovery.append(tuple(coeffs))

    Hc = transport_form(Hm, C)
    Hc = Hc.scale(Hc[1, 1].inverse()) if not Hc[1, 1].is_zero() else Hc
    if not all(K.contains(x).member for x in Hc.entries()):
        raise InternalContradiction("transported form is not rational over the trace field")
    return RationalizationResult(
        conjugator=C,
        conjugated_gens=tuple(conj_gens),
        trace_field=K,
        certificates=tuple(certs),
        case_tag=tag,
        form=Hc,
        parabolic_word=wP,
        companion_word=wL,
        basis_words=tuple(basis_words),
        recovery=tuple(recovery),
        diagnostics=diagnostics,
    )


def _check_normal_form(P1: Matrix, L1: Matrix, e, tag: str) -> dict:
    """Re-derive the value of t(L) predicted for the normal form and compare."""
    t = t_functional(L1, P1, e)
    diag = {"t_L": t}
    if tag.startswith("case1"):
        tau = P1[0, 2] * e.inverse()
        predicted = -tau * (e * e * e - 1) * e.inverse() * L1[2, 0]
        if t != predicted:
            raise InternalContradiction("t(L) disagrees with the case-1 normal form")
        if tag.endswith("unipotent"):
            lhs = (L1 @ P1.minus_scalar(1)).trace()
            if lhs != L1[2, 0] * P1[0, 2]:
                raise InternalContradiction("Tr(L(P - Id)) disagrees with the unipotent normal form")
            diag["tr_LP_minus_tr_L"] = lhs
    elif t.is_zero():
        raise InternalContradiction("t(L) = 0 in case 2 would force P to be elliptic")
    return diag
