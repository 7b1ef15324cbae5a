"""Similarity transformations of H^n and the homomorphism F.

The boundary sphere is the set of points e_0 + w with w in H^{n+1} and
|w| = 1, in the basis e_0 = (p - q)/sqrt2, e_{n+1} = (p + q)/sqrt2.  ``s2`` is
inverse stereographic projection from the pole sqrt2*p, ``s1`` intersects the
affine quaternionic line through sqrt2*p with e_0 + H^n, and
F(f) = s1 o f o s2 read as a map of H^n.  ``F_group`` samples that map at
exact points and fits a similarity to the samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, InvalidElement, NotExact, NotIsotropic, NotSimilarity, PoleAtInfinity, PoleInput
from .qcore import (
    HALF_SQRT2,
    SQRT2,
    QONE,
    QZERO,
    UNITS,
    ZERO_S,
    Quaternion,
    Scalar,
    as_scalar,
    commutator,
    is_zero,
    qmul,
)
from .qlinalg import (
    QMatrix,
    QVector,
    basis_vector,
    conj_transpose,
    definite_space,
    identity,
    in_sp,
    is_isometry,
    is_zero_matrix,
    left_scale,
    mat_add,
    mat_scale,
    mat_sub,
    metric_g,
    op_apply,
    op_commutator,
    op_compose,
    orthonormal_to_witt,
    vec_add,
    vec_sub,
    witt_space,
    witt_to_orthonormal,
    zero_matrix,
    zero_vector,
)
from .echelon import EchelonBasis, nullspace
from .parabolic import ParabolicElement, ParabolicGroupElement, group_P, metric_definite


def _sqrt(x):
    if isinstance(x, float):
        return math.sqrt(max(x, 0.0))
    return as_scalar(x).sqrt()


def _vec_close(X, Y, tol):
    return all((x - y).is_zero(tol) for x, y in zip(X, Y))


def _mat_close(A, B, tol):
    return all((x - y).is_zero(tol) for ra, rb in zip(A, B) for x, y in zip(ra, rb))


# -- Lie algebra of Sim H^n ------------------------------------------------------


@dataclass(frozen=True)
class SimAlgebraElement:
    """lam (dilation) + s (left multiplication, Im H) + h (sp(n)) + translation v."""

    lam: Scalar
    s: Quaternion
    h: QMatrix
    v: QVector

    def __post_init__(self):
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "s", Quaternion.coerce(self.s))
        object.__setattr__(self, "v", tuple(Quaternion.coerce(x) for x in self.v))

    @property
    def n(self) -> int:
        return len(self.v)

    def violations(self) -> list[str]:
        out = []
        if not self.s.is_imaginary():
            out.append("s must be imaginary")
        if self.n and not in_sp(definite_space(self.n), self.h):
            out.append("h must lie in sp(n)")
        return out

    def act(self, Y: QVector) -> QVector:
        """Linear part applied to Y: lam*Y + s*Y + h.Y."""
        out = vec_add(tuple(y * self.lam for y in Y), left_scale(self.s, Y))
        return vec_add(out, op_apply(self.h, Y)) if self.n else out

    def __add__(self, other):
        return SimAlgebraElement(self.lam + other.lam, self.s + other.s, mat_add(self.h, other.h), vec_add(self.v, other.v))

    def __sub__(self, other):
        return SimAlgebraElement(self.lam - other.lam, self.s - other.s, mat_sub(self.h, other.h), vec_sub(self.v, other.v))

    def scale(self, c):
        c = as_scalar(c)
        return SimAlgebraElement(self.lam * c, self.s * c, mat_scale(c, self.h), tuple(x * c for x in self.v))

    def is_zero(self, tol: float = 0.0) -> bool:
        return (
            is_zero(self.lam, tol)
            and self.s.is_zero(tol)
            and is_zero_matrix(self.h, tol)
            and all(x.is_zero(tol) for x in self.v)
        )

    def flatten(self) -> tuple:
        out = [self.lam]
        out.extend(self.s.parts()[1:])
        for row in self.h:
            for q in row:
                out.extend(q.parts())
        for x in self.v:
            out.extend(x.parts())
        return tuple(out)

    @classmethod
    def unflatten(cls, n: int, v) -> "SimAlgebraElement":
        v = list(v)
        lam = v[0]
        s = Quaternion(0, *v[1:4])
        pos = 4
        h = []
        for _ in range(n):
            row = []
            for _ in range(n):
                row.append(Quaternion(*v[pos : pos + 4]))
                pos += 4
            h.append(tuple(row))
        X = []
        for _ in range(n):
            X.append(Quaternion(*v[pos : pos + 4]))
            pos += 4
        return cls(lam, s, tuple(h), tuple(X))


def sim_zero(n: int) -> SimAlgebraElement:
    return SimAlgebraElement(ZERO_S, QZERO, zero_matrix(n), zero_vector(n))


def sim_element(n: int, lam=0, s=0, h=None, v=None) -> SimAlgebraElement:
    return SimAlgebraElement(lam, s, zero_matrix(n) if h is None else h, zero_vector(n) if v is None else v)


def sim_bracket(x: SimAlgebraElement, y: SimAlgebraElement) -> SimAlgebraElement:
    if x.n != y.n:
        raise DimensionMismatch("brackets of elements for different n")
    return SimAlgebraElement(
        ZERO_S,
        commutator(x.s, y.s),
        op_commutator(x.h, y.h),
        vec_sub(x.act(y.v), y.act(x.v)),
    )


def dF(e: ParabolicElement) -> SimAlgebraElement:
    """Differential of F: (Re a, Im a, A, -(sqrt2/2) X)."""
    return SimAlgebraElement(e.a.w, e.a.im(), e.A, tuple(x * (-HALF_SQRT2) for x in e.X))


class SimSpan:
    """Real span of similarity-algebra elements, compared by echelon form."""

    def __init__(self, n: int, generators):
        self.n = n
        self.generators = list(generators)
        self._eb = EchelonBasis(sim_flat_dim(n), [g.flatten() for g in self.generators])

    @property
    def dim(self) -> int:
        return self._eb.rank

    def basis(self) -> list[SimAlgebraElement]:
        return [SimAlgebraElement.unflatten(self.n, v) for v in self._eb.basis()]

    def contains(self, x: SimAlgebraElement) -> bool:
        return self._eb.contains(x.flatten())

    def is_subalgebra(self) -> bool:
        B = self.basis()
        return all(self.contains(sim_bracket(x, y)) for i, x in enumerate(B) for y in B[i + 1 :])

    def translations(self) -> list[QVector]:
        """Translation vectors v with (0, 0, 0, v) in the span."""
        n = self.n
        start = 4 + 4 * n * n
        basis = self._eb.basis()
        rows = [[v[j] for v in basis] for j in range(start)]
        out = []
        for c in nullspace(rows, len(basis)):
            vec = [ZERO_S] * sim_flat_dim(n)
            for ci, v in zip(c, basis):
                if ci:
                    vec = [a + ci * b for a, b in zip(vec, v)]
            out.append(tuple(Quaternion(*vec[start + 4 * t : start + 4 * t + 4]) for t in range(n)))
        return out

    def __eq__(self, other):
        if not isinstance(other, SimSpan):
            return NotImplemented
        return self.n == other.n and self._eb == other._eb

    def __hash__(self):
        return hash((self.n, self._eb.key()))


def sim_flat_dim(n: int) -> int:
    return 4 + 4 * n * n + 4 * n


def dF_span(S) -> SimSpan:
    """Image of a parabolic span under dF."""
    return SimSpan(S.n, [dF(e) for e in S.basis()])


# -- the group Sim H^n -----------------------------------------------------------


@dataclass(frozen=True)
class SimGroupElement:
    """Y -> a1 * u * (Op f . Y) + v."""

    a1: Scalar
    u: Quaternion
    f: QMatrix
    v: QVector

    @property
    def n(self) -> int:
        return len(self.v)

    def __call__(self, Y: QVector) -> QVector:
        Z = op_apply(self.f, Y)
        Z = left_scale(self.u, Z)
        return tuple(z * self.a1 + v for z, v in zip(Z, self.v))

    def __mul__(self, other: "SimGroupElement") -> "SimGroupElement":
        """Composition, right factor applied first."""
        shift = self(other.v)
        return SimGroupElement(self.a1 * other.a1, qmul(self.u, other.u), op_compose(self.f, other.f), shift).canonical()

    def inverse(self) -> "SimGroupElement":
        a_inv = 1 / self.a1 if isinstance(self.a1, float) else self.a1.inverse()
        u_inv = self.u.inverse()
        f_inv = conj_transpose(self.f)
        v = left_scale(u_inv, op_apply(f_inv, self.v))
        return SimGroupElement(a_inv, u_inv, f_inv, tuple(x * (-a_inv) for x in v)).canonical()

    def canonical(self) -> "SimGroupElement":
        """Resolve (u, f) ~ (-u, -f): the first nonzero component of u is positive."""
        for c in self.u.parts():
            if not is_zero(c, 1e-12 if isinstance(c, float) else 0.0):
                if (c < 0) if isinstance(c, float) else (as_scalar(c).sign() < 0):
                    return SimGroupElement(self.a1, -self.u, mat_scale(-1, self.f), self.v)
                break
        return self

    def violations(self, tol: float = 0.0) -> list[str]:
        out = []
        if not is_zero(self.u.norm2() - 1, tol):
            out.append("u must be a unit quaternion")
        if self.n and not is_isometry(definite_space(self.n), self.f, tol):
            out.append("f must lie in Sp(n)")
        if (self.a1 <= 0) if isinstance(self.a1, float) else as_scalar(self.a1).sign() <= 0:
            out.append("a1 must be positive")
        return out

    def equals(self, other: "SimGroupElement", tol: float = 0.0) -> bool:
        x, y = self.canonical(), other.canonical()
        return (
            is_zero(x.a1 - y.a1, tol)
            and (x.u - y.u).is_zero(tol)
            and _mat_close(x.f, y.f, tol)
            and _vec_close(x.v, y.v, tol)
        )

    def __eq__(self, other):
        if not isinstance(other, SimGroupElement):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        c = self.canonical()
        return hash((c.a1, c.u, c.f, c.v))

    def residual(self, other: "SimGroupElement") -> float:
        x, y = self.canonical(), other.canonical()
        vals = [abs(float(x.a1) - float(y.a1)), x.u.distance(y.u)]
        vals += [a.distance(b) for ra, rb in zip(x.f, y.f) for a, b in zip(ra, rb)]
        vals += [a.distance(b) for a, b in zip(x.v, y.v)]
        return max(vals)


def sim_identity(n: int) -> SimGroupElement:
    return SimGroupElement(Scalar(1), QONE, identity(n), zero_vector(n))


def translation(X: QVector) -> SimGroupElement:
    X = tuple(Quaternion.coerce(x) for x in X)
    return SimGroupElement(Scalar(1), QONE, identity(len(X)), X)


def dilation(n: int, a1) -> SimGroupElement:
    return SimGroupElement(as_scalar(a1), QONE, identity(n), zero_vector(n))


def quaternionic_dilation(n: int, u: Quaternion) -> SimGroupElement:
    return SimGroupElement(Scalar(1), u, identity(n), zero_vector(n)).canonical()


def affine_reduction_element(Y: QVector) -> ParabolicGroupElement:
    """Element of P whose image under F is the translation t(Y)."""
    return group_P(tuple(Quaternion.coerce(y) * (-SQRT2) for y in Y))


def rotation(f: QMatrix) -> SimGroupElement:
    return SimGroupElement(Scalar(1), QONE, f, zero_vector(len(f)))


# -- the boundary sphere -------------------------------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    """The point e_0 + w of S^{4n+3}, w = (h_1, ..., h_{n+1})."""

    w: QVector

    @property
    def n(self) -> int:
        return len(self.w) - 1

    def violations(self, tol: float = 0.0) -> list[str]:
        total = sum((x.norm2() for x in self.w), ZERO_S if self.w[0].is_exact() else 0.0)
        return [] if is_zero(total - 1, tol) else ["sum |h_s|^2 must equal 1"]

    def orthonormal_coords(self) -> QVector:
        one = QONE if self.w[0].is_exact() else Quaternion(1.0, 0.0, 0.0, 0.0)
        return (one,) + tuple(self.w)

    def witt_coords(self) -> QVector:
        return orthonormal_to_witt(self.orthonormal_coords())

    def is_pole(self, tol: float = 0.0) -> bool:
        return all(x.is_zero(tol) for x in self.w[:-1]) and (self.w[-1] - QONE).is_zero(tol)


def pole(n: int) -> SpherePoint:
    """sqrt2 * p = e_0 + e_{n+1}."""
    return SpherePoint(basis_vector(n + 1, n))


def boundary_point(v: QVector, tol: float = 0.0) -> SpherePoint:
    """The point of the isotropic line Hv (witt coordinates) on the sphere."""
    n = len(v) - 2
    if all(x.is_zero(tol) for x in v):
        raise NotIsotropic("zero vector spans no line")
    if not metric_g(witt_space(n), v, v).is_zero(tol):
        raise NotIsotropic("g(v, v) != 0")
    h = witt_to_orthonormal(v)
    if h[0].is_zero(tol):
        raise PoleAtInfinity("the line does not meet e_0 + H^{n+1}")
    lam = h[0].inverse()
    return SpherePoint(tuple(qmul(lam, x) for x in h[1:]))


def stereo_s1(s: SpherePoint, tol: float = 0.0) -> QVector:
    """u with e_0 + u on the quaternionic line through sqrt2*p and s."""
    w = s.w
    denom = QONE - w[-1]
    if denom.is_zero(tol) or s.is_pole(tol):
        raise PoleInput("s1 is undefined at sqrt2*p")
    a = denom.inverse()
    return tuple(qmul(a, x) for x in w[:-1])


def stereo_s2(u: QVector) -> SpherePoint:
    """Inverse stereographic projection of e_0 + u."""
    u = tuple(Quaternion.coerce(x) for x in u)
    exact = all(x.is_exact() for x in u)
    r2 = metric_definite(u, u).w if u else (ZERO_S if exact else 0.0)
    one = Scalar(1) if exact else 1.0
    inv = 1 / (r2 + one) if not exact else (r2 + one).inverse()
    w = tuple(x * (2 * inv) for x in u) + (Quaternion.coerce((r2 - one) * inv),)
    return SpherePoint(w)


def on_line_through_pole(s: SpherePoint, u: QVector, tol: float = 0.0) -> bool:
    """Defining property of s1: e_0 + u - sqrt2 p is a left multiple of s - sqrt2 p."""
    n = s.n
    target = tuple(u) + (-QONE,)  # (e_0 + u) - (e_0 + e_{n+1})
    direction = tuple(s.w[:-1]) + (s.w[-1] - QONE,)
    k = max(range(n + 1), key=lambda i: float(direction[i].norm2()))
    if direction[k].is_zero(tol):
        return False
    a = qmul(target[k], direction[k].inverse())
    return all((qmul(a, d) - t).is_zero(tol) for d, t in zip(direction, target))


def sphere_action(f: ParabolicGroupElement, s: SpherePoint, tol: float = 0.0) -> SpherePoint:
    return boundary_point(f.apply(s.witt_coords()), tol)


def F_map(f: ParabolicGroupElement, Y: QVector, tol: float = 0.0) -> QVector:
    """(-e_0) o s1 o f o s2 o e_0 evaluated at Y."""
    return stereo_s1(sphere_action(f, stereo_s2(Y), tol), tol)


def _sample_points(n: int, exact: bool):
    zero = QZERO if exact else Quaternion(0.0, 0.0, 0.0, 0.0)
    units = UNITS if exact else tuple(u.to_float() for u in UNITS)
    pts = [(zero,) * n]
    for t in range(n):
        for u in units:
            pts.append(tuple(u if s == t else zero for s in range(n)))
    # one extra point off every coordinate plane
    c = [Quaternion(Fraction(1, t + 2), Fraction(-1, t + 3), Fraction(1, 5), Fraction(t + 1, 7)) for t in range(n)]
    pts.append(tuple(c) if exact else tuple(x.to_float() for x in c))
    return pts


def _unit_from_rotation(rot, tol):
    """u (up to sign) with u q u^{-1} = rot[q] for q = i, j, k."""
    R = [[rot[c].parts()[r + 1] for c in range(3)] for r in range(3)]
    one = 1.0 if isinstance(R[0][0], float) else Scalar(1)
    cands = [
        (one + R[0][0] + R[1][1] + R[2][2], R[2][1] - R[1][2], R[0][2] - R[2][0], R[1][0] - R[0][1]),
        (R[2][1] - R[1][2], one + R[0][0] - R[1][1] - R[2][2], R[0][1] + R[1][0], R[0][2] + R[2][0]),
        (R[0][2] - R[2][0], R[0][1] + R[1][0], one - R[0][0] + R[1][1] - R[2][2], R[1][2] + R[2][1]),
        (R[1][0] - R[0][1], R[0][2] + R[2][0], R[1][2] + R[2][1], one - R[0][0] - R[1][1] + R[2][2]),
    ]
    qs = [Quaternion(*c) for c in cands]
    q = max(qs, key=lambda x: float(x.norm2()))
    if q.is_zero(tol):
        raise NotSimilarity("conjugation data does not come from a unit quaternion")
    return q / _sqrt(q.norm2())


def F_group(f: ParabolicGroupElement, tol: float | None = None) -> SimGroupElement:
    """Fit the similarity F(f) from exact samples and verify it on every sample."""
    n = f.n
    exact = f.is_exact()
    if tol is None:
        tol = 0.0 if exact else 1e-9
    if any(not f.mat[l][0].is_zero(tol) for l in range(1, n + 2)):
        raise InvalidElement("f does not preserve Hp")
    pts = _sample_points(n, exact)
    images = [F_map(f, Y, tol) for Y in pts]
    v = images[0]
    lin = {}
    idx = 1
    for t in range(n):
        for c in range(4):
            lin[(t, c)] = vec_sub(images[idx], v)
            idx += 1
    M = [[lin[(t, 0)][l] for t in range(n)] for l in range(n)]
    a1_sq = sum((M[l][0].norm2() for l in range(n)), ZERO_S if exact else 0.0)
    try:
        a1 = _sqrt(a1_sq)
    except NotExact as exc:
        raise NotExact(f"dilation factor is not in Q(sqrt 2): {exc}") from exc
    if is_zero(a1, tol):
        raise NotSimilarity("degenerate linear part")
    lp, tp = max(((l, t) for l in range(n) for t in range(n)), key=lambda lt: float(M[lt[0]][lt[1]].norm2()))
    piv_inv = M[lp][tp].inverse()
    rot = [qmul(lin[(tp, c)][lp], piv_inv) for c in (1, 2, 3)]
    u = _unit_from_rotation(rot, tol)
    u_inv = u.conj()
    a1_inv = 1 / a1 if not exact else a1.inverse()
    fmat = tuple(tuple(qmul(u_inv, M[l][t]) * a1_inv for t in range(n)) for l in range(n))
    sim = SimGroupElement(a1, u, fmat, v).canonical()
    for Y, img in zip(pts, images):
        if not _vec_close(sim(Y), img, tol):
            raise NotSimilarity("sampled map is not the fitted similarity")
    if sim.violations(tol):
        raise NotSimilarity("; ".join(sim.violations(tol)))
    return sim


# -- numerical differentiation of F (oracle for dF) ------------------------------------


def _sim_to_flat_float(g: SimGroupElement) -> list[float]:
    out = [float(g.a1)]
    out += [float(c) for c in g.u.parts()]
    out += [float(c) for row in g.f for q in row for c in q.parts()]
    out += [float(c) for x in g.v for c in x.parts()]
    return out


def dF_numeric(e: ParabolicElement, step: float = 1e-3) -> SimAlgebraElement:
    """Richardson-extrapolated central difference of t -> F(exp(t e)) at t = 0."""
    from .parabolic import exp_float

    n = e.n

    def flat(t):
        return _sim_to_flat_float(F_group(exp_float(e.scale(t)), tol=1e-7))

    def central(h):
        plus, minus = flat(h), flat(-h)
        return [(p - m) / (2 * h) for p, m in zip(plus, minus)]

    d1 = central(step)
    d2 = central(step / 2)
    d = [(4 * b - a) / 3 for a, b in zip(d1, d2)]
    lam = d[0]
    s = Quaternion(0.0, d[2], d[3], d[4])
    pos = 5
    h = []
    for _ in range(n):
        row = []
        for _ in range(n):
            row.append(Quaternion(*d[pos : pos + 4]))
            pos += 4
        h.append(tuple(row))
    X = []
    for _ in range(n):
        X.append(Quaternion(*d[pos : pos + 4]))
        pos += 4
    return SimAlgebraElement(lam, s, tuple(h), tuple(X))
