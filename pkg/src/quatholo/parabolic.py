"""The parabolic algebra sp(1,n+1)_{Hp} and its group.

An element is the tuple (a, A, X, b) with a in H, A in sp(n), X in H^n and
b in Im H; ``to_matrix`` lays it out in the basis p, e_1..e_n, q as

    [ conj(a)  -conj(X)^t   b  ]
    [   0          A        X  ]
    [   0          0       -a  ]

and the bracket is computed from closed formulas.  The Op-commutator of the
matrices is kept as an independent check (``bracket_via_matrices``).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .echelon import EchelonBasis, nullspace
from .errors import DimensionMismatch, InvalidElement, NotInParabolic, PreconditionViolated
from .qcore import (
    IMAG_UNITS,
    QONE,
    QZERO,
    UNITS,
    ZERO_S,
    Quaternion,
    Scalar,
    as_scalar,
    commutator,
    qmul,
    random_quaternion,
)
from .qlinalg import (
    QMatrix,
    QVector,
    basis_vector,
    diagonal,
    identity,
    in_sp,
    is_isometry,
    is_zero_matrix,
    left_scale,
    mat_add,
    mat_scale,
    mat_sub,
    op_apply,
    op_commutator,
    op_compose,
    qmatrix,
    random_qvector,
    random_sp,
    realify,
    realify_op,
    sp_basis,
    sp_residual,
    vec_add,
    vec_sub,
    witt_space,
    zero_matrix,
    zero_vector,
)


@dataclass(frozen=True)
class ParabolicElement:
    a: Quaternion
    A: QMatrix
    X: QVector
    b: Quaternion

    def __post_init__(self):
        object.__setattr__(self, "a", Quaternion.coerce(self.a))
        object.__setattr__(self, "b", Quaternion.coerce(self.b))
        object.__setattr__(self, "A", qmatrix(self.A))
        object.__setattr__(self, "X", tuple(Quaternion.coerce(x) for x in self.X))

    @property
    def n(self) -> int:
        return len(self.X)

    def violations(self, tol: float = 0.0) -> list[str]:
        out = []
        n = self.n
        if len(self.A) != n or any(len(r) != n for r in self.A):
            out.append(f"A must be {n}x{n}")
            return out
        if not self.b.is_imaginary(tol):
            out.append("b must be imaginary")
        if not all(
            (self.A[l][t] + self.A[t][l].conj()).is_zero(tol) for l in range(n) for t in range(n)
        ):
            out.append("A must lie in sp(n)")
        return out

    def validate(self, tol: float = 0.0) -> "ParabolicElement":
        bad = self.violations(tol)
        if bad:
            raise InvalidElement("; ".join(bad))
        return self

    def __add__(self, other: "ParabolicElement") -> "ParabolicElement":
        _same_n(self, other)
        return ParabolicElement(self.a + other.a, mat_add(self.A, other.A), vec_add(self.X, other.X), self.b + other.b)

    def __sub__(self, other: "ParabolicElement") -> "ParabolicElement":
        _same_n(self, other)
        return ParabolicElement(self.a - other.a, mat_sub(self.A, other.A), vec_sub(self.X, other.X), self.b - other.b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ParabolicElement":
        c = as_scalar(c)
        return ParabolicElement(self.a * c, mat_scale(c, self.A), tuple(x * c for x in self.X), self.b * c)

    __rmul__ = scale

    def is_zero(self, tol: float = 0.0) -> bool:
        return (
            self.a.is_zero(tol)
            and self.b.is_zero(tol)
            and all(x.is_zero(tol) for x in self.X)
            and is_zero_matrix(self.A, tol)
        )

    def flatten(self) -> tuple:
        """Real coordinates: a, A row-major, X, b (4 each)."""
        out = list(self.a.parts())
        for row in self.A:
            for q in row:
                out.extend(q.parts())
        out.extend(realify(self.X))
        out.extend(self.b.parts())
        return tuple(out)

    @classmethod
    def unflatten(cls, n: int, v) -> "ParabolicElement":
        v = list(v)
        if len(v) != flat_dim(n):
            raise DimensionMismatch(f"flat vector of length {len(v)} for n={n}")
        q = lambda i: Quaternion(*v[i : i + 4])  # noqa: E731
        a = q(0)
        pos = 4
        A = []
        for _ in range(n):
            row = []
            for _ in range(n):
                row.append(q(pos))
                pos += 4
            A.append(row)
        X = []
        for _ in range(n):
            X.append(q(pos))
            pos += 4
        return cls(a, A, X, q(pos))

    def to_float(self) -> "ParabolicElement":
        return ParabolicElement(
            self.a.to_float(),
            tuple(tuple(x.to_float() for x in row) for row in self.A),
            tuple(x.to_float() for x in self.X),
            self.b.to_float(),
        )


def flat_dim(n: int) -> int:
    return 4 * n * n + 4 * n + 8


def _same_n(e1, e2):
    if e1.n != e2.n:
        raise DimensionMismatch(f"elements for n={e1.n} and n={e2.n}")


def element(n: int, a=0, A=None, X=None, b=0) -> ParabolicElement:
    """Convenience constructor with zero defaults."""
    return ParabolicElement(
        Quaternion.coerce(a),
        zero_matrix(n) if A is None else A,
        zero_vector(n) if X is None else X,
        Quaternion.coerce(b),
    )


def zero(n: int) -> ParabolicElement:
    return element(n)


# -- matrix realization -------------------------------------------------------


def to_matrix(e: ParabolicElement) -> QMatrix:
    e.validate(tol=1e-12 if not _exact(e) else 0.0)
    n = e.n
    m = n + 2
    rows = [[QZERO] * m for _ in range(m)]
    rows[0][0] = e.a.conj()
    rows[0][m - 1] = e.b
    rows[m - 1][m - 1] = -e.a
    for l in range(n):
        rows[0][l + 1] = -e.X[l].conj()
        rows[l + 1][m - 1] = e.X[l]
        for t in range(n):
            rows[l + 1][t + 1] = e.A[l][t]
    return tuple(tuple(r) for r in rows)


def _exact(e: ParabolicElement) -> bool:
    return e.a.is_exact() and e.b.is_exact()


def from_matrix(M: QMatrix, tol: float = 0.0) -> ParabolicElement:
    m = len(M)
    if m < 3 or any(len(r) != m for r in M):
        raise NotInParabolic("matrix must be square of size n+2 >= 3")
    n = m - 2
    for l in range(1, m):
        if not M[l][0].is_zero(tol):
            raise NotInParabolic("first column below the corner must vanish (Hp not preserved)")
    for t in range(0, m - 1):
        if not M[m - 1][t].is_zero(tol):
            raise NotInParabolic("last row must vanish left of the corner")
    a = -M[m - 1][m - 1]
    X = tuple(M[l + 1][m - 1] for l in range(n))
    A = tuple(tuple(M[l + 1][t + 1] for t in range(n)) for l in range(n))
    b = M[0][m - 1]
    e = ParabolicElement(a, A, X, b)
    if e.violations(tol):
        raise NotInParabolic("; ".join(e.violations(tol)))
    expected = to_matrix(e)
    if not all((x - y).is_zero(tol) for rx, ry in zip(M, expected) for x, y in zip(rx, ry)):
        raise NotInParabolic("matrix does not have the parabolic block form")
    if not in_sp(witt_space(n), M, tol):
        raise NotInParabolic("matrix is not in sp(1,n+1)")
    return e


# -- brackets -----------------------------------------------------------------


def metric_definite(X: QVector, Y: QVector) -> Quaternion:
    """g(X, Y) = sum X_t conj(Y_t) on H^n."""
    acc = QZERO
    for x, y in zip(X, Y):
        if x and y:
            acc = acc + qmul(x, y.conj())
    return acc


def bracket(e1: ParabolicElement, e2: ParabolicElement) -> ParabolicElement:
    _same_n(e1, e2)
    a, A, X, b = e1.a, e1.A, e1.X, e1.b
    c, C, Y, d = e2.a, e2.A, e2.X, e2.b
    new_a = commutator(a, c)
    new_A = op_commutator(A, C)
    new_X = vec_sub(vec_add(left_scale(a, Y), op_apply(A, Y)), vec_add(left_scale(c, X), op_apply(C, X)))
    new_b = (qmul(a, d).im() - qmul(c, b).im() + metric_definite(X, Y).im()) * 2
    return ParabolicElement(new_a, new_A, new_X, new_b)


def bracket_via_matrices(e1: ParabolicElement, e2: ParabolicElement) -> ParabolicElement:
    """Independent route: Op-commutator of the matrices, read back."""
    M = op_commutator(to_matrix(e1), to_matrix(e2))
    return from_matrix(M)


# -- projections --------------------------------------------------------------


def pr_A1(e: ParabolicElement):
    return e.a.w


def pr_A2(e: ParabolicElement) -> Quaternion:
    return e.a.im()


def pr_spn(e: ParabolicElement) -> QMatrix:
    return e.A


def pr_N(e: ParabolicElement) -> QVector:
    return e.X


def pr_B(e: ParabolicElement) -> Quaternion:
    return e.b


def components(e: ParabolicElement) -> dict[str, ParabolicElement]:
    """Direct-sum decomposition A1 + A2 + sp(n) + N + B; the values sum to e."""
    n = e.n
    return {
        "A1": element(n, a=Quaternion(e.a.w)),
        "A2": element(n, a=e.a.im()),
        "sp": element(n, A=e.A),
        "N": element(n, X=e.X),
        "B": element(n, b=e.b),
    }


# -- distinguished bases ------------------------------------------------------


def basis_A1(n: int) -> list[ParabolicElement]:
    return [element(n, a=QONE)]


def basis_A2(n: int) -> list[ParabolicElement]:
    return [element(n, a=u) for u in IMAG_UNITS]


def basis_spn(n: int) -> list[ParabolicElement]:
    return [element(n, A=A) for A in sp_basis(n)]


def basis_N(n: int) -> list[ParabolicElement]:
    return [element(n, X=basis_vector(n, t, u)) for t in range(n) for u in UNITS]


def basis_B(n: int) -> list[ParabolicElement]:
    return [element(n, b=u) for u in IMAG_UNITS]


def parabolic_basis(n: int) -> list[ParabolicElement]:
    return basis_A1(n) + basis_A2(n) + basis_spn(n) + basis_N(n) + basis_B(n)


def parabolic_dimension(n: int) -> int:
    """Rank of the realified basis of sp(1,n+1)_{Hp}."""
    return AlgebraSpan(n, parabolic_basis(n)).dim


def sp_dimension(n: int) -> int:
    """dim sp(1,n+1) by solving g(fX,Y)+g(X,fY)=0 on realified matrices."""
    m = n + 2
    space = witt_space(n)
    images = []
    for l in range(m):
        for t in range(m):
            for u in UNITS:
                rows = [[QZERO] * m for _ in range(m)]
                rows[l][t] = u
                R = sp_residual(space, qmatrix(rows))
                images.append([c for row in R for q in row for c in q.parts()])
    return len(images) - EchelonBasis(len(images[0]), images).rank


# -- spans ----------------------------------------------------------------------


class AlgebraSpan:
    """Real span of parabolic elements; the echelon basis is computed lazily."""

    def __init__(self, n: int, generators):
        self.n = n
        self.generators = [g for g in generators]
        for g in self.generators:
            if g.n != n:
                raise DimensionMismatch(f"generator for n={g.n} in a span for n={n}")
        self._lock = threading.Lock()
        self._echelon: EchelonBasis | None = None

    def echelon(self) -> EchelonBasis:
        with self._lock:
            if self._echelon is None:
                self._echelon = EchelonBasis(flat_dim(self.n), [g.flatten() for g in self.generators])
            return self._echelon

    @property
    def dim(self) -> int:
        return self.echelon().rank

    def basis(self) -> list[ParabolicElement]:
        return [ParabolicElement.unflatten(self.n, v) for v in self.echelon().basis()]

    def contains(self, e: ParabolicElement) -> bool:
        return self.echelon().contains(e.flatten())

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpan):
            return NotImplemented
        return self.n == other.n and self.echelon() == other.echelon()

    def __hash__(self):
        return hash((self.n, self.echelon().key()))

    def __repr__(self):
        return f"AlgebraSpan(n={self.n}, dim={self.dim})"


def is_subalgebra(S: AlgebraSpan) -> bool:
    basis = S.basis()
    for i, x in enumerate(basis):
        for y in basis[i + 1 :]:
            if not S.contains(bracket(x, y)):
                return False
    return True


def contains_B(S: AlgebraSpan) -> bool:
    return all(S.contains(e) for e in basis_B(S.n))


def pure_N_part(S: AlgebraSpan) -> list[QVector]:
    """Spanning set of {X : (0,0,X,b) in S for some b}, i.e. pr_N(S cap (N+B))."""
    n = S.n
    ncoords = flat_dim(n)
    # coordinates outside the X-block must vanish: a (0..3), A, and we ignore b
    x_start = 4 + 4 * n * n
    basis = S.echelon().basis()
    if not basis:
        return []
    # combinations c with sum c_i basis_i having zero a- and A-coordinates
    rows = [[v[j] for v in basis] for j in range(ncoords) if j < x_start]
    rels = nullspace(rows, len(basis))
    out = []
    for c in rels:
        vec = [ZERO_S] * ncoords
        for ci, v in zip(c, basis):
            if ci:
                vec = [acc + ci * vj for acc, vj in zip(vec, v)]
        X = tuple(Quaternion(*vec[x_start + 4 * t : x_start + 4 * t + 4]) for t in range(n))
        if any(X):
            out.append(X)
    return out


def realified_generators(S: AlgebraSpan) -> list[list[dict]]:
    """Real (4n+8)x(4n+8) matrices of a basis of S acting on R^{4,4n+4}."""
    return [realify_op(to_matrix(e)) for e in S.basis()]


# -- group elements -------------------------------------------------------------


@dataclass(frozen=True)
class ParabolicGroupElement:
    mat: QMatrix

    @property
    def n(self) -> int:
        return len(self.mat) - 2

    def is_exact(self) -> bool:
        return all(q.is_exact() for row in self.mat for q in row)

    def violations(self, tol: float = 0.0) -> list[str]:
        out = []
        if not is_isometry(witt_space(self.n), self.mat, tol):
            out.append("does not preserve g")
        if not all(self.mat[l][0].is_zero(tol) for l in range(1, len(self.mat))):
            out.append("does not preserve the line Hp")
        return out

    def validate(self, tol: float = 0.0) -> "ParabolicGroupElement":
        bad = self.violations(tol)
        if bad:
            raise InvalidElement("; ".join(bad))
        return self

    def __mul__(self, other: "ParabolicGroupElement") -> "ParabolicGroupElement":
        return ParabolicGroupElement(op_compose(self.mat, other.mat))

    def apply(self, v: QVector) -> QVector:
        return op_apply(self.mat, v)


def group_identity(n: int) -> ParabolicGroupElement:
    return ParabolicGroupElement(identity(n + 2))


def group_A1(n: int, a1) -> ParabolicGroupElement:
    """Op diag(a1, E_n, 1/a1) for a positive a1."""
    a1 = as_scalar(a1)
    if isinstance(a1, Scalar) and a1.sign() <= 0:
        raise PreconditionViolated("a1 must be positive")
    return ParabolicGroupElement(diagonal([a1] + [1] * n + [1 / a1 if isinstance(a1, float) else a1.inverse()]))



def group_Spn(f: QMatrix) -> ParabolicGroupElement:
    n = len(f)
    m = n + 2
    rows = [[QZERO] * m for _ in range(m)]
    rows[0][0] = QONE
    rows[m - 1][m - 1] = QONE
    for l in range(n):
        for t in range(n):
            rows[l + 1][t + 1] = f[l][t]
    return ParabolicGroupElement(tuple(tuple(r) for r in rows))


def group_P(Y: QVector, b=QZERO) -> ParabolicGroupElement:
    """The P-block matrix with top row (1, -conj(Y)^t, b - |Y|^2/2)."""
    Y = tuple(Quaternion.coerce(y) for y in Y)
    b = Quaternion.coerce(b)
    n = len(Y)
    m = n + 2
    rows = [list(r) for r in identity(m)]
    half = Fraction(1, 2) if all(y.is_exact() for y in Y) and b.is_exact() else 0.5
    corner = b - metric_definite(Y, Y) * half
    rows[0][m - 1] = corner
    for l in range(n):
        rows[0][l + 1] = -Y[l].conj()
        rows[l + 1][m - 1] = Y[l]
    return ParabolicGroupElement(tuple(tuple(r) for r in rows))


def group_A2_float(n: int, a2: Quaternion) -> ParabolicGroupElement:
    """Op diag(e^{-a2}, E_n, e^{-a2}) in floating point."""
    v = np.array([float(c) for c in a2.parts()[1:]])
    theta = float(np.linalg.norm(v))
    if theta == 0.0:
        u = Quaternion(1.0, 0.0, 0.0, 0.0)
    else:
        s = np.sin(theta) / theta
        u = Quaternion(float(np.cos(theta)), *(-float(c) * s for c in v))
    return ParabolicGroupElement(diagonal([u] + [Quaternion(1.0, 0.0, 0.0, 0.0)] * n + [u]))


def exp_nilpotent(e: ParabolicElement) -> ParabolicGroupElement:
    """Exact exponential of an element of N + B (M^3 = 0)."""
    if not e.a.is_zero() or not is_zero_matrix(e.A):
        raise PreconditionViolated("exp_nilpotent needs a = 0 and A = 0")
    M = to_matrix(e)
    M2 = op_compose(M, M)
    half = Fraction(1, 2)
    G = mat_add(mat_add(identity(len(M)), M), mat_scale(half, M2))
    return ParabolicGroupElement(G)


def _to_numpy(M: QMatrix) -> np.ndarray:
    R = realify_op(M)
    size = len(R)
    out = np.zeros((size, size))
    for r, row in enumerate(R):
        for c, val in row.items():
            out[r, c] = float(val)
    return out


def _from_numpy(R: np.ndarray) -> QMatrix:
    m = R.shape[0] // 4
    # column 4t of block (l, t) is the image of 1, i.e. the entry itself
    return tuple(
        tuple(Quaternion(*(float(R[4 * l + r, 4 * t]) for r in range(4))) for t in range(m)) for l in range(m)
    )


def exp_series_float(M: QMatrix, terms: int = 60) -> np.ndarray:
    """Plain Taylor series of the realified map; the oracle for ``exp_semisimple``."""
    R = _to_numpy(M)
    out = np.eye(R.shape[0])
    term = np.eye(R.shape[0])
    for k in range(1, terms):
        term = term @ R / k
        out = out + term
        if np.abs(term).max() < 1e-18:
            break
    return out


def exp_semisimple(e: ParabolicElement) -> tuple[ParabolicGroupElement, float]:
    """Floating-point exponential for X = 0, b = 0; returns (element, residual vs series)."""
    if not all(x.is_zero(1e-15) for x in e.X) or not e.b.is_zero(1e-15):
        raise PreconditionViolated("exp_semisimple needs X = 0 and b = 0")
    M = to_matrix(e.to_float())
    R = expm(_to_numpy(M))
    residual = float(np.abs(R - exp_series_float(M)).max())
    return ParabolicGroupElement(_from_numpy(R)), residual


def exp_float(e: ParabolicElement) -> ParabolicGroupElement:
    """Floating-point exponential of an arbitrary element."""
    return ParabolicGroupElement(_from_numpy(expm(_to_numpy(to_matrix(e.to_float())))))


# -- random elements -------------------------------------------------------------


def random_element(rng, n: int, bound: int = 100, irrational: bool = False) -> ParabolicElement:
    return ParabolicElement(
        random_quaternion(rng, bound, irrational=irrational),
        random_sp(rng, n, bound, irrational=irrational),
        random_qvector(rng, n, bound, irrational=irrational),
        random_quaternion(rng, bound, imaginary=True, irrational=irrational),
    )


def random_sparse_element(rng, n: int, bound: int = 100) -> ParabolicElement:
    """Random element with each component independently switched off."""
    e = random_element(rng, n, bound)
    return ParabolicElement(
        e.a if rng.random() < 0.7 else QZERO,
        e.A if rng.random() < 0.7 else zero_matrix(n),
        e.X if rng.random() < 0.7 else zero_vector(n),
        e.b if rng.random() < 0.7 else QZERO,
    )


__all__ = [
    "AlgebraSpan",
    "ParabolicElement",
    "ParabolicGroupElement",
    "bracket",
    "bracket_via_matrices",
    "components",
    "contains_B",
    "element",
    "exp_nilpotent",
    "exp_semisimple",
    "from_matrix",
    "group_A1",
    "group_P",
    "group_Spn",
    "is_subalgebra",
    "parabolic_basis",
    "pr_A1",
    "pr_A2",
    "pr_B",
    "pr_N",
    "pr_spn",
    "to_matrix",
]
