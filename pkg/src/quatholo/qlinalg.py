"""Quaternionic vectors and matrices in left coordinates.

A vector X = sum X_t e_t is stored as the tuple of its left coordinates.  A
matrix M acts through ``Op``: (Op M . X)_l = sum_t X_t * M[l][t], i.e. the
coordinate is multiplied on the left of the matrix entry.  Composition of
such maps is ``op_compose``; ordinary matrix products are never used on the
quaternionic side.

Realification lays out coordinate t as the four real numbers of X_t in the
(1, i, j, k) basis, at positions 4t..4t+3.  I, J, K are left multiplication
by i, j, k on every coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch
from .qcore import (
    HALF_SQRT2,
    QI,
    QJ,
    QK,
    QONE,
    QZERO,
    UNITS,
    ZERO_S,
    Quaternion,
    Scalar,
    is_zero,
    qmul,
    random_quaternion,
    random_rational,
    random_unit_quaternion,
)

QVector = tuple  # tuple[Quaternion, ...]
QMatrix = tuple  # tuple[tuple[Quaternion, ...], ...]
RealVector = tuple  # tuple[Scalar, ...]


def qvector(coords) -> QVector:
    return tuple(Quaternion.coerce(c) for c in coords)


def qmatrix(rows) -> QMatrix:
    return tuple(tuple(Quaternion.coerce(c) for c in row) for row in rows)


def zero_vector(m: int) -> QVector:
    return (QZERO,) * m


def basis_vector(m: int, t: int, coeff=QONE) -> QVector:
    return tuple(Quaternion.coerce(coeff) if s == t else QZERO for s in range(m))


def zero_matrix(m: int) -> QMatrix:
    return tuple((QZERO,) * m for _ in range(m))


def identity(m: int) -> QMatrix:
    return tuple(tuple(QONE if l == t else QZERO for t in range(m)) for l in range(m))


def diagonal(entries) -> QMatrix:
    entries = [Quaternion.coerce(e) for e in entries]
    m = len(entries)
    return tuple(tuple(entries[l] if l == t else QZERO for t in range(m)) for l in range(m))


def _check_square(A, m=None):
    size = len(A)
    if any(len(row) != size for row in A):
        raise DimensionMismatch("matrix is not square")
    if m is not None and size != m:
        raise DimensionMismatch(f"expected a {m}x{m} matrix, got {size}x{size}")
    return size


def op_apply(A: QMatrix, X: QVector) -> QVector:
    """Op A . X = (X^t A^t)^t."""
    m = len(A)
    if len(X) != m or any(len(row) != m for row in A):
        raise DimensionMismatch(f"matrix {len(A)}x{len(A[0]) if A else 0} against vector of length {len(X)}")
    out = []
    for row in A:
        acc = QZERO
        for x, a in zip(X, row):
            if x and a:
                acc = acc + qmul(x, a)
        out.append(acc)
    return tuple(out)


def op_compose(A: QMatrix, B: QMatrix) -> QMatrix:
    """Matrix of Op A o Op B: entries sum_t B[t][s] * A[l][t]."""
    m = _check_square(A)
    if _check_square(B) != m:
        raise DimensionMismatch("composing matrices of different sizes")
    out = []
    for l in range(m):
        Al = A[l]
        row = []
        for s in range(m):
            acc = QZERO
            for t in range(m):
                a = Al[t]
                if a:
                    b = B[t][s]
                    if b:
                        acc = acc + qmul(b, a)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(A: QMatrix, B: QMatrix) -> QMatrix:
    if len(A) != len(B):
        raise DimensionMismatch("adding matrices of different sizes")
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: QMatrix, B: QMatrix) -> QMatrix:
    if len(A) != len(B):
        raise DimensionMismatch("subtracting matrices of different sizes")
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A: QMatrix) -> QMatrix:
    """Real multiple c*A."""
    return tuple(tuple(c * a for a in row) for row in A)


def op_commutator(A: QMatrix, B: QMatrix) -> QMatrix:
    return mat_sub(op_compose(A, B), op_compose(B, A))


def conj_transpose(A: QMatrix) -> QMatrix:
    m = len(A)
    return tuple(tuple(A[t][l].conj() for t in range(m)) for l in range(m))


def is_zero_matrix(A: QMatrix, tol: float = 0.0) -> bool:
    return all(is_zero(a, tol) for row in A for a in row)


def vec_add(X: QVector, Y: QVector) -> QVector:
    if len(X) != len(Y):
        raise DimensionMismatch("adding vectors of different lengths")
    return tuple(x + y for x, y in zip(X, Y))


def vec_sub(X: QVector, Y: QVector) -> QVector:
    if len(X) != len(Y):
        raise DimensionMismatch("subtracting vectors of different lengths")
    return tuple(x - y for x, y in zip(X, Y))


def left_scale(a, X: QVector) -> QVector:
    """Left scalar multiplication aX (the module structure)."""
    a = Quaternion.coerce(a)
    return tuple(qmul(a, x) for x in X)


def submatrix(A: QMatrix, rows, cols) -> QMatrix:
    return tuple(tuple(A[r][c] for c in cols) for r in rows)


def block_embed(A: QMatrix, m: int, offset: int) -> QMatrix:
    """Place a square block into the m x m zero matrix at (offset, offset)."""
    d = len(A)
    if offset < 0 or offset + d > m:
        raise DimensionMismatch(f"block of size {d} at offset {offset} does not fit in {m}")
    return tuple(
        tuple(A[l - offset][t - offset] if offset <= l < offset + d and offset <= t < offset + d else QZERO for t in range(m))
        for l in range(m)
    )


# -- metrics -----------------------------------------------------------------


@dataclass(frozen=True)
class HermitianSpace:
    """H^{r,s} with an explicit Gram matrix in a named basis."""

    n_plus: int
    n_minus: int
    basis_kind: str
    gram: QMatrix = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def n(self) -> int:
        """The n of H^{1,n+1} (or the dimension of a definite space)."""
        if self.basis_kind in ("witt", "orthonormal"):
            return self.dim - 2
        return self.dim

    def basis(self, t: int) -> QVector:
        return basis_vector(self.dim, t)


def witt_space(n: int) -> HermitianSpace:
    """H^{1,n+1} in the basis p, e_1..e_n, q."""
    m = n + 2
    gram = tuple(
        tuple(
            QONE if (l == 0 and t == m - 1) or (l == m - 1 and t == 0) or (0 < l == t < m - 1) else QZERO
            for t in range(m)
        )
        for l in range(m)
    )
    return HermitianSpace(n + 1, 1, "witt", gram)


def orthonormal_space(n: int) -> HermitianSpace:
    """H^{1,n+1} in the basis e_0, e_1..e_{n+1}; Gram diag(-1, E_{n+1})."""
    entries = [-QONE] + [QONE] * (n + 1)
    return HermitianSpace(n + 1, 1, "orthonormal", diagonal(entries))


def definite_space(m: int) -> HermitianSpace:
    return HermitianSpace(m, 0, "definite", identity(m))


def space_from_descriptor(desc: dict) -> HermitianSpace:
    kind = desc.get("kind")
    n = int(desc["n"])
    if kind == "witt":
        return witt_space(n)
    if kind == "orthonormal":
        return orthonormal_space(n)
    if kind == "definite":
        return definite_space(n)
    raise ValueError(f"unknown space kind {kind!r}")


def metric_g(space: HermitianSpace, X: QVector, Y: QVector) -> Quaternion:
    """g(X, Y) = sum X_t gram_tl conj(Y_l)."""
    m = space.dim
    if len(X) != m or len(Y) != m:
        raise DimensionMismatch(f"vectors of lengths {len(X)}, {len(Y)} in a space of dimension {m}")
    acc = QZERO
    gram = space.gram
    for t, x in enumerate(X):
        if not x:
            continue
        row = gram[t]
        for l, y in enumerate(Y):
            gtl = row[l]
            if gtl and y:
                acc = acc + qmul(qmul(x, gtl), y.conj())
    return acc


def realify(X: QVector) -> RealVector:
    out = []
    for x in X:
        out.extend(x.parts())
    return tuple(out)


def quaternionify(v: RealVector) -> QVector:
    if len(v) % 4:
        raise DimensionMismatch(f"real vector of length {len(v)} is not a realified quaternionic vector")
    return tuple(Quaternion(*v[4 * t : 4 * t + 4]) for t in range(len(v) // 4))


def metric_eta(space: HermitianSpace, X: RealVector, Y: RealVector):
    """eta(X, Y) = Re g(X, Y) on realified vectors."""
    if len(X) != 4 * space.dim or len(Y) != 4 * space.dim:
        raise DimensionMismatch("realified vectors do not match the space")
    return metric_g(space, quaternionify(X), quaternionify(Y)).w


def apply_left(q: Quaternion, v: RealVector) -> RealVector:
    return realify(left_scale(q, quaternionify(v)))


def apply_I(v: RealVector) -> RealVector:
    return apply_left(QI, v)


def apply_J(v: RealVector) -> RealVector:
    return apply_left(QJ, v)


def apply_K(v: RealVector) -> RealVector:
    return apply_left(QK, v)


def reconstruct_g(eta, X: RealVector, Y: RealVector) -> Quaternion:
    """g from an I,J,K-invariant real metric: eta(X,Y) + i eta(X,IY) + j eta(X,JY) + k eta(X,KY)."""
    return Quaternion(eta(X, Y), eta(X, apply_I(Y)), eta(X, apply_J(Y)), eta(X, apply_K(Y)))


def eta_gram(space: HermitianSpace) -> list[dict]:
    """Realified Gram matrix of eta as sparse rows."""
    m = space.dim
    rows = []
    for t in range(m):
        for c in range(4):
            row = {}
            for l in range(m):
                g = space.gram[t][l]
                if g:
                    # Re(x g conj y) for real-symmetric gram reduces to g * (x . y)
                    row[4 * l + c] = g.w
            rows.append(row)
    return rows


# -- basis change on H^{1,n+1} -----------------------------------------------


def witt_to_orthonormal(v: QVector) -> QVector:
    """Coordinates in p, e_1..e_n, q  ->  coordinates in e_0, e_1..e_{n+1}."""
    vp, vq = v[0], v[-1]
    return ((vp - vq) * HALF_SQRT2,) + tuple(v[1:-1]) + ((vp + vq) * HALF_SQRT2,)


def orthonormal_to_witt(h: QVector) -> QVector:
    h0, hl = h[0], h[-1]
    return ((h0 + hl) * HALF_SQRT2,) + tuple(h[1:-1]) + ((hl - h0) * HALF_SQRT2,)


# -- sp / Sp membership -------------------------------------------------------


def in_sp(space: HermitianSpace, A: QMatrix, tol: float = 0.0) -> bool:
    """g(fX, Y) + g(X, fY) = 0 on all basis pairs."""
    m = _check_square(A)
    if m != space.dim:
        raise DimensionMismatch(f"{m}x{m} matrix on a space of dimension {space.dim}")
    images = [op_apply(A, space.basis(t)) for t in range(m)]
    for t in range(m):
        et = space.basis(t)
        for s in range(m):
            es = space.basis(s)
            val = metric_g(space, images[t], es) + metric_g(space, et, images[s])
            if not val.is_zero(tol):
                return False
    return True


def sp_residual(space: HermitianSpace, A: QMatrix) -> QMatrix:
    """A^t G + G conj(A); zero exactly when A is in sp (matrix form of the basis-pair test)."""
    m = len(A)
    G = space.gram
    rows = []
    for t in range(m):
        row = []
        for s in range(m):
            acc = QZERO
            for l in range(m):
                if A[l][t] and G[l][s]:
                    acc = acc + qmul(A[l][t], G[l][s])
                if G[t][l] and A[l][s]:
                    acc = acc + qmul(G[t][l], A[l][s].conj())
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def is_isometry(space: HermitianSpace, A: QMatrix, tol: float = 0.0) -> bool:
    m = _check_square(A)
    if m != space.dim:
        raise DimensionMismatch(f"{m}x{m} matrix on a space of dimension {space.dim}")
    images = [op_apply(A, space.basis(t)) for t in range(m)]
    for t in range(m):
        for s in range(m):
            diff = metric_g(space, images[t], images[s]) - space.gram[t][s]
            if not diff.is_zero(tol):
                return False
    return True


def is_skew_hermitian(A: QMatrix) -> bool:
    """A in sp(m) for the definite metric: A[l][t] = -conj(A[t][l])."""
    m = len(A)
    return all(A[l][t] == -A[t][l].conj() for l in range(m) for t in range(m))


def sp_basis(m: int) -> list[QMatrix]:
    """Real basis of sp(m) (definite metric), m(2m+1) elements."""
    out = []
    for l in range(m):
        for u in (QI, QJ, QK):
            out.append(diagonal([u if t == l else QZERO for t in range(m)]))
    for l in range(m):
        for t in range(l + 1, m):
            for u in UNITS:
                rows = [[QZERO] * m for _ in range(m)]
                rows[l][t] = u
                rows[t][l] = -u.conj()
                out.append(qmatrix(rows))
    return out


# -- realification of Op maps -------------------------------------------------


def _right_mult_block(q: Quaternion):
    """4x4 real matrix (list of rows) of x -> x*q."""
    cols = [qmul(u, q).parts() for u in UNITS]
    return [[cols[c][r] for c in range(4)] for r in range(4)]


def _left_mult_block(q: Quaternion):
    cols = [qmul(q, u).parts() for u in UNITS]
    return [[cols[c][r] for c in range(4)] for r in range(4)]


def realify_op(A: QMatrix) -> list[dict]:
    """Real 4m x 4m matrix (sparse rows) of Op A acting on realified vectors."""
    m = len(A)
    rows = [dict() for _ in range(4 * m)]
    for l in range(m):
        for t in range(m):
            a = A[l][t]
            if not a:
                continue
            block = _right_mult_block(a)
            for r in range(4):
                for c in range(4):
                    val = block[r][c]
                    if val:
                        rows[4 * l + r][4 * t + c] = val
    return rows


def realify_left(q: Quaternion, m: int) -> list[dict]:
    """Real matrix of left multiplication by q on every coordinate."""
    block = _left_mult_block(q)
    rows = [dict() for _ in range(4 * m)]
    for t in range(m):
        for r in range(4):
            for c in range(4):
                if block[r][c]:
                    rows[4 * t + r][4 * t + c] = block[r][c]
    return rows


def real_mat_vec(rows: list[dict], v) -> tuple:
    out = []
    for row in rows:
        acc = ZERO_S
        for j, a in row.items():
            c = v[j]
            if c:
                acc = acc + a * c
        out.append(acc)
    return tuple(out)


def real_mat_add(A: list[dict], B: list[dict]) -> list[dict]:
    out = []
    for ra, rb in zip(A, B):
        row = dict(ra)
        for j, b in rb.items():
            val = row.get(j, ZERO_S) + b
            if val:
                row[j] = val
            else:
                row.pop(j, None)
        out.append(row)
    return out


# -- random elements ----------------------------------------------------------


def random_qvector(rng, m: int, bound: int = 100, irrational: bool = False) -> QVector:
    return tuple(random_quaternion(rng, bound, irrational=irrational) for _ in range(m))


def random_sp(rng, m: int, bound: int = 100, irrational: bool = False) -> QMatrix:
    rows = [[QZERO] * m for _ in range(m)]
    for l in range(m):
        rows[l][l] = random_quaternion(rng, bound, imaginary=True, irrational=irrational)
        for t in range(l + 1, m):
            q = random_quaternion(rng, bound, irrational=irrational)
            rows[l][t] = q
            rows[t][l] = -q.conj()
    return tuple(tuple(r) for r in rows)


def random_Sp(rng, m: int, steps: int = 3) -> QMatrix:
    """Rational element of Sp(m): product of unit diagonals, Pythagorean rotations, permutations."""
    M = identity(m)
    for _ in range(steps):
        M = op_compose(diagonal([random_unit_quaternion(rng) for _ in range(m)]), M)
        if m >= 2:
            a, b = rng.sample(range(m), 2)
            # rational point on the circle from a random slope
            t = random_rational(rng, 20)
            c = Scalar((1 - t * t) / (1 + t * t))
            s = Scalar(2 * t / (1 + t * t))
            rows = [list(r) for r in identity(m)]
            rows[a][a] = Quaternion(c)
            rows[b][b] = Quaternion(c)
            rows[a][b] = Quaternion(-s)
            rows[b][a] = Quaternion(s)
            M = op_compose(qmatrix(rows), M)
            perm = list(range(m))
            rng.shuffle(perm)
            P = tuple(tuple(QONE if perm[l] == t else QZERO for t in range(m)) for l in range(m))
            M = op_compose(P, M)
    return M
