"""Real subspaces of realified quaternionic spaces.

Vectors are flat tuples of ``Scalar``; coordinate t of H^m occupies indices
4t..4t+3 in the order (1, i, j, k).  On H^n the metric eta is the dot
product; on H^{1,n+1} it is read off the Witt Gram matrix.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum

from .echelon import EchelonBasis, dependencies, nullspace
from gmpy2 import mpq

from .errors import AmbientMismatch, NonStandardSubspace, NotASubspace
from .qcore import HALF_SQRT2, QI, QJ, QK, QONE, QZERO, ZERO_S, Quaternion, Scalar, as_scalar, qmul, random_rational
from .qlinalg import (
    apply_left,
    basis_vector,
    eta_gram,
    quaternionify,
    real_mat_vec,
    realify,
    witt_space,
)
from .parabolic import AlgebraSpan, ParabolicElement, contains_B, pure_N_part, realified_generators, to_matrix
from .qlinalg import realify_op


class RealSubspace:
    """A real subspace stored as a canonical reduced echelon basis."""

    def __init__(self, ambient_dim: int, vectors=()):
        self.ambient_dim = ambient_dim
        self._eb = EchelonBasis(ambient_dim, vectors)

    @classmethod
    def _from_echelon(cls, eb: EchelonBasis) -> "RealSubspace":
        out = cls.__new__(cls)
        out.ambient_dim = eb.dim
        out._eb = eb
        return out

    @classmethod
    def full(cls, ambient_dim: int) -> "RealSubspace":
        return cls(ambient_dim, [_unit(ambient_dim, i) for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return self._eb.rank

    @property
    def basis(self) -> list[tuple]:
        return self._eb.basis()

    def contains(self, v) -> bool:
        return self._eb.contains(v)

    def contains_subspace(self, other: "RealSubspace") -> bool:
        _check_ambient(self, other)
        return all(self.contains(v) for v in other.basis)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def map(self, fn) -> "RealSubspace":
        """Image under a linear map given as a function on vectors."""
        return RealSubspace(self.ambient_dim, [fn(v) for v in self.basis])

    def __and__(self, other):
        return intersect(self, other)

    def __add__(self, other):
        return subspace_sum(self, other)

    def __eq__(self, other):
        if not isinstance(other, RealSubspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._eb == other._eb

    def __hash__(self):
        return hash((self.ambient_dim, self._eb.key()))

    def __repr__(self):
        return f"RealSubspace(ambient={self.ambient_dim}, dim={self.dim})"


def _unit(dim: int, i: int) -> tuple:
    return tuple(Scalar(1) if j == i else ZERO_S for j in range(dim))


def _check_ambient(a: RealSubspace, b: RealSubspace):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim}")


def subspace_from_qvectors(vectors, m: int | None = None) -> RealSubspace:
    vectors = [tuple(Quaternion.coerce(x) for x in v) for v in vectors]
    if m is None:
        if not vectors:
            raise NotASubspace("cannot infer the ambient dimension of an empty list")
        m = len(vectors[0])
    return RealSubspace(4 * m, [realify(v) for v in vectors])


def intersect(a: RealSubspace, b: RealSubspace) -> RealSubspace:
    _check_ambient(a, b)
    A, B = a.basis, b.basis
    if not A or not B:
        return RealSubspace(a.ambient_dim)
    rels = dependencies(A + B)
    out = []
    for c in rels:
        v = [ZERO_S] * a.ambient_dim
        for ci, row in zip(c[: len(A)], A):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        v[j] = v[j] + ci * x
        out.append(v)
    return RealSubspace(a.ambient_dim, out)


def subspace_sum(a: RealSubspace, b: RealSubspace) -> RealSubspace:
    _check_ambient(a, b)
    eb = a._eb.copy()
    for v in b.basis:
        eb.add(v)
    return RealSubspace._from_echelon(eb)


def orthocomplement(S: RealSubspace, gram: list[dict] | None = None) -> RealSubspace:
    """{v : eta(s, v) = 0 for s in S}; gram None means the dot product."""
    dim = S.ambient_dim
    if gram is None:
        rows = S.basis
    else:
        if len(gram) != dim:
            raise AmbientMismatch(f"Gram matrix of size {len(gram)} for ambient {dim}")
        rows = [real_mat_vec(gram, s) for s in S.basis]  # gram is symmetric
    return RealSubspace(dim, nullspace(rows, dim))


@lru_cache(maxsize=None)
def witt_gram(ambient_dim: int) -> list[dict]:
    if ambient_dim % 4 or ambient_dim < 12:
        raise AmbientMismatch(f"{ambient_dim} is not the real dimension of some H^(1,n+1)")
    return eta_gram(witt_space(ambient_dim // 4 - 2))


def orthocomplement_eta(S: RealSubspace, lorentzian: bool = False) -> RealSubspace:
    """eta-orthocomplement in H^{1,n+1} (Witt basis) when ``lorentzian``, else in H^n."""
    if lorentzian:
        return orthocomplement(S, witt_gram(S.ambient_dim))
    return orthocomplement(S)


def apply_IJK(S: RealSubspace, which: str) -> RealSubspace:
    """Image of S under left multiplication by i, j or k."""
    q = {"I": QI, "J": QJ, "K": QK, "i": QI, "j": QJ, "k": QK}[which]
    if S.ambient_dim % 4:
        raise AmbientMismatch("left multiplication needs a realified quaternionic space")
    return S.map(lambda v: apply_left(q, v))


def quaternionic_span(S: RealSubspace) -> RealSubspace:
    eb = S._eb.copy()
    for v in S.basis:
        for q in (QI, QJ, QK):
            eb.add(apply_left(q, v))
    return RealSubspace._from_echelon(eb)


def is_full_quaternionic_span(S: RealSubspace) -> bool:
    return quaternionic_span(S).is_full()


def maximal_quaternionic(S: RealSubspace) -> RealSubspace:
    return S & apply_IJK(S, "I") & apply_IJK(S, "J") & apply_IJK(S, "K")


def gram_matrix(S: RealSubspace, gram: list[dict] | None = None) -> list[list]:
    B = S.basis
    images = B if gram is None else [real_mat_vec(gram, v) for v in B]
    return [[_dot(u, w) for w in images] for u in B]


def _dot(u, v):
    acc = ZERO_S
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def is_nondegenerate(S: RealSubspace) -> bool:
    """Exact rank test of the eta-Gram matrix on H^{1,n+1} (Witt basis)."""
    G = gram_matrix(S, witt_gram(S.ambient_dim))
    return EchelonBasis(S.dim, G).rank == S.dim if S.dim else True


# -- canonical decomposition of L in H^n ----------------------------------------------------


@dataclass(frozen=True)
class DecompositionSignature:
    m: int
    m1: int
    m2: int
    m3: int
    n: int
    real_dim: int = 0

    def __post_init__(self):
        if not (0 <= self.m <= self.m1 <= self.m2 <= self.m3 <= self.n):
            raise NotASubspace(f"inconsistent signature {self}")

    @property
    def k(self) -> int:
        return self.m3 - self.m


# coefficient field of each block and the unit u with u F u^{-1} = R + iR
_BLOCK_UNITS = {
    "H": QONE,
    "C_i": QONE,
    "C_j": Quaternion(HALF_SQRT2, 0, 0, -HALF_SQRT2),
    "C_k": Quaternion(HALF_SQRT2, 0, HALF_SQRT2, 0),
    "R": QONE,
}
_BLOCK_FIELD = {
    "H": (QONE, QI, QJ, QK),
    "C_i": (QONE, QI),
    "C_j": (QONE, QJ),
    "C_k": (QONE, QK),
    "R": (QONE,),
}


@dataclass(frozen=True)
class CanonicalForm:
    """Adapted g-orthogonal frame and the map onto H^m + C^k + R^r.

    ``adapted_basis`` lists (block, vector) pairs in canonical order;
    ``rotation`` lists, per canonical slot, the source frame index and the
    unit u of the coordinate conjugation c -> u c u^{-1}.
    """

    m: int
    k: int
    n: int
    real_dim: int
    adapted_basis: tuple
    norms: tuple
    rotation: tuple = field(default=())

    @property
    def blocks(self) -> list[str]:
        return [b for b, _ in self.adapted_basis]

    def coordinates(self, v) -> list[Quaternion]:
        """Quaternionic coordinates of v on the adapted frame."""
        X = quaternionify(v)
        out = []
        for (_, f), nrm in zip(self.adapted_basis, self.norms):
            g = QZERO
            for x, y in zip(X, f):
                g = g + qmul(x, y.conj())
            out.append(g * nrm.inverse())
        return out

    def apply_rotation(self, v) -> tuple:
        """Image of v in H^n after the frame change and block conjugation."""
        coords = self.coordinates(v)
        out = [QZERO] * self.n
        for slot, (src, u) in enumerate(self.rotation):
            out[slot] = qmul(qmul(u, coords[src]), u.conj())
        return realify(tuple(out))


def canonical_subspace(m: int, k: int, n: int, real_dim: int | None = None) -> RealSubspace:
    """H^m + C^k + R^r spanned by the standard basis (r defaults to n - m - k)."""
    if real_dim is None:
        real_dim = n - m - k
    if m < 0 or k < 0 or real_dim < 0 or m + k + real_dim > n:
        raise NotASubspace(f"no canonical subspace ({m}, {k}, {real_dim}) in H^{n}")
    vecs = []
    for t in range(m):
        vecs += [basis_vector(n, t, u) for u in (QONE, QI, QJ, QK)]
    for t in range(m, m + k):
        vecs += [basis_vector(n, t, u) for u in (QONE, QI)]
    for t in range(m + k, m + k + real_dim):
        vecs.append(basis_vector(n, t))
    return subspace_from_qvectors(vecs, n)


def general_subspace(m: int, m1: int, m2: int, m3: int, n: int, real_dim: int | None = None) -> RealSubspace:
    """H^m + (R+iR)^{m1-m} + (R+jR)^{m2-m1} + (R+kR)^{m3-m2} + R^r on the standard basis."""
    DecompositionSignature(m, m1, m2, m3, n)
    if real_dim is None:
        real_dim = n - m3
    if m3 + real_dim > n:
        raise NotASubspace("too many real directions")
    vecs = []
    for t in range(n):
        if t < m:
            units = (QONE, QI, QJ, QK)
        elif t < m1:
            units = (QONE, QI)
        elif t < m2:
            units = (QONE, QJ)
        elif t < m3:
            units = (QONE, QK)
        elif t < m3 + real_dim:
            units = (QONE,)
        else:
            units = ()
        vecs += [basis_vector(n, t, u) for u in units]
    return subspace_from_qvectors(vecs, n) if vecs else RealSubspace(4 * n)


def decomposition_pieces(L: RealSubspace) -> dict[str, RealSubspace]:
    """L_1, L_3, L_5, L_7, L_8 of the successive orthogonal splitting."""
    L1 = maximal_quaternionic(L)
    L2 = L & orthocomplement(L1)
    L3 = L2 & apply_IJK(L2, "I")
    L4 = L2 & orthocomplement(L3)
    L5 = L4 & apply_IJK(L4, "J")
    L6 = L4 & orthocomplement(L5)
    L7 = L6 & apply_IJK(L6, "K")
    L8 = L6 & orthocomplement(L7)
    return {"H": L1, "C_i": L3, "C_j": L5, "C_k": L7, "R": L8}


def decomposition_signature(L: RealSubspace) -> DecompositionSignature:
    if L.ambient_dim % 4:
        raise NotASubspace("L must live in a realified H^n")
    n = L.ambient_dim // 4
    P = decomposition_pieces(L)
    m = P["H"].dim // 4
    m1 = m + P["C_i"].dim // 2
    m2 = m1 + P["C_j"].dim // 2
    m3 = m2 + P["C_k"].dim // 2
    return DecompositionSignature(m, m1, m2, m3, n, P["R"].dim)


def _project_out(v: tuple, frame: list) -> tuple:
    X = quaternionify(v)
    for f, nrm in frame:
        g = QZERO
        for x, y in zip(X, f):
            g = g + qmul(x, y.conj())
        if g:
            c = g * nrm.inverse()
            X = tuple(x - qmul(c, y) for x, y in zip(X, f))
    return realify(X)


def canonical_decompose(L: RealSubspace) -> tuple[DecompositionSignature, CanonicalForm]:
    """Signature of L and an adapted frame carrying L onto H^m + C^k + R^r.

    Raises NonStandardSubspace when the pieces admit no g-orthogonal frame
    of the block form (which happens for subspaces in general position).
    """
    sig = decomposition_signature(L)
    n = sig.n
    P = decomposition_pieces(L)
    frame: list[tuple] = []  # (vector, |vector|^2)
    blocks: list[str] = []
    for block in ("H", "C_i", "C_j", "C_k", "R"):
        piece = P[block]
        units = _BLOCK_FIELD[block]
        span = EchelonBasis(L.ambient_dim)
        for v in piece.basis:
            if span.contains(v):
                continue
            w = _project_out(v, frame)
            if not piece.contains(w):
                raise NonStandardSubspace(f"the {block} piece has no orthogonal frame of block form")
            W = quaternionify(w)
            nrm = sum((x.norm2() for x in W), ZERO_S)
            frame.append((W, nrm))
            blocks.append(block)
            for u in units:
                span.add(realify(tuple(qmul(u, x) for x in W)))
        if span.rank != piece.dim:
            raise NonStandardSubspace(f"the {block} piece is not spanned by its frame")
    if len(frame) > n:
        raise NonStandardSubspace("frame larger than n")
    rotation = tuple((i, _BLOCK_UNITS[b]) for i, b in enumerate(blocks))
    form = CanonicalForm(
        m=sig.m,
        k=sig.k,
        n=n,
        real_dim=sig.real_dim,
        adapted_basis=tuple(zip(blocks, (f for f, _ in frame))),
        norms=tuple(nrm for _, nrm in frame),
        rotation=rotation,
    )
    return sig, form


def rotated_image(L: RealSubspace, form: CanonicalForm) -> RealSubspace:
    return RealSubspace(L.ambient_dim, [form.apply_rotation(v) for v in L.basis])


def frame_image(L: RealSubspace, form: CanonicalForm) -> RealSubspace:
    """L in adapted coordinates, before the block conjugation."""
    out = []
    for v in L.basis:
        c = form.coordinates(v)
        out.append(realify(tuple(c) + (QZERO,) * (form.n - len(c))))
    return RealSubspace(L.ambient_dim, out)


# -- invariant subspaces in H^{1,n+1} -------------------------------------------------------


class Verdict(str, Enum):
    WEAKLY_IRREDUCIBLE = "WeaklyIrreducible"
    INCONCLUSIVE = "Inconclusive"


def as_real_generators(gens) -> list[list[dict]]:
    """Accept an AlgebraSpan, parabolic elements or realified sparse matrices."""
    if isinstance(gens, AlgebraSpan):
        return realified_generators(gens)
    out = []
    for g in gens:
        if isinstance(g, ParabolicElement):
            out.append(realify_op(to_matrix(g)))
        else:
            out.append(g)
    return out


def _rational_rows(mats):
    """Generators as sparse mpq rows, or None if some entry involves sqrt 2."""
    out = []
    for M in mats:
        rows = []
        for row in M:
            items = []
            for j, a in row.items():
                a = as_scalar(a)
                if a.s:
                    return None
                items.append((j, a.r))
            rows.append(items)
        out.append(rows)
    return out


def _closure_rational(mats, seeds, dim: int) -> RealSubspace:
    """invariant_closure over Q with raw mpq arithmetic."""
    rows: dict[int, list] = {}

    def add(v):
        for p, row in rows.items():
            c = v[p]
            if c:
                for j, rj in row:
                    v[j] -= c * rj
        piv = next((j for j, c in enumerate(v) if c), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        rows[piv] = [(j, c * inv) for j, c in enumerate(v) if c]
        return True

    queue = []
    for s in seeds:
        v = [mpq(0)] * dim
        for j, c in enumerate(s):
            c = as_scalar(c)
            v[j] = c.r
        if add(list(v)):
            queue.append(v)
    while queue and len(rows) < dim:
        v = queue.pop()
        for M in mats:
            w = [mpq(0)] * dim
            for i, items in enumerate(M):
                acc = mpq(0)
                for j, a in items:
                    c = v[j]
                    if c:
                        acc += a * c
                w[i] = acc
            if any(w) and add(list(w)):
                queue.append(w)
                if len(rows) == dim:
                    break
    if len(rows) == dim:
        return RealSubspace.full(dim)
    vecs = []
    for row in rows.values():
        v = [ZERO_S] * dim
        for j, c in row:
            v[j] = Scalar(c)
        vecs.append(v)
    return RealSubspace(dim, vecs)


def invariant_closure(gens, seeds, ambient_dim: int | None = None) -> RealSubspace:
    """Smallest subspace containing the seeds and stable under every generator."""
    mats = as_real_generators(gens)
    seeds = list(seeds)
    if ambient_dim is None:
        if mats:
            ambient_dim = len(mats[0])
        elif seeds:
            ambient_dim = len(seeds[0])
        else:
            raise AmbientMismatch("no generators and no seeds")
    rational = _rational_rows(mats)
    if rational is not None and all(not as_scalar(c).s for s in seeds for c in s):
        return _closure_rational(rational, seeds, ambient_dim)
    eb = EchelonBasis(ambient_dim)
    queue = [tuple(as_scalar(c) for c in s) for s in seeds if eb.add(s)]
    while queue and eb.rank < ambient_dim:
        v = queue.pop()
        for M in mats:
            w = real_mat_vec(M, v)
            if eb.add(w):
                queue.append(w)
                if eb.rank == ambient_dim:
                    break
    return RealSubspace._from_echelon(eb)


def preserves_subspace(gens, S: RealSubspace) -> bool:
    for M in as_real_generators(gens):
        if len(M) != S.ambient_dim:
            raise AmbientMismatch("generator and subspace dimensions differ")
        for v in S.basis:
            if not S.contains(real_mat_vec(M, v)):
                return False
    return True


def _random_vector(rng, dim: int) -> tuple:
    """Random rational direction; denominators cleared since only the line matters."""
    coords = [random_rational(rng, 100) for _ in range(dim)]
    scale = math.lcm(*(c.denominator for c in coords))
    return tuple(Scalar(c * scale) for c in coords)


def _proper(S: RealSubspace) -> bool:
    return 0 < S.dim < S.ambient_dim


def search_invariant_nondegenerate(gens, attempts: int = 500, rng_seed: int = 0, ambient_dim: int | None = None):
    """Seeded hunt for a proper non-degenerate invariant subspace; None when nothing turns up.

    The orthocomplement of an invariant subspace is invariant because the
    generators are eta-skew, so every invariant subspace found also
    contributes its complement, its radical and sums with earlier finds.
    """
    mats = as_real_generators(gens)
    if ambient_dim is None:
        if not mats:
            raise AmbientMismatch("ambient dimension needed when there are no generators")
        ambient_dim = len(mats[0])
    gram = witt_gram(ambient_dim)
    rng = random.Random(rng_seed)
    rational = _rational_rows(mats)

    def closure(seed_vec):
        if rational is not None:
            return _closure_rational(rational, [seed_vec], ambient_dim)
        return invariant_closure(mats, [seed_vec], ambient_dim)

    found: list[RealSubspace] = []
    seen: set = set()

    def consider(S: RealSubspace):
        if not _proper(S) or S in seen:
            return None
        seen.add(S)
        if is_nondegenerate(S):
            return S
        found.append(S)
        return None

    def derived(S: RealSubspace):
        perp = orthocomplement(S, gram)
        yield perp
        yield S & perp
        yield S + perp
        for T in list(found[-3:]):
            yield S & T
            yield S + T

    tried = 0
    candidates = [_unit(ambient_dim, i) for i in range(ambient_dim)]
    while tried < attempts:
        if candidates:
            seed_vec = candidates.pop(0)
        else:
            seed_vec = _random_vector(rng, ambient_dim)
        tried += 1
        S = closure(seed_vec)
        hit = consider(S)
        if hit is not None:
            return hit
        if _proper(S):
            for T in list(derived(S)):
                hit = consider(T)
                if hit is not None:
                    return hit
    return None


def structural_weak_irreducibility(S: AlgebraSpan) -> Verdict:
    """Sufficient test: B inside S and the pure translation part spans H^n over H.

    Only translations whose element has vanishing a and A parts are used:
    a translation coupled to a nonzero A can leave a non-degenerate
    subspace invariant, so the full N-projection is not enough.
    """
    if not contains_B(S):
        return Verdict.INCONCLUSIVE
    n = S.n
    pure = pure_N_part(S)
    if not pure:
        return Verdict.INCONCLUSIVE
    span = subspace_from_qvectors(pure, n)
    return Verdict.WEAKLY_IRREDUCIBLE if is_full_quaternionic_span(span) else Verdict.INCONCLUSIVE


def real_witt_span(n: int) -> RealSubspace:
    """span_R{p, e_1, ..., e_n, q}."""
    return RealSubspace(4 * (n + 2), [realify(basis_vector(n + 2, t)) for t in range(n + 2)])


def hp_line(n: int) -> RealSubspace:
    return subspace_from_qvectors([basis_vector(n + 2, 0, u) for u in (QONE, QI, QJ, QK)], n + 2)
