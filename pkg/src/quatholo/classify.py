"""Parametrized families of subalgebras of the parabolic algebra containing B.

Each family is described by a ``TypeSpec``.  Subalgebras h are given by
generator lists and every linear map on h by its table of values on those
generators; consistency of the tables is checked, never assumed.  Elements
of sp(1) + sp(n) are stored as parabolic elements (s, A, 0, 0) with s in
Im H, which is also how they act on H^n: x -> s x + Op A . x.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .echelon import EchelonBasis, dependencies, nullspace, solve_combination
from .errors import InvalidSpec, QuatHoloError, NotSkew, ShapeOutOfRange, UnsupportedCase
from .qcore import HALF_SQRT2, IMAG_UNITS, QI, QONE, QZERO, SQRT2, ZERO_S, Quaternion, Scalar, as_scalar, commutator
from .qlinalg import (
    QMatrix,
    QVector,
    definite_space,
    in_sp,
    is_zero_matrix,
    quaternionify,
    real_mat_add,
    real_mat_vec,
    realify,
    realify_left,
    realify_op,
    sp_basis,
    zero_matrix,
    zero_vector,
)
from .parabolic import (
    AlgebraSpan,
    ParabolicElement,
    basis_B,
    bracket,
    element,
    zero,
)
from .simalg import SimAlgebraElement, SimSpan, dF_span
from .subspaces import (
    RealSubspace,
    canonical_subspace,
    general_subspace,
    maximal_quaternionic,
    orthocomplement,
    subspace_from_qvectors,
)

KINDS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI")


# -- linear maps given by value tables ------------------------------------------------------


def _value_flat(v) -> tuple:
    if isinstance(v, Quaternion):
        return v.parts()
    if isinstance(v, tuple):
        return realify(v)
    return (as_scalar(v),)


class LinearMapTable:
    """Linear map defined by its values on a list of generators."""

    def __init__(self, domain: list[ParabolicElement], values: list, kind: str, n: int = 0):
        if len(domain) != len(values):
            raise InvalidSpec(["value table length differs from the number of generators"])
        self.domain = list(domain)
        self.kind = kind  # "real", "quat" or "vec"
        self.n = n
        if kind == "real":
            self.values = [as_scalar(v) for v in values]
        elif kind == "quat":
            self.values = [Quaternion.coerce(v) for v in values]
        else:
            self.values = [tuple(Quaternion.coerce(x) for x in v) for v in values]

    def _zero(self):
        if self.kind == "real":
            return ZERO_S
        if self.kind == "quat":
            return QZERO
        return zero_vector(self.n)

    def _combine(self, coeffs):
        acc = self._zero()
        for c, v in zip(coeffs, self.values):
            if not c:
                continue
            if self.kind == "vec":
                acc = tuple(a + x * c for a, x in zip(acc, v))
            else:
                acc = acc + v * c
        return acc

    def is_well_defined(self) -> bool:
        flats = [e.flatten() for e in self.domain]
        for c in dependencies(flats) if flats else []:
            if any(_value_flat(self._combine(c))):
                return False
        return True

    def __call__(self, e: ParabolicElement):
        if not self.domain:
            if e.is_zero():
                return self._zero()
            raise InvalidSpec(["map evaluated outside its domain"])
        coeffs = solve_combination([d.flatten() for d in self.domain], e.flatten())
        if coeffs is None:
            raise InvalidSpec(["map evaluated outside its domain"])
        return self._combine(coeffs)

    def image_rank(self) -> int:
        flats = [_value_flat(v) for v in self.values]
        return EchelonBasis(len(flats[0]), flats).rank if flats else 0

    def is_zero(self) -> bool:
        return all(not any(_value_flat(v)) for v in self.values)

    def vanishes_on(self, elements) -> bool:
        return all(not any(_value_flat(self(e))) for e in elements)


# -- embeddings of u(k) and so(d) -----------------------------------------------------------


def _is_complex(q: Quaternion) -> bool:
    return not q.y and not q.z


def embed_u(A: QMatrix, offset: int, n: int) -> QMatrix:
    """Place a skew-Hermitian complex matrix on the coordinates offset..offset+k-1.

    Acting by Op, the result is the same matrix on both halves of
    span_C + j span_C of those coordinates.
    """
    k = len(A)
    for l in range(k):
        for t in range(k):
            if not _is_complex(A[l][t]):
                raise NotSkew("entries must lie in R + iR")
            if A[l][t] != -A[t][l].conj():
                raise NotSkew("matrix is not skew-Hermitian")
    return _place(A, offset, n)


def embed_so(A: QMatrix, offset: int, n: int) -> QMatrix:
    """Place a real skew-symmetric matrix; Op of it acts by A on all four real parts."""
    d = len(A)
    for l in range(d):
        for t in range(d):
            if not A[l][t].is_real():
                raise NotSkew("entries must be real")
            if A[l][t] != -A[t][l]:
                raise NotSkew("matrix is not skew-symmetric")
    return _place(A, offset, n)


def _place(A: QMatrix, offset: int, n: int) -> QMatrix:
    d = len(A)
    if offset < 0 or offset + d > n:
        raise ShapeOutOfRange(f"block of size {d} at {offset} does not fit in {n}")
    rows = [[QZERO] * n for _ in range(n)]
    for l in range(d):
        for t in range(d):
            rows[offset + l][offset + t] = Quaternion.coerce(A[l][t])
    return tuple(tuple(r) for r in rows)


# -- commutants and stabilizers -------------------------------------------------------------


def _as_elements(gens, n: int | None = None) -> list[ParabolicElement]:
    out = []
    for g in gens:
        if isinstance(g, ParabolicElement):
            out.append(g)
        elif isinstance(g, Quaternion):
            out.append(element(n, a=g))
        else:
            out.append(element(len(g), A=g))
    return out


def commutant(gens, n: int | None = None) -> AlgebraSpan:
    """Span of all brackets of pairs of generators."""
    elems = _as_elements(gens, n)
    if n is None:
        if not elems:
            raise InvalidSpec(["commutant of an empty list needs n"])
        n = elems[0].n
    brackets = [bracket(x, y) for i, x in enumerate(elems) for y in elems[i + 1 :]]
    return AlgebraSpan(n, brackets)


def _sp1_spn_actions(n: int):
    """Basis of sp(1) + sp(n) with its realified action on H^n."""
    elems = [element(n, a=q) for q in IMAG_UNITS] + [element(n, A=A) for A in sp_basis(n)]
    mats = [realify_left(q, n) for q in IMAG_UNITS] + [realify_op(A) for A in sp_basis(n)]
    return elems, mats


def real_action(e: ParabolicElement) -> list[dict]:
    """Realified action x -> s x + Op A . x of an element (s, A) of sp(1) + sp(n)."""
    return real_mat_add(realify_left(e.a, e.n), realify_op(e.A))


def preserving_subalgebra(L: RealSubspace, sp_n_only: bool = False) -> AlgebraSpan:
    """All of sp(1) + sp(n) (or sp(n) alone) mapping L into L and L^perp into L^perp."""
    n = L.ambient_dim // 4
    elems, mats = _sp1_spn_actions(n)
    if sp_n_only:
        elems, mats = elems[3:], mats[3:]
    perp = orthocomplement(L)
    rows = []
    for x in L.basis:
        images = [real_mat_vec(M, x) for M in mats]
        for y in perp.basis:
            rows.append([sum((a * b for a, b in zip(y, im) if a and b), ZERO_S) for im in images])
    out = []
    for c in nullspace(rows, len(elems)):
        acc = zero(n)
        for ci, e in zip(c, elems):
            if ci:
                acc = acc + e.scale(ci)
        out.append(acc)
    return AlgebraSpan(n, out)


def _check_shape(m: int, k: int, n: int):
    if n < 1 or not (0 <= m <= n) or not (0 <= k <= n - m):
        raise ShapeOutOfRange(f"(m, k, n) = ({m}, {k}, {n})")


def stabilizer_intersection(m: int, k: int, n: int) -> AlgebraSpan:
    """Elements of sp(1) + sp(n) preserving H^m + C^k + R^{n-m-k} and its complement."""
    _check_shape(m, k, n)
    return preserving_subalgebra(canonical_subspace(m, k, n))


def case_table_dimension(m: int, k: int, n: int) -> int:
    """Dimension predicted by the three-case table."""
    _check_shape(m, k, n)
    if m == n:
        return 3 + n * (2 * n + 1)
    r = n - m - k
    if r == 0:
        return m * (2 * m + 1) + (n - m) ** 2 + 1
    return m * (2 * m + 1) + k * k + r * (r - 1) // 2


def stabilizer_dimension(m: int, k: int, n: int) -> int:
    """Closed form for the solver's answer.

    Differs from ``case_table_dimension`` when a real block is present: the
    maps x -> s x - x s (s in Im H) kill real coordinates, so the pairs
    (s, -s on the real block) preserve L; a complex block cuts s down to iR.
    """
    _check_shape(m, k, n)
    r = n - m - k
    base = case_table_dimension(m, k, n)
    if m == n or r == 0:
        return base
    return base + (3 if k == 0 else 1)


# -- type specifications -------------------------------------------------------------------


@dataclass
class TypeSpec:
    kind: str
    n: int
    m: int = 0
    k: int = 0
    shape: tuple | None = None  # (m, m1, m2, m3) for X, XI and general IX
    h_generators: list = field(default_factory=list)
    h_sp1: list | None = None  # sp(1) parts paired with h_generators
    h0_generators: list = field(default_factory=list)
    a2: Quaternion = QZERO
    phi: list | None = None
    varphi: list | None = None
    varphi_h0: list | None = None
    varphi_t: Scalar | None = None
    psi: list | None = None
    W_basis: list = field(default_factory=list)
    U_basis: list = field(default_factory=list)
    translations_in: str = "U"

    def __post_init__(self):
        self.a2 = Quaternion.coerce(self.a2)
        self.h0_generators = [Quaternion.coerce(q) for q in self.h0_generators]
        if self.h_sp1 is not None:
            self.h_sp1 = [Quaternion.coerce(q) for q in self.h_sp1]


def h_elements(spec: TypeSpec) -> list[ParabolicElement]:
    """h as elements (s, A, 0, 0); s = 0 unless sp(1) parts are supplied."""
    sp1 = spec.h_sp1 or [QZERO] * len(spec.h_generators)
    return [element(spec.n, a=s, A=A) for s, A in zip(sp1, spec.h_generators)]


def h0_elements(spec: TypeSpec) -> list[ParabolicElement]:
    return [element(spec.n, a=c) for c in spec.h0_generators]


def _shape_tuple(spec: TypeSpec) -> tuple:
    if spec.shape is not None:
        return tuple(spec.shape)
    return (spec.m, spec.m + spec.k, spec.m + spec.k, spec.m + spec.k)


def translation_subspace(spec: TypeSpec) -> RealSubspace:
    """The real subspace L swept by the translation parts."""
    n = spec.n
    kind = spec.kind
    if kind in ("I", "II", "III", "IV"):
        return canonical_subspace(n, 0, n)
    if kind in ("V", "VII"):
        return canonical_subspace(spec.m, n - spec.m, n)
    if kind in ("VI", "VIII"):
        return canonical_subspace(spec.m, spec.k, n)
    if kind == "IX":
        return _span(spec.W_basis, n) + _span(spec.U_basis, n)
    m, m1, m2, m3 = _shape_tuple(spec)
    return general_subspace(m, m1, m2, m3, n)


def _span(vectors, n: int) -> RealSubspace:
    return subspace_from_qvectors(vectors, n) if vectors else RealSubspace(4 * n)


def _translation_vectors(spec: TypeSpec) -> list[QVector]:
    if spec.kind == "IX":
        src = spec.U_basis if spec.translations_in == "U" else spec.W_basis
        return [tuple(Quaternion.coerce(x) for x in v) for v in src]
    return [quaternionify(v) for v in translation_subspace(spec).basis]


def _map(spec: TypeSpec, values, kind: str, domain=None) -> LinearMapTable:
    domain = h_elements(spec) if domain is None else domain
    if values is None:
        values = [_zero_value(kind, spec.n)] * len(domain)
    return LinearMapTable(domain, values, kind, spec.n)


def _zero_value(kind: str, n: int):
    return {"real": ZERO_S, "quat": QZERO}.get(kind) if kind != "vec" else zero_vector(n)


def type_generators(spec: TypeSpec) -> list[ParabolicElement]:
    """Generators of the a/A part, before translations and B are added."""
    n = spec.n
    H = h_elements(spec)
    one = element(n, a=1)
    kind = spec.kind
    if kind == "I":
        return [one] + h0_elements(spec) + H
    if kind == "II":
        phi = spec.phi or [QZERO] * len(H)
        return [one, element(n, a=spec.a2)] + [e + element(n, a=p) for e, p in zip(H, phi)]
    if kind == "III":
        vh0 = spec.varphi_h0 or [0] * len(spec.h0_generators)
        vh = spec.varphi or [0] * len(H)
        out = [element(n, a=c + as_scalar(v)) for c, v in zip(spec.h0_generators, vh0)]
        return out + [e + element(n, a=as_scalar(v)) for e, v in zip(H, vh)]
    if kind == "IV":
        t = as_scalar(spec.varphi_t or 0)
        phi = spec.phi or [QZERO] * len(H)
        vh = spec.varphi or [0] * len(H)
        out = [element(n, a=spec.a2 + t)]
        return out + [e + element(n, a=Quaternion.coerce(p) + as_scalar(v)) for e, p, v in zip(H, phi, vh)]
    if kind == "V":
        return [one, element(n, a=QI)] + H
    if kind == "VI":
        phi = spec.phi or [0] * len(H)
        return [one] + [e + element(n, a=QI * as_scalar(p)) for e, p in zip(H, phi)]
    if kind == "VII":
        t = as_scalar(spec.varphi_t or 0)
        vh = spec.varphi or [0] * len(H)
        return [element(n, a=QI + t)] + [e + element(n, a=as_scalar(v)) for e, v in zip(H, vh)]
    if kind == "VIII":
        phi = spec.phi or [0] * len(H)
        vh = spec.varphi or [0] * len(H)
        return [e + element(n, a=QI * as_scalar(p) + as_scalar(v)) for e, p, v in zip(H, phi, vh)]
    if kind == "IX":
        psi = spec.psi or [zero_vector(n)] * len(H)
        return [ParabolicElement(e.a, e.A, tuple(Quaternion.coerce(x) for x in X), QZERO) for e, X in zip(H, psi)]
    if kind == "X":
        return [one] + H
    if kind == "XI":
        vh = spec.varphi or [0] * len(H)
        return [e + element(n, a=as_scalar(v)) for e, v in zip(H, vh)]
    raise InvalidSpec([f"unknown type {kind!r}"])


def assemble_type(spec: TypeSpec) -> AlgebraSpan:
    """The algebra described by ``spec`` without validating it."""
    n = spec.n
    gens = [g for g in type_generators(spec) if not g.is_zero()]
    gens += [element(n, X=X) for X in _translation_vectors(spec)]
    gens += basis_B(n)
    return AlgebraSpan(n, gens)


def build_type(spec: TypeSpec) -> AlgebraSpan:
    bad = validate_type(spec)
    if bad:
        raise InvalidSpec(bad)
    return assemble_type(spec)


# -- validation ---------------------------------------------------------------------------


def _closed(elems, n: int) -> bool:
    S = AlgebraSpan(n, elems)
    basis = S.basis()
    return all(S.contains(bracket(x, y)) for i, x in enumerate(basis) for y in basis[i + 1 :])


def _preserves(e: ParabolicElement, L: RealSubspace) -> bool:
    M = real_action(e)
    return all(L.contains(real_mat_vec(M, v)) for v in L.basis)


def _phi_checks(spec: TypeSpec, out: list):
    """phi : h -> sp(1) must be a well defined homomorphism."""
    H = h_elements(spec)
    phi = _map(spec, spec.phi, "quat")
    if not all(v.is_imaginary() for v in phi.values):
        out.append("φ must take values in Im H")
    if not phi.is_well_defined():
        out.append("φ is not well defined on the generators of h")
        return phi
    for i, x in enumerate(H):
        for j, y in enumerate(H[i + 1 :], i + 1):
            try:
                lhs = phi(bracket(x, y))
            except InvalidSpec:
                continue  # reported by the closure check
            if lhs != commutator(phi.values[i], phi.values[j]):
                out.append("φ is not a homomorphism")
                return phi
    return phi


def _a2_clauses(spec: TypeSpec, phi: LinearMapTable, out: list):
    a2 = spec.a2
    if a2.is_zero():
        return
    if phi.image_rank() > 1:
        out.append("rk φ ≤ 1 violated (a2 ≠ 0)")
    for v in phi.values:
        c = commutator(v, a2)
        if not EchelonBasis(4, [a2.parts()]).contains(c.parts()):
            out.append("[Im φ, a2] ⊂ R a2 violated")
            break


def _real_map_vanishes(spec: TypeSpec, values, name: str, out: list, extra_domain=None, extra_values=None):
    domain = h_elements(spec) + list(extra_domain or [])
    vals = list(values or [0] * len(h_elements(spec))) + list(extra_values or [])
    table = LinearMapTable(domain, vals, "real")
    if not table.is_well_defined():
        out.append(f"{name} is not well defined on the generators")
        return table
    try:
        ok = table.vanishes_on(commutant(domain, spec.n).basis())
    except InvalidSpec:
        ok = True  # commutant outside the span: closure check reports it
    if not ok:
        out.append(f"{name} must vanish on the commutant")
    return table


def validate_type(spec: TypeSpec) -> list[str]:
    """List of violated constraints (empty when the parameters are admissible)."""
    out: list[str] = []
    kind, n = spec.kind, spec.n
    if kind not in KINDS:
        return [f"unknown type {kind!r}"]
    if n < 1:
        return ["n must be at least 1"]
    H = h_elements(spec)
    space = definite_space(n)
    for A in spec.h_generators:
        if len(A) != n or not in_sp(space, A):
            out.append("h must lie in sp(n)")
            break
    if spec.h_sp1 is not None:
        if len(spec.h_sp1) != len(spec.h_generators):
            out.append("sp(1) parts must pair with the generators of h")
        if not all(s.is_imaginary() for s in spec.h_sp1):
            out.append("sp(1) parts must be imaginary")
        if kind not in ("IX", "X", "XI") and any(not s.is_zero() for s in spec.h_sp1):
            out.append("h must lie in sp(n)")
    if out:
        return out
    if not _closed(H, n):
        out.append("h is not closed under the bracket")
    if not spec.a2.is_imaginary():
        out.append("a2 must lie in Im H")

    if kind in ("I", "III"):
        h0 = spec.h0_generators
        if not all(c.is_imaginary() for c in h0):
            out.append("h0 must lie in sp(1)")
        d = EchelonBasis(4, [c.parts() for c in h0]).rank
        if d not in (2, 3):
            out.append("h0 must have dimension 2 or 3")
        if not _closed(h0_elements(spec), n):
            out.append("h0 is not closed under the bracket")

    if kind == "II":
        phi = _phi_checks(spec, out)
        _a2_clauses(spec, phi, out)
    elif kind == "III":
        _real_map_vanishes(spec, spec.varphi, "varphi", out, h0_elements(spec), spec.varphi_h0 or [0] * len(spec.h0_generators))
    elif kind == "IV":
        phi = _phi_checks(spec, out)
        _a2_clauses(spec, phi, out)
        _real_map_vanishes(spec, spec.varphi, "varphi", out)
        if not spec.a2.is_zero() and not phi.is_zero() and as_scalar(spec.varphi_t or 0):
            out.append("varphi must vanish on R when a2 ≠ 0 and φ ≠ 0")
    elif kind in ("V", "VI", "VII", "VIII"):
        if not (0 <= spec.m < n):
            out.append("0 ≤ m < n violated")
            return out
        k = n - spec.m if kind in ("V", "VII") else spec.k
        if not (0 <= k <= n - spec.m):
            out.append("0 ≤ k ≤ n - m violated")
            return out
        L = canonical_subspace(spec.m, k, n)
        if not all(_preserves(e, L) for e in H):
            out.append("h must preserve H^m + C^k + R^(n-m-k)")
        r = n - spec.m - k
        if kind in ("VI", "VIII"):
            _real_map_vanishes(spec, spec.phi, "φ", out)
            if r >= 1 and any(as_scalar(p) for p in spec.phi or []):
                out.append("φ = 0 required when n - m - k ≥ 1")
        if kind in ("VII", "VIII"):
            _real_map_vanishes(spec, spec.varphi, "varphi", out)
    elif kind == "IX":
        _validate_ix(spec, H, out)
    elif kind in ("X", "XI"):
        shape = spec.shape
        if shape is None or len(shape) != 4:
            out.append("shape (m, m1, m2, m3) required")
            return out
        m, m1, m2, m3 = shape
        if not (0 <= m <= m1 <= m2 <= m3 <= n):
            out.append("0 ≤ m ≤ m1 ≤ m2 ≤ m3 ≤ n violated")
            return out
        if sum((m < m1, m1 < m2, m2 < m3)) < 2:
            out.append("at least two of m < m1 < m2 < m3 must hold")
        L = general_subspace(m, m1, m2, m3, n)
        if not all(_preserves(e, L) for e in H):
            out.append("h must preserve L and its complement")
        if kind == "XI":
            _real_map_vanishes(spec, spec.varphi, "varphi", out)
    return out


def _validate_ix(spec: TypeSpec, H, out: list):
    n = spec.n
    W = _span(spec.W_basis, n)
    U = _span(spec.U_basis, n)
    if (W & U).dim:
        out.append("W and U must meet in 0")
    if spec.shape is not None:
        try:
            L = general_subspace(*spec.shape, n)
        except QuatHoloError:
            out.append("0 ≤ m ≤ m1 ≤ m2 ≤ m3 ≤ n violated")
            return
        if W + U != L:
            out.append("L must be the direct sum of W and U")
    if any(sum((a * b for a, b in zip(w, u)), ZERO_S) for w in W.basis for u in U.basis):
        out.append("W and U must be orthogonal")
    acted = U if spec.translations_in == "U" else W
    core = maximal_quaternionic(acted)
    perp = orthocomplement(core)
    for e in H:
        M = real_action(e)
        if not all(core.contains(real_mat_vec(M, v)) for v in core.basis) or any(
            any(real_mat_vec(M, v)) for v in perp.basis
        ):
            out.append("h must lie in sp of the quaternionic part of " + spec.translations_in)
            break
    psi = _map(spec, spec.psi, "vec")
    if not psi.is_well_defined():
        out.append("ψ is not well defined on the generators")
        return
    image = _span([v for v in psi.values if any(v)], n)
    if not all(W.contains(realify(v)) for v in psi.values):
        out.append("ψ must take values in W")
    elif image != W:
        out.append("ψ surjective onto W violated")
    try:
        if not psi.vanishes_on(commutant(H, n).basis()):
            out.append("ψ must vanish on the commutant")
    except InvalidSpec:
        pass


# -- similarity side ---------------------------------------------------------------------------


@dataclass
class SimilarityType:
    """A transitive similarity algebra: R, varphi or psi kind, preserving L.

    ``pairs`` are the (s, A) generators of h; ``varphi`` the dilation
    values of the twisted kind; ``psi`` the translation values of the psi kind.
    """

    kind: str
    n: int
    m: int = 0
    k: int = 0
    shape: tuple | None = None
    pairs: list = field(default_factory=list)
    varphi: list | None = None
    psi: list | None = None
    W_basis: list = field(default_factory=list)
    U_basis: list = field(default_factory=list)

    def subspace(self) -> RealSubspace:
        if self.kind == "psi":
            return _span(self.W_basis, self.n) + _span(self.U_basis, self.n)
        if self.shape is not None:
            return general_subspace(*self.shape, self.n)
        return canonical_subspace(self.m, self.k, self.n)


def similarity_type_algebra(t: SimilarityType) -> SimSpan:
    n = t.n
    gens = []
    if t.kind == "R":
        gens.append(SimAlgebraElement(1, QZERO, zero_matrix(n), zero_vector(n)))
    for i, (s, A) in enumerate(t.pairs):
        lam = as_scalar(t.varphi[i]) if t.kind == "varphi" and t.varphi else ZERO_S
        v = tuple(t.psi[i]) if t.kind == "psi" and t.psi else zero_vector(n)
        gens.append(SimAlgebraElement(lam, s, A, v))
    if t.kind == "psi":
        trans = [tuple(Quaternion.coerce(x) for x in u) for u in t.U_basis]
    else:
        trans = [quaternionify(v) for v in t.subspace().basis]
    gens += [SimAlgebraElement(0, QZERO, zero_matrix(n), X) for X in trans]
    return SimSpan(n, gens)


def intended_similarity_type(spec: TypeSpec) -> SimilarityType:
    """The similarity algebra a Type is meant to lift, assembled on the similarity side."""
    n, kind = spec.n, spec.kind
    Z = zero_matrix(n)
    A = list(spec.h_generators)
    sp1 = spec.h_sp1 or [QZERO] * len(A)
    vals = [as_scalar(v) for v in (spec.varphi or [0] * len(A))]
    common = dict(n=n)
    if kind in ("I", "II", "III", "IV"):
        common.update(m=n, k=0)
    elif kind in ("V", "VII"):
        common.update(m=spec.m, k=n - spec.m)
    elif kind in ("VI", "VIII"):
        common.update(m=spec.m, k=spec.k)
    elif kind == "IX":
        common.update(m=spec.m, k=spec.k, shape=spec.shape)
    else:
        common.update(shape=_shape_tuple(spec))
    if kind == "I":
        return SimilarityType("R", pairs=[(c, Z) for c in spec.h0_generators] + [(QZERO, a) for a in A], **common)
    if kind == "II":
        phi = spec.phi or [QZERO] * len(A)
        return SimilarityType("R", pairs=[(spec.a2, Z)] + list(zip(phi, A)), **common)
    if kind == "III":
        vh0 = [as_scalar(v) for v in (spec.varphi_h0 or [0] * len(spec.h0_generators))]
        pairs = [(c, Z) for c in spec.h0_generators] + [(QZERO, a) for a in A]
        return SimilarityType("varphi", pairs=pairs, varphi=vh0 + vals, **common)
    if kind == "IV":
        phi = spec.phi or [QZERO] * len(A)
        pairs = [(spec.a2, Z)] + list(zip(phi, A))
        return SimilarityType("varphi", pairs=pairs, varphi=[as_scalar(spec.varphi_t or 0)] + vals, **common)
    if kind == "V":
        return SimilarityType("R", pairs=[(QI, Z)] + [(QZERO, a) for a in A], **common)
    if kind == "VI":
        phi = [QI * as_scalar(p) for p in (spec.phi or [0] * len(A))]
        return SimilarityType("R", pairs=list(zip(phi, A)), **common)
    if kind == "VII":
        pairs = [(QI, Z)] + [(QZERO, a) for a in A]
        return SimilarityType("varphi", pairs=pairs, varphi=[as_scalar(spec.varphi_t or 0)] + vals, **common)
    if kind == "VIII":
        phi = [QI * as_scalar(p) for p in (spec.phi or [0] * len(A))]
        return SimilarityType("varphi", pairs=list(zip(phi, A)), varphi=vals, **common)
    if kind == "IX":
        psi = [tuple(x * (-HALF_SQRT2) for x in v) for v in (spec.psi or [zero_vector(n)] * len(A))]
        trans = spec.U_basis if spec.translations_in == "U" else spec.W_basis
        return SimilarityType(
            "psi", pairs=list(zip(sp1, A)), psi=psi, W_basis=spec.W_basis, U_basis=trans, **common
        )
    if kind == "X":
        return SimilarityType("R", pairs=list(zip(sp1, A)), **common)
    return SimilarityType("varphi", pairs=list(zip(sp1, A)), varphi=vals, **common)


def dF_image_matches(spec: TypeSpec) -> bool:
    """dF of the built algebra equals the intended similarity algebra."""
    return dF_span(build_type(spec)) == similarity_type_algebra(intended_similarity_type(spec))


# -- lifting similarity algebras ----------------------------------------------------------------


def _split_parts(n: int, pairs):
    """Data on h = span of (s, A): its sp(1)-intersection, projections and a basis of pr_sp(n)."""
    elems = [element(n, a=s, A=A) for s, A in pairs]
    S = AlgebraSpan(n, elems)
    basis = S.basis()
    # h cap sp(1): combinations with vanishing A-part
    a_rows = [[v[j] for v in (e.flatten() for e in basis)] for j in range(4, 4 + 4 * n * n)]
    inter = []
    for c in nullspace(a_rows, len(basis)) if basis else []:
        acc = zero(n)
        for ci, e in zip(c, basis):
            if ci:
                acc = acc + e.scale(ci)
        if not acc.a.is_zero():
            inter.append(acc.a)
    pr1 = EchelonBasis(4, [s.parts() for s, _ in pairs])
    prn = EchelonBasis(4 * n * n, [element(n, A=A).flatten()[4 : 4 + 4 * n * n] for _, A in pairs])
    # independent subset of the A's, keeping their partners
    chosen = []
    eb = EchelonBasis(4 * n * n)
    for i, (s, A) in enumerate(pairs):
        if eb.add(element(n, A=A).flatten()[4 : 4 + 4 * n * n]):
            chosen.append(i)
    return S, inter, pr1.rank, prn.rank, chosen


def _along(a2: Quaternion, s: Quaternion) -> Scalar:
    """Coefficient of the orthogonal projection of s onto R a2."""
    return (s.x * a2.x + s.y * a2.y + s.z * a2.z) * (a2.norm2()).inverse()


def lift_similarity_type(t: SimilarityType) -> TypeSpec:
    """Parabolic TypeSpec whose algebra maps onto ``t`` under dF."""
    n = t.n
    if t.kind == "varphi":
        dilation = SimAlgebraElement(1, QZERO, zero_matrix(n), zero_vector(n))
        if similarity_type_algebra(t).contains(dilation):
            t = replace(t, kind="R", varphi=None)
    keep = [i for i, (s, A) in enumerate(t.pairs) if not (Quaternion.coerce(s).is_zero() and is_zero_matrix(A))]
    if t.varphi is not None:
        t = replace(t, varphi=[t.varphi[i] for i in keep])
    if t.psi is not None:
        t = replace(t, psi=[t.psi[i] for i in keep])
    pairs = [(Quaternion.coerce(t.pairs[i][0]), t.pairs[i][1]) for i in keep]
    L = t.subspace()
    for s, A in pairs:
        if not _preserves(element(n, a=s, A=A), L):
            raise UnsupportedCase("h does not preserve L")
    S, inter, d1, dn, chosen = _split_parts(n, pairs)
    d = len(inter)
    split = S.dim == d1 + dn
    varphi = LinearMapTable([element(n, a=s, A=A) for s, A in pairs], t.varphi or [0] * len(pairs), "real")
    general = t.shape is not None and sum((t.shape[0] < t.shape[1], t.shape[1] < t.shape[2], t.shape[2] < t.shape[3])) >= 2

    if t.kind == "psi":
        psi = [tuple(x * (-SQRT2) for x in v) for v in (t.psi or [zero_vector(n)] * len(pairs))]
        return TypeSpec(
            "IX", n, m=t.m, k=t.k, shape=t.shape,
            h_generators=[A for _, A in pairs], h_sp1=[s for s, _ in pairs], psi=psi,
            W_basis=list(t.W_basis), U_basis=list(t.U_basis),
        )
    if general:
        kind = "X" if t.kind == "R" else "XI"
        return TypeSpec(
            kind, n, shape=tuple(t.shape), h_generators=[A for _, A in pairs], h_sp1=[s for s, _ in pairs],
            varphi=list(t.varphi) if t.kind == "varphi" else None,
        )

    full = t.m == n
    if not full and any(not (s.w == 0 and s.y == 0 and s.z == 0) for s, _ in pairs):
        raise UnsupportedCase("for m < n the sp(1) parts must lie in iR")
    a2 = inter[0] if d == 1 else QZERO
    if d >= 2 and not split:
        raise UnsupportedCase("h meets sp(1) in dimension 2 without splitting")

    def reduced(i):
        s, A = pairs[i]
        c = _along(a2, s) if not a2.is_zero() else ZERO_S
        return s - a2 * c, A, varphi.values[i] - (varphi(element(n, a=a2)) * c if c else ZERO_S)

    if t.kind == "R":
        if full:
            if d1 == 0:
                return TypeSpec("II", n, m=n, h_generators=[pairs[i][1] for i in chosen])
            if split and d1 >= 2:
                h0 = [Quaternion(0, *v[1:]) for v in EchelonBasis(4, [s.parts() for s, _ in pairs]).basis()]
                return TypeSpec("I", n, m=n, h0_generators=h0, h_generators=_spn_basis(n, pairs))
            if split and d1 == 1:
                return TypeSpec("II", n, m=n, a2=inter[0], h_generators=_spn_basis(n, pairs))
            rows = [reduced(i) for i in chosen]
            return TypeSpec("II", n, m=n, a2=a2, h_generators=[A for _, A, _ in rows], phi=[s for s, _, _ in rows])
        r = n - t.m - t.k
        if d == 1 and split and r == 0:
            return TypeSpec("V", n, m=t.m, k=n - t.m, h_generators=_spn_basis(n, pairs))
        if d == 0:
            return TypeSpec("VI", n, m=t.m, k=t.k, h_generators=[pairs[i][1] for i in chosen],
                            phi=[pairs[i][0].x for i in chosen])
        raise UnsupportedCase("no Type matches this dilation-type algebra")

    # twisted kind
    if full:
        if split and d1 >= 2:
            h0 = [Quaternion(0, *v[1:]) for v in EchelonBasis(4, [s.parts() for s, _ in pairs]).basis()]
            hn = _spn_basis(n, pairs)
            return TypeSpec(
                "III", n, m=n, h0_generators=h0, h_generators=hn,
                varphi_h0=[varphi(element(n, a=c)) for c in h0],
                varphi=[varphi(element(n, A=A)) for A in hn],
            )
        if d <= 1:
            rows = [reduced(i) for i in chosen]
            t_val = varphi(element(n, a=a2)) if not a2.is_zero() else ZERO_S
            return TypeSpec(
                "IV", n, m=n, a2=a2, varphi_t=t_val, h_generators=[A for _, A, _ in rows],
                phi=[s for s, _, _ in rows], varphi=[v for _, _, v in rows],
            )
        raise UnsupportedCase("no Type matches this twisted algebra")
    r = n - t.m - t.k
    if d == 1 and r == 0:
        rows = [reduced(i) for i in chosen]
        return TypeSpec(
            "VII", n, m=t.m, k=n - t.m, varphi_t=varphi(element(n, a=a2)) * (a2.x.inverse()),
            h_generators=[A for _, A, _ in rows], varphi=[v for _, _, v in rows],
        ) if a2.x else _unsupported()
    if d == 0:
        return TypeSpec(
            "VIII", n, m=t.m, k=t.k, h_generators=[pairs[i][1] for i in chosen],
            phi=[pairs[i][0].x for i in chosen], varphi=[varphi.values[i] for i in chosen],
        )
    raise UnsupportedCase("no Type matches this twisted algebra")


def _unsupported():
    raise UnsupportedCase("sp(1) part outside iR")


def _spn_basis(n: int, pairs) -> list[QMatrix]:
    eb = EchelonBasis(4 * n * n)
    out = []
    for _, A in pairs:
        if eb.add(element(n, A=A).flatten()[4 : 4 + 4 * n * n]):
            out.append(A)
    return out


# -- named examples -------------------------------------------------------------------------------


def real_translation_algebra(n: int, with_B: bool = True) -> AlgebraSpan:
    """{(0, 0, X, b) : X in R^n} with or without the ideal B."""
    gens = [element(n, X=tuple(QONE if s == t else QZERO for s in range(n))) for t in range(n)]
    if with_B:
        gens += basis_B(n)
    return AlgebraSpan(n, gens)
