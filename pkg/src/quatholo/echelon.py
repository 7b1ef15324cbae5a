"""Exact row-echelon machinery over Q(sqrt 2).

Vectors are sequences of ``Scalar``.  ``EchelonBasis`` keeps a reduced
row-echelon basis incrementally; two spans are equal iff their canonical
bases are equal.
"""

from __future__ import annotations

from .qcore import ZERO_S, Scalar, as_scalar


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a span."""

    def __init__(self, dim: int, vectors=()):
        self.dim = dim
        self._rows: dict[int, list] = {}  # pivot column -> row (pivot entry == 1)
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def copy(self) -> "EchelonBasis":
        out = EchelonBasis(self.dim)
        out._rows = {p: list(r) for p, r in self._rows.items()}
        return out

    def reduce(self, v) -> list:
        """Residual of v after elimination against the basis."""
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in ambient {self.dim}")
        w = [as_scalar(c) for c in v]
        for p, row in self._rows.items():
            c = w[p]
            if c:
                for j, rj in enumerate(row):
                    if rj:
                        w[j] = w[j] - c * rj
        return w

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def add(self, v) -> bool:
        """Add v to the span; True when the rank grew."""
        w = self.reduce(v)
        piv = next((j for j, c in enumerate(w) if c), None)
        if piv is None:
            return False
        inv = w[piv].inverse()
        w = [c * inv if c else ZERO_S for c in w]
        for p, row in self._rows.items():
            c = row[piv]
            if c:
                self._rows[p] = [rj - c * wj if wj else rj for rj, wj in zip(row, w)]
        self._rows[piv] = w
        return True

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def basis(self) -> list[tuple]:
        """Canonical basis: rows of the RREF sorted by pivot."""
        return [tuple(self._rows[p]) for p in sorted(self._rows)]

    def coordinates(self, v):
        """Coefficients of v on ``basis()``, or None if v is outside the span."""
        if not self.contains(v):
            return None
        return [as_scalar(v[p]) for p in sorted(self._rows)]

    def key(self) -> tuple:
        return tuple(self.basis())

    def __eq__(self, other):
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.dim == other.dim and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def rref(rows, ncols: int | None = None) -> list[tuple]:
    rows = list(rows)
    if ncols is None:
        if not rows:
            return []
        ncols = len(rows[0])
    return EchelonBasis(ncols, rows).basis()


def rank(rows, ncols: int | None = None) -> int:
    return len(rref(rows, ncols))


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of {x : row . x = 0 for every row}."""
    eb = EchelonBasis(ncols, rows)
    piv = set(eb.pivots)
    basis = eb.basis()
    pivots = eb.pivots
    out = []
    for free in range(ncols):
        if free in piv:
            continue
        x = [ZERO_S] * ncols
        x[free] = Scalar(1)
        for p, row in zip(pivots, basis):
            if row[free]:
                x[p] = -row[free]
        out.append(tuple(x))
    return out


def solve_combination(vectors, target):
    """Coefficients c with sum c_i vectors_i == target, or None.

    Vectors may be linearly dependent; one particular solution is returned.
    """
    vectors = list(vectors)
    m = len(vectors)
    if m == 0:
        return [] if not any(as_scalar(t) for t in target) else None
    dim = len(target)
    # augmented system: columns are the vectors, last column the target
    rows = [[as_scalar(vectors[i][r]) for i in range(m)] + [as_scalar(target[r])] for r in range(dim)]
    eb = EchelonBasis(m + 1, rows)
    if m in eb.pivots:
        return None
    coeffs = [ZERO_S] * m
    for p, row in zip(eb.pivots, eb.basis()):
        coeffs[p] = row[m]
    return coeffs


def dependencies(vectors) -> list[tuple]:
    """Basis of linear relations {c : sum c_i v_i = 0}."""
    vectors = list(vectors)
    if not vectors:
        return []
    dim = len(vectors[0])
    rows = [[as_scalar(v[r]) for v in vectors] for r in range(dim)]
    return nullspace(rows, len(vectors))


def mat_vec(rows, v) -> list:
    """Dense or sparse real matrix times vector.

    ``rows`` is a list of rows; each row is either a dense sequence or a
    dict {column: value}.
    """
    out = []
    for row in rows:
        acc = ZERO_S
        if isinstance(row, dict):
            for j, a in row.items():
                c = v[j]
                if c:
                    acc = acc + a * c
        else:
            for a, c in zip(row, v):
                if a and c:
                    acc = acc + a * c
        out.append(acc)
    return out
