"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Row reduction
is done on sparse rows (``{column: value}``) because the Leibniz systems
assembled by the prolongation engine have only a handful of non-zeros per
row; the public surface is dense tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AmbientMismatch

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean value {x!r}")
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def combine(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> Vector:
    """Return ``sum(c * v)``; ``n`` is the length used when the list is empty."""
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] += c * a
    return tuple(out)


# ---------------------------------------------------------------------------
# sparse row reduction
# ---------------------------------------------------------------------------


class RowReducer:
    """Incremental reduced row echelon form over sparse rows.

    Rows are fed one at a time with :meth:`add_row`; the stored pivot rows
    are kept fully reduced against each other, so at any point they are the
    RREF of everything added so far.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        hits = [c for c in row if c in pivots]
        while hits:
            for c in hits:
                f = row.get(c)
                if not f:
                    continue
                for cc, vv in pivots[c].items():
                    nv = row.get(cc, ZERO) - f * vv
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            hits = [c for c in row if c in pivots]
        return row

    def add_row(self, row: dict[int, Fraction]) -> bool:
        """Insert a row; returns True when it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = ONE / row[p]
        if inv != ONE:
            row = {c: v * inv for c, v in row.items()}
        for q, prow in self.pivots.items():
            f = prow.get(p)
            if f:
                for cc, vv in row.items():
                    nv = prow.get(cc, ZERO) - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        self.pivots[p] = row
        return True

    def rref_rows(self) -> list[Vector]:
        out = []
        for p in sorted(self.pivots):
            r = [ZERO] * self.ncols
            for c, v in self.pivots[p].items():
                r[c] = v
            out.append(tuple(r))
        return out

    def kernel_vectors(self) -> list[Vector]:
        """Basis of the right null space, one vector per free column."""
        free = [c for c in range(self.ncols) if c not in self.pivots]
        out = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for p, prow in self.pivots.items():
                a = prow.get(f)
                if a:
                    v[p] = -a
            out.append(tuple(v))
        return out


def _sparse(row: Sequence) -> dict[int, Fraction]:
    return {i: as_rational(a) for i, a in enumerate(row) if a}


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form; returns (non-zero rows, pivot columns)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red = RowReducer(ncols)
    for r in rows:
        red.add_row(_sparse(r))
    return red.rref_rows(), sorted(red.pivots)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def null_space(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[Vector]:
    """Kernel of a sparse system given as ``{col: coeff}`` rows."""
    red = RowReducer(ncols)
    for r in rows:
        red.add_row(r)
    return red.kernel_vectors()


# ---------------------------------------------------------------------------
# Matrix / Subspace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major, length rows * cols

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [vec(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(a for r in rows for a in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([unit_vector(n, i) for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def flat(self) -> Vector:
        return self.entries

    def apply(self, v: Sequence) -> Vector:
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise AmbientMismatch("inner dimensions differ")
        cols = [other.col(j) for j in range(other.cols)]
        return Matrix.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.rows)], other.cols
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols, add(self.entries, other.entries))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scaled(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, scale(as_rational(c), self.entries))

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def rank(self) -> int:
        return rank(self.to_rows()) if self.rows else 0

    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``Q^ambient_dim`` stored by its RREF basis.

    Construct with :meth:`span`; the direct constructor trusts its input.
    Equality is structural because the basis is canonical.
    """

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        red = RowReducer(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in ambient {ambient_dim}")
            red.add_row(_sparse(v))
        return cls(ambient_dim, tuple(red.rref_rows()))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def coordinate(cls, indices: Iterable[int], n: int) -> "Subspace":
        return cls.span([unit_vector(n, i) for i in sorted(set(indices))], n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, a in enumerate(b) if a) for b in self.basis]

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def contains(self, v: Sequence) -> bool:
        return contains(self, v)

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of ``v`` in the stored basis; raises if ``v`` is outside."""
        coeffs = tuple(as_rational(v[p]) for p in self.pivots)
        if combine(coeffs, self.basis, self.ambient_dim) != tuple(as_rational(a) for a in v):
            raise ValueError("vector is not in the subspace")
        return coeffs

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return sum_and_intersect(self, other)[1]

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def annihilator(self) -> list[Vector]:
        """Functionals (as vectors) vanishing on the subspace."""
        rows = [_sparse(b) for b in self.basis]
        return null_space(rows, self.ambient_dim)

    def complement_indices(self) -> list[int]:
        """Standard basis indices completing the basis (the non-pivot columns)."""
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim


def kernel(m: Matrix) -> Subspace:
    """Right null space of ``m`` as a canonical subspace."""
    vs = null_space((_sparse(r) for r in m.to_rows()), m.cols)
    return Subspace.span(vs, m.cols)


def sum_and_intersect(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient {a.ambient_dim} vs {b.ambient_dim}")
    n = a.ambient_dim
    total = Subspace.span(a.basis + b.basis, n)
    if not a.basis or not b.basis:
        return total, Subspace.zero(n)
    # x = sum c_i a_i lies in b  <=>  phi(x) = 0 for every phi in ann(b)
    ann = b.annihilator()
    rows = []
    for phi in ann:
        rows.append({i: dot(phi, ai) for i, ai in enumerate(a.basis) if dot(phi, ai)})
    coeffs = null_space(rows, a.dim)
    return total, Subspace.span([combine(c, a.basis, n) for c in coeffs], n)


def contains(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise AmbientMismatch(f"vector of length {len(v)} in ambient {s.ambient_dim}")
    v = tuple(as_rational(a) for a in v)
    coeffs = [v[p] for p in s.pivots]
    return combine(coeffs, s.basis, s.ambient_dim) == v


def solve_in_basis(basis: Sequence[Sequence], v: Sequence) -> Vector:
    """Coordinates of ``v`` with respect to a basis (columns need not be RREF)."""
    k = len(basis)
    n = len(v)
    # augmented system: sum c_i basis_i = v
    red = RowReducer(k + 1)
    for row in range(n):
        r = {i: as_rational(b[row]) for i, b in enumerate(basis) if b[row]}
        if v[row]:
            r[k] = -as_rational(v[row])
        red.add_row(r)
    if k in red.pivots:
        raise ValueError("vector is not in the span of the basis")
    out = [ZERO] * k
    for p, prow in red.pivots.items():
        out[p] = -prow.get(k, ZERO)
    sol = tuple(out)
    if combine(sol, basis, n) != tuple(as_rational(a) for a in v):
        raise ValueError("basis vectors are not independent")
    return sol
