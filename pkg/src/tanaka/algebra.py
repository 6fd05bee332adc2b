"""Finite-dimensional Lie algebras given by rational structure constants.

Only the brackets ``[e_i, e_j]`` with ``i < j`` are stored; antisymmetry is
synthesized.  A :class:`GradedLieAlgebra` additionally carries a negative
integer degree per basis element.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .errors import (
    IncompatibleBrackets,
    InvalidAlgebra,
    NotBracketGenerating,
    NotGradedSubalgebra,
)
from .linalg import ZERO, Subspace


def _clean_brackets(dim, brackets) -> dict:
    out = {}
    for key, terms in brackets.items():
        i, j = key
        if not (0 <= i < dim and 0 <= j < dim):
            raise InvalidAlgebra(f"bracket index ({i}, {j}) out of range for dim {dim}")
        if i == j:
            raise InvalidAlgebra(f"bracket [e{i + 1}, e{i + 1}] must not be given")
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = enumerate(terms)
        clean = {}
        for k, c in items:
            if not 0 <= k < dim:
                raise InvalidAlgebra(f"bracket target index {k} out of range")
            c = la.as_rational(c)
            if c:
                clean[k] = clean.get(k, ZERO) + c
        clean = {k: c for k, c in sorted(clean.items()) if c}
        if i > j:
            i, j = j, i
            clean = {k: -c for k, c in clean.items()}
        if (i, j) in out:
            raise InvalidAlgebra(f"bracket ({i + 1}, {j + 1}) given twice")
        if clean:
            out[(i, j)] = clean
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra on the basis ``e_0 .. e_{dim-1}`` (0-based internally).

    ``brackets`` maps ``(i, j)`` with ``i < j`` to ``{k: coefficient}``.
    """

    dim: int
    brackets: Mapping = field(default_factory=dict)
    names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "brackets", _clean_brackets(self.dim, dict(self.brackets)))
        names = tuple(self.names) if self.names else tuple(f"e{i + 1}" for i in range(self.dim))
        if len(names) != self.dim:
            raise InvalidAlgebra("basis_names has the wrong length")
        object.__setattr__(self, "names", names)

    # -- structure ---------------------------------------------------------

    def basis_bracket(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    @cached_property
    def _table(self) -> list:
        t = [[None] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                t[i][j] = self.basis_bracket(i, j)
        return t

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        out = [ZERO] * self.dim
        table = self._table
        for i, a in enumerate(u):
            if not a:
                continue
            row = table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in row[j].items():
                    out[k] += a * b * c
        return tuple(out)

    def ad(self, u: Sequence) -> la.Matrix:
        """Matrix of ``ad u`` (column ``j`` is ``[u, e_j]``)."""
        cols = [self.bracket(u, la.unit_vector(self.dim, j)) for j in range(self.dim)]
        return la.Matrix.from_rows([[c[i] for c in cols] for i in range(self.dim)], self.dim)

    def unit(self, i: int) -> tuple:
        return la.unit_vector(self.dim, i)

    def span(self, vectors: Iterable[Sequence]) -> Subspace:
        return Subspace.span([la.vec(v) for v in vectors], self.dim)

    def full(self) -> Subspace:
        return Subspace.full(self.dim)

    def bracket_space(self, a: Subspace, b: Subspace) -> Subspace:
        """``[a, b]`` as a subspace."""
        return Subspace.span(
            [self.bracket(x, y) for x in a.basis for y in b.basis], self.dim
        )

    def is_abelian(self) -> bool:
        return not self.brackets

    def is_subalgebra(self, s: Subspace) -> bool:
        return self.bracket_space(s, s) <= s

    def generated_subalgebra(self, s: Subspace) -> Subspace:
        cur = s
        while True:
            nxt = cur + self.bracket_space(cur, cur)
            if nxt == cur:
                return cur
            cur = nxt

    def bracket_preimage(self, source: Subspace, against: Subspace, target: Subspace) -> Subspace:
        """``{x in source : [x, b] in target for all b in against}``."""
        n = self.dim
        if source.is_zero():
            return source
        ann = target.annihilator()
        rows = []
        for b in against.basis:
            images = [self.bracket(x, b) for x in source.basis]
            for phi in ann:
                r = {i: la.dot(phi, img) for i, img in enumerate(images)}
                r = {i: v for i, v in r.items() if v}
                if r:
                    rows.append(r)
        coeffs = la.null_space(rows, source.dim)
        return Subspace.span([la.combine(c, source.basis, n) for c in coeffs], n)

    def jacobi_residual(self, i: int, j: int, k: int) -> tuple:
        x, y, z = self.unit(i), self.unit(j), self.unit(k)
        br = self.bracket
        return la.add(
            la.add(br(br(x, y), z), br(br(y, z), x)),
            br(br(z, x), y),
        )

    def jacobi_violations(self) -> list:
        out = []
        for i, j, k in itertools.combinations(range(self.dim), 3):
            r = self.jacobi_residual(i, j, k)
            if any(r):
                out.append(((i, j, k), r))
        return out

    # -- identity ----------------------------------------------------------

    def to_document(self) -> dict:
        doc = {"dim": self.dim}
        degrees = getattr(self, "degrees", None)
        if degrees is not None:
            doc["degrees"] = list(degrees)
        doc["basis_names"] = list(self.names)
        doc["brackets"] = [
            {
                "i": i + 1,
                "j": j + 1,
                "terms": [
                    {"k": k + 1, "num": c.numerator, "den": c.denominator}
                    for k, c in terms.items()
                ],
            }
            for (i, j), terms in self.brackets.items()
        ]
        return doc

    def content_hash(self) -> str:
        blob = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.to_document() == other.to_document()

    def __hash__(self):
        return hash(self.content_hash())

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, brackets={len(self.brackets)})"


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra(LieAlgebra):
    """Negatively graded Lie algebra ``m = m_{-mu} + ... + m_{-1}``."""

    degrees: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        degrees = tuple(int(d) for d in self.degrees)
        if len(degrees) != self.dim:
            raise InvalidAlgebra(f"expected {self.dim} degrees, got {len(degrees)}")
        if any(d >= 0 for d in degrees):
            raise InvalidAlgebra("degrees must be negative integers")
        object.__setattr__(self, "degrees", degrees)

    @property
    def depth(self) -> int:
        return -min(self.degrees) if self.dim else 0

    @cached_property
    def indices_by_degree(self) -> dict:
        out = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return {d: tuple(v) for d, v in sorted(out.items(), reverse=True)}

    def component(self, d: int) -> Subspace:
        return Subspace.coordinate(self.indices_by_degree.get(d, ()), self.dim)

    def dims_by_degree(self) -> dict:
        return {d: len(v) for d, v in self.indices_by_degree.items()}

    def project(self, v: Sequence, d: int) -> tuple:
        return tuple(a if self.degrees[i] == d else ZERO for i, a in enumerate(v))

    def is_graded(self, s: Subspace) -> bool:
        for b in s.basis:
            for d in set(self.degrees):
                p = self.project(b, d)
                if any(p) and not s.contains(p):
                    return False
        return True

    def graded_part(self, s: Subspace, d: int) -> Subspace:
        return s & self.component(d)


# ---------------------------------------------------------------------------
# subspaces and filtrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedSubspace:
    algebra: LieAlgebra
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.algebra.dim:
            raise la.AmbientMismatch("subspace ambient differs from algebra dim")

    @classmethod
    def spanned(cls, algebra: LieAlgebra, vectors: Iterable[Sequence]) -> "GradedSubspace":
        return cls(algebra, algebra.span(vectors))

    @classmethod
    def of_indices(cls, algebra: LieAlgebra, indices: Iterable[int]) -> "GradedSubspace":
        return cls(algebra, Subspace.coordinate(indices, algebra.dim))

    @property
    def graded(self) -> bool:
        return isinstance(self.algebra, GradedLieAlgebra) and self.algebra.is_graded(self.space)

    @property
    def dim(self) -> int:
        return self.space.dim

    def part(self, d: int) -> Subspace:
        return self.algebra.graded_part(self.space, d)

    def dims_by_degree(self) -> dict:
        alg = self.algebra
        return {d: self.part(d).dim for d in alg.indices_by_degree if self.part(d).dim}

    def is_subalgebra(self) -> bool:
        return self.algebra.is_subalgebra(self.space)


@dataclass(frozen=True)
class Filtration:
    """Nested subspaces of an algebra.

    ``terms[0]`` is the first term of the filtration: ``T^{-1}`` for an
    increasing filtration, ``E^0`` (or whatever the caller's base index is)
    for a decreasing one.
    """

    algebra: LieAlgebra
    direction: str
    terms: tuple

    def __post_init__(self):
        if self.direction not in ("increasing", "decreasing"):
            raise ValueError("direction must be 'increasing' or 'decreasing'")
        terms = tuple(
            t.space if isinstance(t, GradedSubspace) else t for t in self.terms
        )
        for t in terms:
            if t.ambient_dim != self.algebra.dim:
                raise la.AmbientMismatch("filtration term ambient differs from algebra dim")
        for a, b in zip(terms, terms[1:]):
            ok = a <= b if self.direction == "increasing" else b <= a
            if not ok:
                raise ValueError("filtration terms are not nested")
        object.__setattr__(self, "terms", terms)

    @property
    def dims(self) -> tuple:
        return tuple(t.dim for t in self.terms)

    def level(self, i: int) -> Subspace:
        """``T^{-i}`` for ``i >= 1`` (increasing filtrations only); saturates."""
        if i <= 0:
            return Subspace.zero(self.algebra.dim)
        return self.terms[min(i, len(self.terms)) - 1]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    grading_violations: list = field(default_factory=list)  # ((i, j), target k, expected degree)
    jacobi_violations: list = field(default_factory=list)   # ((i, j, k), residual)

    @property
    def ok(self) -> bool:
        return not self.grading_violations and not self.jacobi_violations

    def to_dict(self, names=None) -> dict:
        def nm(i):
            return names[i] if names else i + 1

        return {
            "valid": self.ok,
            "grading_violations": [
                {"pair": [nm(i), nm(j)], "target": nm(k), "target_degree": td, "expected_degree": ed}
                for (i, j), k, td, ed in self.grading_violations
            ],
            "jacobi_violations": [
                {"triple": [nm(a) for a in t], "residual": [str(c) for c in r]}
                for t, r in self.jacobi_violations
            ],
        }


def validate(g: LieAlgebra) -> ValidationReport:
    """Collect grading and Jacobi violations (grading is checked first)."""
    rep = ValidationReport()
    degrees = getattr(g, "degrees", None)
    if degrees is not None:
        for (i, j), terms in g.brackets.items():
            for k in terms:
                if degrees[k] != degrees[i] + degrees[j]:
                    rep.grading_violations.append(
                        ((i, j), k, degrees[k], degrees[i] + degrees[j])
                    )
    rep.jacobi_violations = g.jacobi_violations()
    return rep


def require_valid(g: LieAlgebra) -> None:
    rep = validate(g)
    if not rep.ok:
        raise InvalidAlgebra("algebra failed validation", rep)


def derived_and_quotient(g: GradedLieAlgebra):
    """Return ``(h, H(m), nu)`` with ``h = [m, m]`` and ``H(m) = m / h``.

    The quotient is realized on the standard basis vectors complementary to
    the RREF pivots of ``h``; they are homogeneous, so the quotient keeps the
    inherited degrees.  ``nu`` is the largest ``i`` with ``h_{-i} != 0``
    (0 when ``h = 0``).
    """
    h = g.bracket_space(g.full(), g.full())
    comp = quotient_complement(g, h)
    quotient = GradedLieAlgebra(
        dim=len(comp),
        brackets={},
        names=tuple(g.names[i] for i in comp),
        degrees=tuple(g.degrees[i] for i in comp),
    )
    nu = max((-g.degrees[p] for p in h.pivots), default=0)
    return GradedSubspace(g, h), quotient, nu


def quotient_complement(g: GradedLieAlgebra, h: Subspace) -> list:
    """Basis indices spanning a homogeneous complement of a graded subspace.

    Works degree by degree so the complement is graded even when the RREF of
    ``h`` mixes degrees in its pivot choice.
    """
    comp = []
    for d, idx in g.indices_by_degree.items():
        part = g.graded_part(h, d)
        local = Subspace.span([[b[i] for i in idx] for b in part.basis], len(idx))
        comp.extend(idx[i] for i in local.complement_indices())
    return sorted(comp)


def centralizer(g: LieAlgebra, s) -> GradedSubspace:
    space = s.space if isinstance(s, GradedSubspace) else s
    return GradedSubspace(g, g.bracket_preimage(g.full(), space, Subspace.zero(g.dim)))


def generation_depth(g: GradedLieAlgebra) -> int:
    """Smallest ``nu`` such that ``m_{-1} + ... + m_{-nu}`` generates ``m``."""
    if g.dim == 0:
        return 1
    full = g.full()
    for nu in range(1, g.depth + 1):
        gens = Subspace.coordinate(
            [i for i, d in enumerate(g.degrees) if d >= -nu], g.dim
        )
        if g.generated_subalgebra(gens) == full:
            return nu
    raise AssertionError("a negatively graded algebra is generated by all its degrees")


def associated_graded(g: LieAlgebra, filtration: Filtration, subspaces=()):
    """Graded symbol of an increasing exhaustive filtration of ``g``.

    Basis vectors are chosen level by level: the RREF basis of ``T^{-i}`` is
    reduced modulo ``T^{-i+1}`` and the surviving vectors get contiguous
    indices.  Returns ``(symbol, adapted_basis, images)`` where ``images[l]``
    is the graded image of ``subspaces[l]`` as a GradedSubspace of the symbol.
    """
    n = g.dim
    terms = filtration.terms
    if not terms or not terms[-1].is_full():
        raise NotBracketGenerating("filtration does not exhaust the algebra")
    basis, levels = [], []
    prev = Subspace.zero(n)
    for lvl, t in enumerate(terms, start=1):
        new = _complement_vectors(prev, t)
        basis.extend(new)
        levels.extend([lvl] * len(new))
        prev = t
    level_index = {}
    for idx, lvl in enumerate(levels):
        level_index.setdefault(lvl, []).append(idx)

    def coords(v):
        return la.solve_in_basis(basis, v)

    brackets = {}
    for a, b in itertools.combinations(range(n), 2):
        la_, lb = levels[a], levels[b]
        c = coords(g.bracket(basis[a], basis[b]))
        target = la_ + lb
        terms_ab = {}
        for k, ck in enumerate(c):
            if not ck:
                continue
            if levels[k] > target:
                raise IncompatibleBrackets(
                    f"[T^-{la_}, T^-{lb}] leaves T^-{target}"
                )
            if levels[k] == target:
                terms_ab[k] = ck
        if terms_ab:
            brackets[(a, b)] = terms_ab
    sym = GradedLieAlgebra(dim=n, brackets=brackets, degrees=tuple(-l for l in levels))

    images = []
    for s in subspaces:
        vecs = []
        for lvl, t in enumerate(terms, start=1):
            part = s & t
            for v in part.basis:
                c = coords(v)
                if any(c[k] for k in range(n) if levels[k] > lvl):
                    raise AssertionError("vector escapes its filtration level")
                vecs.append(tuple(c[k] if levels[k] == lvl else ZERO for k in range(n)))
        images.append(GradedSubspace(sym, sym.span(vecs)))
    return sym, basis, images


def _complement_vectors(lower: Subspace, upper: Subspace) -> list:
    """Basis vectors of ``upper`` completing a basis of ``lower``."""
    red = la.RowReducer(upper.ambient_dim)
    for b in lower.basis:
        red.add_row(la._sparse(b))
    out = []
    for b in upper.basis:
        if red.add_row(la._sparse(b)):
            out.append(b)
    return out


def weak_derived_flag(g: LieAlgebra, d: Subspace):
    """``T^{-1} = d``, ``T^{-i-1} = T^{-i} + [d, T^{-i}]`` until it stabilizes.

    Returns the increasing filtration and its graded symbol.
    """
    terms = [d]
    while True:
        nxt = terms[-1] + g.bracket_space(d, terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    if not terms[-1].is_full():
        raise NotBracketGenerating(
            f"weak derived flag stabilizes at dimension {terms[-1].dim} < {g.dim}"
        )
    filt = Filtration(g, "increasing", tuple(terms))
    sym, _, _ = associated_graded(g, filt)
    return filt, sym


def check_filtration_brackets(g: LieAlgebra, terms: Sequence[Subspace], limit: int | None = None) -> list:
    """Pairs ``(i, j)`` (1-based levels) with ``[T^{-i}, T^{-j}]`` not in ``T^{-i-j}``.

    Only pairs with ``i + j <= limit`` are checked when a limit is given;
    levels beyond the last term saturate.
    """
    nu = len(terms)
    limit = nu if limit is None else limit
    bad = []
    for i in range(1, nu + 1):
        for j in range(i, nu + 1):
            if i + j > limit:
                continue
            target = terms[min(i + j, nu) - 1]
            if not g.bracket_space(terms[i - 1], terms[j - 1]) <= target:
                bad.append((i, j))
    return bad


def extend_filtration(g: LieAlgebra, partial) -> Filtration:
    """Extend a filtration ``F^{-1} <= ... <= F^{-nu} = D`` of a bracket-generating D.

    ``T^{-i} = F^{-i}`` for ``i <= nu`` and
    ``T^{-i-1} = T^{-i} + sum_{r+s=i+1} [T^{-r}, T^{-s}]`` afterwards.
    """
    terms = list(partial.terms if isinstance(partial, Filtration) else partial)
    terms = [t.space if isinstance(t, GradedSubspace) else t for t in terms]
    nu = len(terms)
    if nu == 0:
        raise ValueError("empty filtration")
    bad = check_filtration_brackets(g, terms, limit=nu)
    if bad:
        raise IncompatibleBrackets(f"[F^-{bad[0][0]}, F^-{bad[0][1]}] not in F^-{sum(bad[0])}")
    while True:
        i = len(terms)
        nxt = terms[-1]
        for r in range(1, i + 1):
            s = i + 1 - r
            if s < r:
                break
            nxt = nxt + g.bracket_space(terms[r - 1], terms[s - 1])
        # a repeated term is final only once it is bracket-closed; otherwise
        # a later pair (r, s) can still enlarge it
        if nxt == terms[-1] and g.is_subalgebra(nxt):
            break
        terms.append(nxt)
    if not terms[-1].is_full():
        raise NotBracketGenerating(
            f"filtration stabilizes at dimension {terms[-1].dim} < {g.dim}"
        )
    bad = check_filtration_brackets(g, terms)
    if bad:
        raise IncompatibleBrackets(f"[T^-{bad[0][0]}, T^-{bad[0][1]}] not in T^-{sum(bad[0])}")
    return Filtration(g, "increasing", tuple(terms))


def require_graded_subalgebra(s: GradedSubspace) -> None:
    if not s.graded:
        raise NotGradedSubalgebra("subspace is not spanned by homogeneous vectors")
    if not s.is_subalgebra():
        raise NotGradedSubalgebra("subspace is not closed under the bracket")
