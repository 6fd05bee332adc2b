"""Spencer-Sternberg prolongation of ``A <= Hom(V, W)`` and finite-type tests.

``A_k`` lives in ``S^{k+1}(V*) (x) W``.  An element is stored by its values
on basis tuples: the coordinate ``(alpha, w)`` holds the ``w``-component of
``T(v_{alpha_0}, ..., v_{alpha_k})`` for a weakly increasing multi-index
``alpha``.  Coordinates are ordered by ``alpha`` (lexicographic, as produced
by ``itertools.combinations_with_replacement``) and then by ``w``.

Complex rank-one elements are searched exactly: along a rational pencil
``P + t Q`` the 2x2 minors are polynomials in ``t``; any irreducible factor
``p`` of their gcd yields an element over the number field ``Q[t]/(p)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import sympy

from . import linalg as la
from .errors import InternalInconsistency
from .linalg import ZERO, Matrix, Subspace

DEFAULT_MAX_K = 10

TERMINATED = "Terminated"
CAPPED = "Capped"


@dataclass(frozen=True)
class HomSubspace:
    """Subspace of ``Hom(V, W)`` spanned by ``dimW x dimV`` matrices (canonical basis)."""

    dimV: int
    dimW: int
    basis: tuple = ()

    @classmethod
    def span(cls, mats: Sequence[Matrix], dimV: int, dimW: int) -> "HomSubspace":
        for mat in mats:
            if (mat.rows, mat.cols) != (dimW, dimV):
                raise la.AmbientMismatch(f"expected {dimW}x{dimV}, got {mat.rows}x{mat.cols}")
        s = Subspace.span([mat.entries for mat in mats], dimV * dimW)
        return cls(dimV, dimW, tuple(Matrix(dimW, dimV, b) for b in s.basis))

    @classmethod
    def full(cls, dimV: int, dimW: int | None = None) -> "HomSubspace":
        dimW = dimV if dimW is None else dimW
        mats = []
        for w in range(dimW):
            for v in range(dimV):
                e = [ZERO] * (dimV * dimW)
                e[w * dimV + v] = la.ONE
                mats.append(Matrix(dimW, dimV, tuple(e)))
        return cls.span(mats, dimV, dimW)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def flat(self) -> Subspace:
        return Subspace(self.dimV * self.dimW, tuple(m.entries for m in self.basis))

    def contains(self, mat: Matrix) -> bool:
        return self.flat().contains(mat.entries)


def multi_indices(dimV: int, order: int) -> list:
    return list(itertools.combinations_with_replacement(range(dimV), order))


@dataclass
class SpencerResult:
    dimV: int
    dimW: int
    components: list          # Subspace per k, coordinates as described in the module docstring
    status: str
    stop_k: int
    max_k: int

    @property
    def dims(self) -> tuple:
        return tuple(c.dim for c in self.components)

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED

    def total_through(self, k: int) -> int:
        """``sum_{j <= k} dim A_j`` (zero beyond a termination)."""
        return sum(c.dim for c in self.components[: k + 1])

    def value(self, k: int, vector: Sequence, args: Sequence[int]) -> tuple:
        """``T(v_{args...})`` as a W-vector for an element of ``A_k``."""
        alpha = tuple(sorted(args))
        index = multi_indices(self.dimV, k + 1).index(alpha)
        return tuple(vector[index * self.dimW:(index + 1) * self.dimW])


def _order0(a: HomSubspace) -> Subspace:
    # multi-index (v,) with w fastest: position v * dimW + w
    vecs = []
    for mat in a.basis:
        v = [ZERO] * (a.dimV * a.dimW)
        for w in range(a.dimW):
            for j in range(a.dimV):
                v[j * a.dimW + w] = mat[w, j]
        vecs.append(v)
    return Subspace.span(vecs, a.dimV * a.dimW)


def _next(prev: Subspace, dimV: int, dimW: int, k: int) -> Subspace:
    """``A_k`` from ``A_{k-1}``.

    Writes ``T = sum_j v_j^* (x) S_j`` with ``S_j`` in ``A_{k-1}`` and imposes
    total symmetry: the slices of ``T`` through different entries of the
    same multi-index must agree.
    """
    B = prev.basis
    nb = len(B)
    lower = {alpha: i for i, alpha in enumerate(multi_indices(dimV, k))}
    upper = multi_indices(dimV, k + 1)

    def var(j, b):
        return j * nb + b

    def entry(b, beta, w):
        return B[b][lower[beta] * dimW + w]

    rows = []
    for alpha in upper:
        distinct = sorted(set(alpha))
        j0 = distinct[0]
        beta0 = _remove(alpha, j0)
        for j in distinct[1:]:
            beta = _remove(alpha, j)
            for w in range(dimW):
                row = {}
                for b in range(nb):
                    c0 = entry(b, beta0, w)
                    if c0:
                        row[var(j0, b)] = c0
                    c1 = entry(b, beta, w)
                    if c1:
                        row[var(j, b)] = row.get(var(j, b), ZERO) - c1
                row = {c: v for c, v in row.items() if v}
                if row:
                    rows.append(row)
    kernel = la.null_space(rows, dimV * nb)
    vecs = []
    for c in kernel:
        t = [ZERO] * (len(upper) * dimW)
        for ai, alpha in enumerate(upper):
            j0 = alpha[0]
            beta0 = _remove(alpha, j0)
            for w in range(dimW):
                t[ai * dimW + w] = sum(
                    (c[var(j0, b)] * entry(b, beta0, w) for b in range(nb) if c[var(j0, b)]),
                    ZERO,
                )
        vecs.append(t)
    return Subspace.span(vecs, len(upper) * dimW)


def _remove(alpha, j):
    lst = list(alpha)
    lst.remove(j)
    return tuple(lst)


def spencer_prolong(a: HomSubspace, max_k: int = DEFAULT_MAX_K) -> SpencerResult:
    """``A_0 = A``, ``A_k = (S^{k+1}V* (x) W) & (V* (x) A_{k-1})`` until zero or ``max_k``."""
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    comps = [_order0(a)]
    k = 0
    status = TERMINATED if comps[0].is_zero() else CAPPED
    while status != TERMINATED and k < max_k:
        k += 1
        comps.append(_next(comps[-1], a.dimV, a.dimW, k))
        if comps[-1].is_zero():
            status = TERMINATED
    return SpencerResult(a.dimV, a.dimW, comps, status, k, max_k)


def full_gl_dim(dimV: int, k: int) -> int:
    """``dim A_k`` for ``A = gl(V)``: ``dimV * C(dimV + k, k + 1)``."""
    return dimV * comb(dimV + k, k + 1)


# ---------------------------------------------------------------------------
# rank-one certificates
# ---------------------------------------------------------------------------

_t = sympy.Symbol("t")


def _poly(coeffs) -> sympy.Poly:
    """Polynomial from ascending rational coefficients."""
    return sympy.Poly(
        list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])) or [0],
        _t,
        domain="QQ",
    )


def _coeffs(p: sympy.Poly) -> tuple:
    out = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    while len(out) > 1 and not out[-1]:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class RankOneWitness:
    """A rank-one element of ``A (x) K`` with ``K = Q[t]/(modulus)``.

    Field elements are ascending coefficient tuples in ``t``.  A rational
    witness has ``modulus = (0, 1)`` (that is ``t = 0``).
    """

    modulus: tuple
    coefficients: tuple   # one field element per basis matrix of A
    xi: tuple             # dimV field elements
    w: tuple              # dimW field elements
    source: str

    def to_dict(self) -> dict:
        def fe(c):
            return [str(a) for a in c]

        return {
            "modulus": fe(self.modulus),
            "coefficients": [fe(c) for c in self.coefficients],
            "xi": [fe(c) for c in self.xi],
            "w": [fe(c) for c in self.w],
            "source": self.source,
        }


def _element(a: HomSubspace, coeff_polys):
    """Entries of ``sum c_b B_b`` as sympy polys."""
    out = [[sympy.Poly(0, _t, domain="QQ") for _ in range(a.dimV)] for _ in range(a.dimW)]
    for c, mat in zip(coeff_polys, a.basis):
        for i in range(a.dimW):
            for j in range(a.dimV):
                if mat[i, j]:
                    out[i][j] = out[i][j] + c * sympy.Rational(mat[i, j].numerator, mat[i, j].denominator)
    return out


def verify_rank_one(witness: RankOneWitness, a: HomSubspace) -> bool:
    """Exact check that ``w (x) xi`` equals the element and is non-zero."""
    p = _poly(witness.modulus)
    if p.degree() < 1:
        return False
    el = _element(a, [_poly(c) for c in witness.coefficients])
    xi = [_poly(c) for c in witness.xi]
    w = [_poly(c) for c in witness.w]
    nonzero = False
    for i in range(a.dimW):
        for j in range(a.dimV):
            e = el[i][j].rem(p)
            if not e.is_zero:
                nonzero = True
            if not (e - (w[i] * xi[j]).rem(p)).rem(p).is_zero:
                return False
    if not nonzero:
        return False
    for i, k in itertools.combinations(range(a.dimW), 2):
        for j, l in itertools.combinations(range(a.dimV), 2):
            minor = el[i][j] * el[k][l] - el[i][l] * el[k][j]
            if not minor.rem(p).is_zero:
                return False
    return True


def _witness_for(a, coeff_polys, p, source):
    el = _element(a, coeff_polys)
    red = [[e.rem(p) for e in row] for row in el]
    pivot = next(
        ((i, j) for i in range(a.dimW) for j in range(a.dimV) if not red[i][j].is_zero), None
    )
    if pivot is None:
        return None
    i0, j0 = pivot
    inv = sympy.invert(red[i0][j0].as_expr(), p.as_expr(), _t)
    inv = sympy.Poly(inv, _t, domain="QQ")
    xi = [(red[i0][j] * inv).rem(p) for j in range(a.dimV)]
    w = [red[i][j0] for i in range(a.dimW)]
    wit = RankOneWitness(
        modulus=_coeffs(p),
        coefficients=tuple(_coeffs(c.rem(p)) for c in coeff_polys),
        xi=tuple(_coeffs(x) for x in xi),
        w=tuple(_coeffs(x) for x in w),
        source=source,
    )
    return wit if verify_rank_one(wit, a) else None


def _pencil(a: HomSubspace, pc: Sequence, qc: Sequence, source: str):
    """Search the line ``P + t Q`` (coefficients over the basis of ``A``)."""
    coeff_polys = [
        sympy.Poly(sympy.Rational(p) + sympy.Rational(q) * _t, _t, domain="QQ")
        for p, q in zip(pc, qc)
    ]
    el = _element(a, coeff_polys)
    g = None
    for i, k in itertools.combinations(range(a.dimW), 2):
        for j, l in itertools.combinations(range(a.dimV), 2):
            minor = el[i][j] * el[k][l] - el[i][l] * el[k][j]
            if minor.is_zero:
                continue
            g = minor if g is None else g.gcd(minor)
            if g.degree() == 0:
                return None
    if g is None:
        # every member of the pencil has rank <= 1; t = 0 gives P itself
        return _witness_for(a, [c.rem(_poly((0, 1))) for c in coeff_polys], _poly((0, 1)), source)
    _, factors = g.factor_list()
    for f, _mult in sorted(factors, key=lambda fm: (fm[0].degree(), str(fm[0]))):
        f = f.monic()
        wit = _witness_for(a, coeff_polys, f, source)
        if wit is not None:
            return wit
    return None


def rank_one_search(a: HomSubspace, trials: int = 32, seed: int = 0) -> RankOneWitness | None:
    """Look for a rank-one element of the complexification of ``A``.

    Exact scan of basis elements and of the pencils spanned by pairs of
    basis elements, then ``trials`` random rational lines.  Every returned
    witness is verified exactly; ``None`` proves nothing.
    """
    n = a.dim
    for b in range(n):
        if a.basis[b].rank() == 1:
            e = [Fraction(int(i == b)) for i in range(n)]
            return _witness_for(a, [_poly((c,)) for c in e], _poly((0, 1)), "basis")
    for s, r in itertools.combinations(range(n), 2):
        pc = [int(i == s) for i in range(n)]
        qc = [int(i == r) for i in range(n)]
        wit = _pencil(a, pc, qc, "pencil")
        if wit is not None:
            return wit
    if n < 2:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        pc = [rng.randint(-3, 3) for _ in range(n)]
        qc = [rng.randint(-3, 3) for _ in range(n)]
        if la.rank([pc, qc]) < 2:
            continue
        wit = _pencil(a, pc, qc, "random-line")
        if wit is not None:
            return wit
    return None


FINITE_TYPE = "FiniteType"
RANK_ONE = "RankOneWitness"
INCONCLUSIVE = "Inconclusive"


@dataclass
class FiniteTypeVerdict:
    verdict: str
    prolongation: SpencerResult
    witness: RankOneWitness | None = None
    heuristic_search: bool = field(default=True)


def finite_type_verdict(
    a: HomSubspace, max_k: int = DEFAULT_MAX_K, trials: int = 32, seed: int = 0
) -> FiniteTypeVerdict:
    """Combine the two one-sided certificates.

    Both are computed independently; if they ever disagree the input has
    exposed a bug, and :class:`InternalInconsistency` is raised.
    """
    pro = spencer_prolong(a, max_k)
    wit = rank_one_search(a, trials, seed)
    if pro.terminated and wit is not None:
        raise InternalInconsistency("finite prolongation and a rank-one witness on the same input")
    if pro.terminated:
        return FiniteTypeVerdict(FINITE_TYPE, pro)
    if wit is not None:
        return FiniteTypeVerdict(RANK_ONE, pro, wit)
    return FiniteTypeVerdict(INCONCLUSIVE, pro)
