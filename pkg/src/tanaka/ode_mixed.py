"""Skew Young tableaux for systems of ODEs of mixed order.

A system of order ``kappa = (k_1, ..., k_n)`` and type ``lambda`` is drawn
as ``n`` rows of ``k_i`` boxes, row ``i`` starting at column
``offset_i + 1`` with ``offset_i = max(lambda) - l_i``.  A box in column
``c`` has degree ``-c``.  The symbol is ``m = R X + V`` with one basis
vector per box, ``X`` of degree -1 and ``[X, e_{i,j}] = e_{i,j+1}``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .algebra import GradedLieAlgebra, GradedSubspace, generation_depth
from .errors import KappaTooSmall, LambdaOutOfRange
from .prolongation import DEFAULT_MAX_DEGREE
from .pseudo_product import (
    Certificate,
    SymbolTriple,
    finiteness_certificate,
    levi_kernels,
    make_symbol,
)


def _check_pair(kappa, lam):
    kappa, lam = tuple(int(k) for k in kappa), tuple(int(l) for l in lam)
    if len(kappa) != len(lam) or not kappa:
        raise LambdaOutOfRange("kappa and lambda must have the same positive length")
    if any(l < 2 for l in lam) or any(l > k for k, l in zip(kappa, lam)):
        raise LambdaOutOfRange(f"need 2 <= lambda <= kappa, got kappa={kappa}, lambda={lam}")
    return kappa, lam


@dataclass(frozen=True)
class SkewTableau:
    kappa: tuple
    lam: tuple

    @property
    def n(self) -> int:
        return len(self.kappa)

    @property
    def offsets(self) -> tuple:
        top = max(self.lam)
        return tuple(top - l for l in self.lam)

    def columns(self, i: int) -> range:
        """1-based columns occupied by row ``i``."""
        return range(self.offsets[i] + 1, self.offsets[i] + self.kappa[i] + 1)

    @property
    def complete_column(self) -> int:
        """Leftmost column meeting every row."""
        return max(self.offsets) + 1

    @property
    def width(self) -> int:
        return max(o + k for o, k in zip(self.offsets, self.kappa))

    @property
    def flagged(self) -> bool:
        """Single-row input: accepted, but outside the n >= 2 setting."""
        return self.n < 2

    @property
    def preserved_projection(self) -> tuple:
        return tuple(k - l for k, l in zip(self.kappa, self.normalized_lambda))

    @property
    def normalized_lambda(self) -> tuple:
        return normalize_lambda(self.kappa, self.lam)

    def render(self) -> str:
        """Text drawing: one line per row, boxes show their degree."""
        lines = []
        for i in range(self.n):
            cells = ["    "] * self.offsets[i] + [f"{-c:>3} " for c in self.columns(i)]
            lines.append("".join(cells).rstrip())
        return "\n".join(lines)


def tableau(kappa, lam) -> SkewTableau:
    kappa, lam = _check_pair(kappa, lam)
    return SkewTableau(kappa, lam)


def normalize_lambda(kappa, lam) -> tuple:
    """Translate ``lambda`` by a constant so that ``min(lambda) == 2``."""
    kappa, lam = _check_pair(kappa, lam)
    r = min(lam) - 2
    return tuple(l - r for l in lam)


@dataclass(frozen=True)
class OdeSymbol:
    tableau: SkewTableau
    triple: SymbolTriple
    box_index: dict          # (row, j) -> basis index, 0-based row and position

    @property
    def m(self) -> GradedLieAlgebra:
        return self.triple.m


def symbol_from_tableau(t: SkewTableau) -> OdeSymbol:
    names, degrees, index = ["X"], [-1], {}
    for i in range(t.n):
        for j, col in enumerate(t.columns(i)):
            index[(i, j)] = len(names)
            names.append(f"e{i + 1},{j}")
            degrees.append(-col)
    brackets = {}
    for (i, j), a in index.items():
        b = index.get((i, j + 1))
        if b is not None:
            brackets[(0, a)] = {b: 1}
    m = GradedLieAlgebra(len(names), brackets, tuple(names), tuple(degrees))
    cstar = t.complete_column
    f_idx = [a for (i, j), a in index.items() if t.offsets[i] + 1 + j <= cstar]
    e = GradedSubspace.of_indices(m, [0])
    f = GradedSubspace.of_indices(m, f_idx)
    return OdeSymbol(t, make_symbol(m, [e, f]), index)


def vanishing_conditions(kappa, lam) -> list:
    """Conditions ``dF^i / dy^r_s = 0`` for a non-linear system of type ``(kappa, lambda)``.

    Returned as ``(i, (r, s))`` with 1-based equation and function indices.
    Padding box in row ``i`` at column ``c`` (left of the row start) is
    paired with every original box in column ``c``; the box of row ``r`` at
    position ``p`` from its left end carries ``y^r_{k_r - p}``.
    """
    t = tableau(kappa, lam)
    out = []
    for i in range(t.n):
        for c in range(1, t.offsets[i] + 1):
            for r in range(t.n):
                if c in t.columns(r):
                    p = c - t.offsets[r]
                    out.append((i + 1, (r + 1, t.kappa[r] - p)))
    return out


def enumerate_lambdas(kappa) -> list:
    kappa = tuple(int(k) for k in kappa)
    if not kappa or any(k < 2 for k in kappa):
        raise KappaTooSmall(f"kappa must be >= 2 componentwise, got {kappa}")
    seen = set()
    for lam in itertools.product(*(range(2, k + 1) for k in kappa)):
        seen.add(normalize_lambda(kappa, lam))
    return sorted(seen)


@dataclass
class TableRow:
    lam: tuple
    tableau: SkewTableau
    projection: tuple
    certificate: Certificate

    @property
    def total_dim(self) -> int:
        return self.certificate.prolongation.total_dim


def _row(args) -> TableRow:
    kappa, lam, max_degree = args
    t = tableau(kappa, lam)
    sym = symbol_from_tableau(t)
    cert = finiteness_certificate(sym.triple, max_degree)
    return TableRow(lam, t, t.preserved_projection, cert)


def dimension_table(kappa, max_degree: int = DEFAULT_MAX_DEGREE, jobs: int = 1) -> list:
    """One row per non-equivalent ``lambda``; rows are independent so ``jobs > 1`` fans out."""
    lams = enumerate_lambdas(kappa)
    work = [(tuple(kappa), lam, max_degree) for lam in lams]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row, work))
    return [_row(w) for w in work]


def check_tableau_symbol(kappa, lam) -> dict:
    """Non-degeneracy, generation and translation invariance for one pair."""
    t = tableau(kappa, lam)
    sym = symbol_from_tableau(t)
    out = {
        "nondegenerate": levi_kernels(sym.triple).nondegenerate,
        "generating": sym.triple.generating,
        "generation_depth": generation_depth(sym.m),
    }
    shifted = tuple(l + 1 for l in t.lam)
    if all(l <= k for l, k in zip(shifted, t.kappa)):
        other = symbol_from_tableau(tableau(t.kappa, shifted))
        out["translation_invariant"] = (
            other.m == sym.m
            and other.triple.e.space == sym.triple.e.space
            and other.triple.f.space == sym.triple.f.space
        )
    return out
