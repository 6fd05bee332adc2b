"""Universal, prescribed-g0 and generalized Tanaka prolongations.

An element ``u`` of degree ``k >= 0`` is stored as its action on ``m``: for
every basis vector ``x`` of ``m`` (degree ``i``) the coordinates of ``u(x)``
in the space of degree ``i + k``.  That space is ``m_{i+k}`` (coordinates in
the basis vectors of that degree, in index order) when ``i + k < 0`` and the
already computed ``g_{i+k}`` (coordinates in its basis) otherwise.

Bracket convention: ``[u, x] := u(x)`` for ``u`` of non-negative degree and
``x`` in ``m``; hence ``[x, u] = -u(x)``.

Because an element *is* its action map, condition (C) (an element that
commutes with all of ``m`` vanishes) holds by construction.

Termination: once ``nu`` consecutive degrees vanish, where ``nu`` is the
generation depth of ``m``, every later degree vanishes too.  An element of
degree ``k + 1`` sends a generator of degree ``-a`` (``a <= nu``) into
``g_{k+1-a}``, which lies in the zero window, so it kills all generators;
the Leibniz rule then kills the whole of ``m`` and condition (C) kills the
element.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .algebra import (
    GradedLieAlgebra,
    GradedSubspace,
    centralizer,
    derived_and_quotient,
    generation_depth,
    quotient_complement,
    require_graded_subalgebra,
)
from .errors import NotADerivation
from .linalg import ZERO, Matrix, Subspace
from .spencer import HomSubspace

log = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 24

UNIVERSAL = "Universal"
PRESCRIBED_G0 = "PrescribedG0"
SUBALGEBRA_LIST = "SubalgebraList"

TERMINATED = "Terminated"
CAPPED = "Capped"


@dataclass(frozen=True)
class ProlongConstraints:
    mode: str = UNIVERSAL
    g0: tuple = ()            # PrescribedG0: n x n matrices on m (column = source)
    subalgebras: tuple = ()   # SubalgebraList: Subspaces of m

    @classmethod
    def universal(cls) -> "ProlongConstraints":
        return cls(UNIVERSAL)

    @classmethod
    def prescribed_g0(cls, maps: Sequence[Matrix]) -> "ProlongConstraints":
        return cls(PRESCRIBED_G0, g0=tuple(maps))

    @classmethod
    def subalgebra_list(cls, subspaces) -> "ProlongConstraints":
        subs = tuple(s.space if isinstance(s, GradedSubspace) else s for s in subspaces)
        return cls(SUBALGEBRA_LIST, subalgebras=subs)

    def to_document(self) -> dict:
        doc = {"mode": self.mode}
        if self.mode == PRESCRIBED_G0:
            doc["g0"] = [[str(a) for a in mat.entries] for mat in self.g0]
        if self.mode == SUBALGEBRA_LIST:
            doc["subalgebras"] = [[[str(a) for a in b] for b in s.basis] for s in self.subalgebras]
        return doc

    def content_hash(self) -> str:
        blob = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class DegreeComponent:
    """Basis of ``g_k``: ``images[b][x]`` is ``u_b(e_x)`` in degree ``deg(x) + k``."""

    k: int
    images: tuple

    @property
    def dim(self) -> int:
        return len(self.images)


class _Spaces:
    """Coordinate bookkeeping for ``m + g_0 + g_1 + ...``."""

    def __init__(self, m: GradedLieAlgebra):
        self.m = m
        self.by_degree = m.indices_by_degree
        self.position = {}
        for d, idx in self.by_degree.items():
            for p, i in enumerate(idx):
                self.position[i] = p
        self.components: list[DegreeComponent] = []

    def dim(self, d: int) -> int:
        if d < 0:
            return len(self.by_degree.get(d, ()))
        if d < len(self.components):
            return self.components[d].dim
        return 0

    def embed(self, d: int, coords: Sequence) -> tuple:
        """Local coordinates of degree ``d < 0`` as a full vector of ``m``."""
        out = [ZERO] * self.m.dim
        for p, c in enumerate(coords):
            if c:
                out[self.by_degree[d][p]] = c
        return tuple(out)

    def local(self, d: int, v: Sequence) -> tuple:
        return tuple(v[i] for i in self.by_degree.get(d, ()))

    def bracket_basis(self, d: int, t: int, y: int) -> dict:
        """``[w_t, e_y]`` for the t-th basis element of the degree-d space."""
        if d < 0:
            w = self.by_degree[d][t]
            target = self.m.basis_bracket(w, y)
            return {self.position[z]: c for z, c in target.items()}
        img = self.components[d].images[t][y]
        return {s: c for s, c in enumerate(img) if c}

    def act(self, k: int, images: Sequence, x_vec: Sequence) -> tuple:
        """``u(x)`` for a homogeneous vector ``x`` of ``m`` (degree read off ``x``)."""
        m = self.m
        d = None
        out = None
        for x, a in enumerate(x_vec):
            if not a:
                continue
            if d is None:
                d = m.degrees[x] + k
                out = [ZERO] * self.dim(d)
            for s, c in enumerate(images[x]):
                if c:
                    out[s] += a * c
        return tuple(out) if out is not None else ()

    def leibniz_violations(self, k: int, images: Sequence) -> list:
        m = self.m
        bad = []
        for x in range(m.dim):
            for y in range(x + 1, m.dim):
                d = m.degrees[x] + m.degrees[y] + k
                res = [ZERO] * self.dim(d)
                for z, c in m.basis_bracket(x, y).items():
                    for s, a in enumerate(images[z]):
                        res[s] += c * a
                for t, a in enumerate(images[x]):
                    if a:
                        for s, c in self.bracket_basis(m.degrees[x] + k, t, y).items():
                            res[s] -= a * c
                for t, a in enumerate(images[y]):
                    if a:
                        for s, c in self.bracket_basis(m.degrees[y] + k, t, x).items():
                            res[s] += a * c
                if any(res):
                    bad.append((x, y))
        return bad


def _assemble(sp: _Spaces, k: int, subalgebras: Sequence[Subspace]):
    """Sparse linear system whose kernel is ``g_k``; returns (rows, offsets, nvars)."""
    m = sp.m
    offsets, nv = [], 0
    for x in range(m.dim):
        offsets.append(nv)
        nv += sp.dim(m.degrees[x] + k)
    rows = []
    for x in range(m.dim):
        dx = m.degrees[x] + k
        for y in range(x + 1, m.dim):
            dy = m.degrees[y] + k
            D = m.degrees[x] + m.degrees[y] + k
            nD = sp.dim(D)
            if not nD:
                continue
            eqs = [dict() for _ in range(nD)]
            # u([x, y])
            for z, c in m.basis_bracket(x, y).items():
                for s in range(nD):
                    col = offsets[z] + s
                    eqs[s][col] = eqs[s].get(col, ZERO) + c
            # - [u(x), y]
            for t in range(sp.dim(dx)):
                col = offsets[x] + t
                for s, c in sp.bracket_basis(dx, t, y).items():
                    eqs[s][col] = eqs[s].get(col, ZERO) - c
            # - [x, u(y)] = + [u(y), x]
            for t in range(sp.dim(dy)):
                col = offsets[y] + t
                for s, c in sp.bracket_basis(dy, t, x).items():
                    eqs[s][col] = eqs[s].get(col, ZERO) + c
            rows.extend(e for e in eqs if any(e.values()))
    for sub in subalgebras:
        for i in sorted({m.degrees[p] for p in sub.pivots}):
            if i + k >= 0:
                continue
            part = m.graded_part(sub, i)
            target = Subspace.span(
                [sp.local(i + k, b) for b in m.graded_part(sub, i + k).basis],
                sp.dim(i + k),
            )
            ann = target.annihilator()
            for xv in part.basis:
                for phi in ann:
                    row = {}
                    for x, a in enumerate(xv):
                        if not a:
                            continue
                        for s, f in enumerate(phi):
                            if f:
                                col = offsets[x] + s
                                row[col] = row.get(col, ZERO) + a * f
                    if row:
                        rows.append(row)
    return rows, offsets, nv


def _solve_degree(sp: _Spaces, k: int, subalgebras) -> DegreeComponent:
    m = sp.m
    rows, offsets, nv = _assemble(sp, k, subalgebras)
    red = la.RowReducer(nv)
    for r in rows:
        red.add_row(r)
    kernel = Subspace.span(red.kernel_vectors(), nv) if nv else Subspace.zero(0)
    images = []
    for v in kernel.basis:
        images.append(tuple(
            tuple(v[offsets[x] + s] for s in range(sp.dim(m.degrees[x] + k)))
            for x in range(m.dim)
        ))
    return DegreeComponent(k, tuple(images))


def _images_from_matrix(m: GradedLieAlgebra, sp: _Spaces, mat: Matrix) -> tuple:
    if (mat.rows, mat.cols) != (m.dim, m.dim):
        raise NotADerivation(f"g0 map has shape {mat.rows}x{mat.cols}, expected {m.dim}x{m.dim}")
    out = []
    for x in range(m.dim):
        col = mat.col(x)
        d = m.degrees[x]
        if any(c for i, c in enumerate(col) if m.degrees[i] != d):
            raise NotADerivation("g0 map does not preserve degrees")
        out.append(sp.local(d, col))
    return tuple(out)


def _prescribed_component(m, sp, maps) -> tuple[DegreeComponent, list]:
    warnings = []
    imgs = []
    for idx, mat in enumerate(maps):
        im = _images_from_matrix(m, sp, mat)
        bad = sp.leibniz_violations(0, im)
        if bad:
            x, y = bad[0]
            raise NotADerivation(
                f"g0 element {idx + 1} violates Leibniz on ({m.names[x]}, {m.names[y]})"
            )
        imgs.append(im)
    flat = [tuple(a for im in ims for a in im) for ims in imgs]
    width = sum(len(i) for i in imgs[0]) if imgs else 0
    span = Subspace.span(flat, width)
    lengths = [len(c) for c in imgs[0]] if imgs else []
    images = []
    for v in span.basis:
        pos, img = 0, []
        for ln in lengths:
            img.append(tuple(v[pos:pos + ln]))
            pos += ln
        images.append(tuple(img))
    comp = DegreeComponent(0, tuple(images))
    # closure under commutator: [a, b](x) = a(b(x)) - b(a(x))
    mats = [_full_matrix(m, sp, im) for im in images]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = mats[i] @ mats[j] - mats[j] @ mats[i]
            if not Subspace.span([mm.entries for mm in mats], m.dim * m.dim).contains(c.entries):
                warnings.append(f"prescribed g0 is not closed under brackets ({i + 1}, {j + 1})")
    return comp, warnings


def _full_matrix(m, sp, images) -> Matrix:
    cols = [sp.embed(m.degrees[x], images[x]) for x in range(m.dim)]
    return Matrix.from_rows([[c[i] for c in cols] for i in range(m.dim)], m.dim)


@dataclass
class ProlongationResult:
    algebra: GradedLieAlgebra
    constraints: ProlongConstraints
    components: list
    status: str
    stop_degree: int          # last computed degree
    max_degree: int
    generation_depth: int
    warnings: list = field(default_factory=list)
    _spaces: _Spaces | None = field(default=None, repr=False, compare=False)

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED

    @property
    def dims(self) -> dict:
        """Dimension per degree, negative part included, ascending degree."""
        out = {d: n for d, n in sorted(self.algebra.dims_by_degree().items())}
        for c in self.components:
            out[c.k] = c.dim
        return out

    @property
    def nonnegative_dims(self) -> tuple:
        return tuple(c.dim for c in self.components)

    @property
    def total_dim(self) -> int:
        return self.algebra.dim + sum(c.dim for c in self.components)

    def space_dim(self, d: int) -> int:
        return self._spaces.dim(d)

    def act(self, k: int, coeffs: Sequence, x_vec: Sequence) -> tuple:
        """``u(x)`` for ``u = sum coeffs[b] * basis_b`` of ``g_k``."""
        comp = self.components[k]
        images = _combine_images(coeffs, comp.images, self.algebra, self._spaces, k)
        return self._spaces.act(k, images, x_vec)

    def leibniz_violations(self, k: int, images: Sequence) -> list:
        return self._spaces.leibniz_violations(k, images)

    def action_matrix(self, k: int, b: int) -> Matrix:
        """Basis element ``b`` of ``g_k`` as a matrix from ``m`` into ``m + g_0 + ... + g_{k-1}``.

        Rows are ordered as the basis of ``m`` followed by the bases of
        ``g_0, ..., g_{k-1}``.
        """
        m = self.algebra
        sp = self._spaces
        heights = [m.dim] + [sp.dim(j) for j in range(k)]
        starts = [sum(heights[:i]) for i in range(len(heights))]
        total = sum(heights)
        cols = []
        for x in range(m.dim):
            col = [ZERO] * total
            d = m.degrees[x] + k
            img = self.components[k].images[b][x]
            if d < 0:
                for p, c in enumerate(img):
                    col[m.indices_by_degree[d][p]] = c
            else:
                for p, c in enumerate(img):
                    col[starts[d + 1] + p] = c
            cols.append(col)
        return Matrix.from_rows([[c[i] for c in cols] for i in range(total)], m.dim)


def _combine_images(coeffs, basis_images, m, sp, k):
    out = []
    for x in range(m.dim):
        n = sp.dim(m.degrees[x] + k)
        out.append(la.combine(coeffs, [im[x] for im in basis_images], n))
    return tuple(out)


def der0(m: GradedLieAlgebra, constraints: ProlongConstraints | None = None) -> DegreeComponent:
    """Degree-0 component under the given constraints."""
    constraints = constraints or ProlongConstraints.universal()
    sp = _Spaces(m)
    if constraints.mode == PRESCRIBED_G0:
        return _prescribed_component(m, sp, constraints.g0)[0]
    subs = _checked_subalgebras(m, constraints)
    return _solve_degree(sp, 0, subs)


def _checked_subalgebras(m, constraints):
    if constraints.mode != SUBALGEBRA_LIST:
        return ()
    for s in constraints.subalgebras:
        require_graded_subalgebra(GradedSubspace(m, s))
    return constraints.subalgebras


def prolong(
    m: GradedLieAlgebra,
    constraints: ProlongConstraints | None = None,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> ProlongationResult:
    """Compute ``g_0, g_1, ...`` until ``generation_depth(m)`` consecutive zeros or the cap."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    constraints = constraints or ProlongConstraints.universal()
    nu = generation_depth(m)
    sp = _Spaces(m)
    warnings = []
    subs = _checked_subalgebras(m, constraints)
    status, k = CAPPED, 0
    zeros = 0
    for k in range(max_degree + 1):
        if k == 0 and constraints.mode == PRESCRIBED_G0:
            comp, warnings = _prescribed_component(m, sp, constraints.g0)
        else:
            comp = _solve_degree(sp, k, subs)
        sp.components.append(comp)
        log.debug("degree %d: dim %d", k, comp.dim)
        zeros = zeros + 1 if comp.dim == 0 else 0
        if zeros >= nu:
            status = TERMINATED
            break
    return ProlongationResult(
        algebra=m,
        constraints=constraints,
        components=list(sp.components),
        status=status,
        stop_degree=k,
        max_degree=max_degree,
        generation_depth=nu,
        warnings=warnings,
        _spaces=sp,
    )


# ---------------------------------------------------------------------------
# centralizer of [m, m] and the induced subspace of End(V)
# ---------------------------------------------------------------------------


@dataclass
class HSlices:
    negative: GradedSubspace     # Z_m([m, m])
    bases: dict                  # k >= 0 -> list of coefficient vectors over the g_k basis

    @property
    def dims(self) -> dict:
        out = {d: n for d, n in sorted(self.negative.dims_by_degree().items())}
        for k, b in sorted(self.bases.items()):
            out[k] = len(b)
        return out

    @property
    def nonnegative_total(self) -> int:
        return sum(len(b) for b in self.bases.values())


def h_slices(r: ProlongationResult) -> HSlices:
    """Per-degree slices of the centralizer of ``h = [m, m]`` in ``g``."""
    m = r.algebra
    h, _, _ = derived_and_quotient(m)
    bases = {}
    for comp in r.components:
        k = comp.k
        if not comp.dim:
            bases[k] = []
            continue
        rows = []
        for hv in h.space.basis:
            vals = [r._spaces.act(k, im, hv) for im in comp.images]
            width = len(vals[0])
            for s in range(width):
                row = {b: v[s] for b, v in enumerate(vals) if v[s]}
                if row:
                    rows.append(row)
        kernel = Subspace.span(la.null_space(rows, comp.dim), comp.dim)
        bases[k] = list(kernel.basis)
    return HSlices(centralizer(m, h), bases)


def a_subspace(r: ProlongationResult, slices: HSlices | None = None) -> HomSubspace:
    """The subspace of ``End(V)``, ``V = m / [m, m]``, induced by ``H(g)`` in degrees >= 0.

    ``V`` is realized on the homogeneous complement returned by
    :func:`quotient_complement`; images landing in non-negative degrees are
    dropped (they are zero modulo ``g^0``).
    """
    m = r.algebra
    sp = r._spaces
    slices = slices or h_slices(r)
    h, _, _ = derived_and_quotient(m)
    comp = quotient_complement(m, h.space)
    proj_basis = list(h.space.basis) + [m.unit(i) for i in comp]
    nh = h.dim
    dimV = len(comp)
    mats = []
    for k, coeff_list in sorted(slices.bases.items()):
        for coeffs in coeff_list:
            images = _combine_images(coeffs, r.components[k].images, m, sp, k)
            cols = []
            for c in comp:
                d = m.degrees[c] + k
                if d >= 0:
                    cols.append((ZERO,) * dimV)
                    continue
                w = sp.embed(d, images[c])
                coords = la.solve_in_basis(proj_basis, w)
                cols.append(coords[nh:])
            mats.append(Matrix.from_rows([[col[i] for col in cols] for i in range(dimV)], dimV))
    return HomSubspace.span(mats, dimV, dimV)
