"""Seeded generators of small random symbols and Hom-subspaces."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from tanaka.algebra import GradedLieAlgebra, GradedSubspace
from tanaka.linalg import Matrix, Subspace
from tanaka.spencer import HomSubspace


def _rand_vec(rng, n, lo=-2, hi=2):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


def random_two_step(rng: random.Random, max_dim=8):
    """Fundamental 2-step algebra with random integer structure constants."""
    while True:
        n1 = rng.randint(2, 4)
        n2 = rng.randint(1, min(3, n1 * (n1 - 1) // 2, max_dim - n1))
        brackets = {}
        for i, j in itertools.combinations(range(n1), 2):
            v = _rand_vec(rng, n2, -1, 2)
            if any(v):
                brackets[(i, j)] = {n1 + k: c for k, c in enumerate(v) if c}
        images = [[brackets.get(p, {}).get(n1 + k, 0) for k in range(n2)]
                  for p in itertools.combinations(range(n1), 2)]
        if Subspace.span(images, n2).is_full():
            return GradedLieAlgebra(n1 + n2, brackets, degrees=(-1,) * n1 + (-2,) * n2)


def random_isotropic_pair(rng: random.Random, m: GradedLieAlgebra, tries=50):
    """Two random abelian subalgebras of ``m_{-1}`` with trivial intersection, or None."""
    idx = m.indices_by_degree[-1]
    for _ in range(tries):
        subs = []
        for _ in range(2):
            k = rng.randint(1, 2)
            vecs = []
            for _ in range(k):
                v = [Fraction(0)] * m.dim
                for x in idx:
                    v[x] = Fraction(rng.randint(-2, 2))
                vecs.append(tuple(v))
            s = Subspace.span(vecs, m.dim)
            if s.is_zero() or not m.is_subalgebra(s):
                break
            subs.append(s)
        if len(subs) == 2 and (subs[0] & subs[1]).is_zero():
            return subs
    return None


def random_pairing_symbol(rng: random.Random, max_dim=8):
    """``m = e + f + m_{-2}`` with ``[e, e] = [f, f] = 0`` and a random pairing ``e x f -> m_{-2}``.

    Returns ``(m, e, f)`` as GradedSubspaces; the pair is always generating
    and is non-degenerate only when the pairing has trivial kernels.
    """
    while True:
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        c = rng.randint(1, min(a * b, max_dim - a - b)) if max_dim - a - b >= 1 else 0
        if c == 0:
            continue
        brackets = {}
        for i in range(a):
            for j in range(b):
                v = _rand_vec(rng, c, -1, 2)
                if any(v):
                    brackets[(i, a + j)] = {a + b + k: x for k, x in enumerate(v) if x}
        images = [[brackets.get((i, a + j), {}).get(a + b + k, 0) for k in range(c)]
                  for i in range(a) for j in range(b)]
        if not Subspace.span(images, c).is_full():
            continue
        m = GradedLieAlgebra(a + b + c, brackets, degrees=(-1,) * (a + b) + (-2,) * c)
        e = GradedSubspace.of_indices(m, range(a))
        f = GradedSubspace.of_indices(m, range(a, a + b))
        return m, e, f


def random_kappa_lambda(rng: random.Random, max_boxes=7):
    while True:
        n = rng.randint(2, 3)
        kappa = tuple(rng.randint(2, 4) for _ in range(n))
        if sum(kappa) <= max_boxes:
            lam = tuple(rng.randint(2, k) for k in kappa)
            return kappa, lam


def random_hom(rng: random.Random, max_dimV=3, max_basis=3, density=0.6):
    dimV = rng.randint(1, max_dimV)
    dimW = rng.randint(1, max_dimV)
    mats = []
    for _ in range(rng.randint(0, max_basis)):
        rows = [[Fraction(rng.randint(-2, 2)) if rng.random() < density else Fraction(0)
                 for _ in range(dimV)] for _ in range(dimW)]
        mats.append(Matrix.from_rows(rows, dimV))
    return HomSubspace.span(mats, dimV, dimW)
