"""Small named algebras used in docs, tests and the CLI examples."""

from __future__ import annotations

from .algebra import GradedLieAlgebra


def heisenberg() -> GradedLieAlgebra:
    """``e1, e2`` of degree -1, ``e3`` of degree -2, ``[e1, e2] = e3``."""
    return GradedLieAlgebra(3, {(0, 1): {2: 1}}, degrees=(-1, -1, -2))


def engel() -> GradedLieAlgebra:
    """The 4-dimensional filiform symbol: ``[e1, e2] = e3``, ``[e1, e3] = e4``."""
    return GradedLieAlgebra(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, degrees=(-1, -1, -2, -3))


def abelian(n: int, degrees=None) -> GradedLieAlgebra:
    return GradedLieAlgebra(n, {}, degrees=tuple(degrees) if degrees else (-1,) * n)


def heisenberg_plus_center() -> GradedLieAlgebra:
    """``H3`` with an extra central element ``e0`` of degree -1 (stored last as e4)."""
    return GradedLieAlgebra(4, {(0, 1): {2: 1}}, names=("e1", "e2", "e3", "e0"), degrees=(-1, -1, -2, -1))


def free_two_step(n: int) -> GradedLieAlgebra:
    """Free 2-step nilpotent algebra on ``n`` generators."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    brackets = {p: {n + k: 1} for k, p in enumerate(pairs)}
    return GradedLieAlgebra(n + len(pairs), brackets, degrees=(-1,) * n + (-2,) * len(pairs))
