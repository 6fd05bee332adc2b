"""Generalized pseudo-product symbols.

A symbol is a graded nilpotent algebra ``m`` with graded subalgebras, in the
pair case ``(e, f)`` with ``e & f = 0``.  The pair is non-degenerate when the
bracket pairing ``e x f -> m`` has trivial left and right kernels, tested as
literal vanishing of brackets in ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    GradedLieAlgebra,
    GradedSubspace,
    LieAlgebra,
    associated_graded,
    check_filtration_brackets,
    extend_filtration,
    require_graded_subalgebra,
)
from .errors import (
    InternalInconsistency,
    NontrivialIntersection,
    PreconditionViolated,
    PrerequisiteViolated,
)
from .linalg import Subspace
from .prolongation import DEFAULT_MAX_DEGREE, ProlongConstraints, ProlongationResult, prolong

F_RULE_E_MINUS_1 = "E-1"   # F^i: [Y, E^{-1}] in F^{i-1} + E^{-1}
F_RULE_E = "E"             # alternative reading: ... in F^{i-1} + E


@dataclass(frozen=True)
class SymbolTriple:
    m: GradedLieAlgebra
    subalgebras: tuple
    pairwise_trivial: bool
    generating: bool

    @property
    def e(self) -> GradedSubspace:
        return self.subalgebras[0]

    @property
    def f(self) -> GradedSubspace:
        return self.subalgebras[1]

    def constraints(self) -> ProlongConstraints:
        return ProlongConstraints.subalgebra_list(self.subalgebras)


def make_symbol(m: GradedLieAlgebra, subalgebras: Sequence) -> SymbolTriple:
    subs = tuple(
        s if isinstance(s, GradedSubspace) else GradedSubspace(m, s) for s in subalgebras
    )
    for s in subs:
        require_graded_subalgebra(s)
    trivial = all(
        (a.space & b.space).is_zero()
        for i, a in enumerate(subs)
        for b in subs[i + 1:]
    )
    if len(subs) == 2 and not trivial:
        raise NontrivialIntersection("e and f intersect non-trivially")
    total = Subspace.zero(m.dim)
    for s in subs:
        total = total + s.space
    generating = m.generated_subalgebra(total).is_full()
    return SymbolTriple(m, subs, trivial, generating)


@dataclass(frozen=True)
class LeviKernels:
    left: GradedSubspace
    right: GradedSubspace

    @property
    def nondegenerate(self) -> bool:
        return self.left.space.is_zero() and self.right.space.is_zero()


def levi_kernels(t: SymbolTriple) -> LeviKernels:
    """Left and right kernels of ``(x, y) -> [x, y]`` on ``e x f``."""
    m = t.m
    zero = Subspace.zero(m.dim)
    left = m.bracket_preimage(t.e.space, t.f.space, zero)
    right = m.bracket_preimage(t.f.space, t.e.space, zero)
    return LeviKernels(GradedSubspace(m, left), GradedSubspace(m, right))


def escape_diagnostic(t: SymbolTriple) -> LeviKernels:
    """``{x in e : [x, f] in e + f}`` and ``{y in f : [y, e] in e + f}``.

    Both vanish when every element of one subalgebra brackets some element
    of the other out of ``e + f``.  Reported alongside the Levi kernels for
    comparison only; certificates use :func:`levi_kernels`.
    """
    m = t.m
    d = t.e.space + t.f.space
    left = m.bracket_preimage(t.e.space, t.f.space, d)
    right = m.bracket_preimage(t.f.space, t.e.space, d)
    return LeviKernels(GradedSubspace(m, left), GradedSubspace(m, right))


# ---------------------------------------------------------------------------
# Freeman filtrations
# ---------------------------------------------------------------------------


@dataclass
class FreemanState:
    """``E_up[i-1] = E^{-i}``; ``E_down[i] = E^i`` and ``F_down[i+1] = F^i`` (``F_down[0] = F``)."""

    ambient: LieAlgebra
    E_up: tuple
    F: Subspace
    E_down: tuple
    F_down: tuple
    E_stable_index: int
    F_stable_index: int
    f_rule: str = F_RULE_E_MINUS_1

    @property
    def E(self) -> Subspace:
        return self.E_up[-1]

    @property
    def mu(self) -> int:
        return len(self.E_up)

    @property
    def E0_zero(self) -> bool:
        return self.E_down[0].is_zero()

    def F_level(self, i: int) -> Subspace:
        """``F^i`` for any integer ``i`` (``F^i = F`` for ``i <= -1``; saturates above)."""
        if i <= -1:
            return self.F
        return self.F_down[min(i + 1, len(self.F_down) - 1)]

    def E_level(self, i: int) -> Subspace:
        """``E^{i}``: ``E^{-j}`` from the input filtration for ``i < 0``, refined terms for ``i >= 0``."""
        if i < 0:
            return self.E_up[min(-i, self.mu) - 1]
        return self.E_down[min(i, len(self.E_down) - 1)]

    @property
    def F_dims(self) -> tuple:
        return tuple(s.dim for s in self.F_down)

    @property
    def E_dims(self) -> tuple:
        return tuple(s.dim for s in self.E_down)

    @property
    def nu(self) -> int | None:
        """``nu >= 0`` with ``F^{nu-1} != 0`` and ``F^nu = 0``; None if F never vanishes."""
        for i in range(len(self.F_down) - 1):
            if self.F_level(i).is_zero():
                return i
        return None


def freeman(
    g: LieAlgebra,
    E_filtration: Sequence[Subspace],
    F: Subspace,
    f_rule: str = F_RULE_E_MINUS_1,
) -> FreemanState:
    """Decreasing refinements of a pair ``(E, F)``, iterated to stabilization."""
    E_up = tuple(s.space if isinstance(s, GradedSubspace) else s for s in E_filtration)
    F = F.space if isinstance(F, GradedSubspace) else F
    if not E_up:
        raise PrerequisiteViolated("empty E filtration")
    for i in range(len(E_up) - 1):
        expected = E_up[i] + g.bracket_space(E_up[0], E_up[i])
        if expected != E_up[i + 1]:
            raise PrerequisiteViolated(
                f"E^-{i + 2} differs from [E^-1, E^-{i + 1}] + E^-{i + 1}"
            )
    E = E_up[-1]
    if not (E & F).is_zero():
        raise NontrivialIntersection("E and F intersect non-trivially")
    E1 = E_up[0]
    rhs_E = E1 if f_rule == F_RULE_E_MINUS_1 else E
    if f_rule not in (F_RULE_E_MINUS_1, F_RULE_E):
        raise ValueError(f"unknown f_rule {f_rule!r}")

    # both sequences keep E^0 (resp. F^{-1}, F^0) and then only strict drops
    E_down = [g.bracket_preimage(E1, F, E1 + F)]
    while True:
        prev = E_down[-1]
        nxt = g.bracket_preimage(prev, F, prev + F)
        if nxt == prev:
            break
        E_down.append(nxt)
    F_down = [F, g.bracket_preimage(F, E1, F + rhs_E)]
    while True:
        prev = F_down[-1]
        nxt = g.bracket_preimage(prev, E1, prev + rhs_E)
        if nxt == prev:
            break
        F_down.append(nxt)
    return FreemanState(
        ambient=g,
        E_up=E_up,
        F=F,
        E_down=tuple(E_down),
        F_down=tuple(F_down),
        E_stable_index=len(E_down) - 1,
        F_stable_index=len(F_down) - 2,
        f_rule=f_rule,
    )


def osculation_filtration(state: FreemanState):
    """Filtration ``F^{-i}D = E^{-i} + F^{nu-i}`` of ``D = E + F`` and its graded symbol.

    ``E^{-i} = E`` for ``i >= mu`` and ``F^j = F`` for ``j <= -1``; ``i`` runs
    from 1 until the whole of ``D`` is reached.  The result is extended to
    the ambient algebra and its associated graded algebra is returned with
    the graded images of ``E`` and ``F``.
    """
    if not state.E0_zero:
        raise PreconditionViolated("E^0 is not zero")
    nu = state.nu
    if nu is None:
        raise PreconditionViolated("the F filtration stabilizes at a non-zero subspace")
    g = state.ambient
    D = state.E + state.F
    terms = []
    i = 1
    while True:
        t = state.E_level(-i) + state.F_level(nu - i)
        terms.append(t)
        if t == D:
            break
        i += 1
    bad = check_filtration_brackets(g, terms, limit=len(terms))
    if bad:
        raise PreconditionViolated(f"osculation filtration is not bracket-compatible at {bad[0]}")
    full = extend_filtration(g, terms)
    sym, basis, images = associated_graded(g, full, [state.E, state.F])
    triple = make_symbol(sym, images)
    return full, triple, terms


def condition_two_holds(g: LieAlgebra, full, E: Subspace, F: Subspace) -> bool:
    """``E & T^-i + F & T^-i == (E + F) & T^-i`` for every level."""
    D = E + F
    return all((E & t) + (F & t) == D & t for t in full.terms)


# ---------------------------------------------------------------------------
# finiteness certificate
# ---------------------------------------------------------------------------

FINITE_CERTIFIED = "FiniteCertified"
FINITE_OBSERVED = "FiniteObserved"
UNKNOWN = "Unknown"


@dataclass
class Certificate:
    symbol: SymbolTriple
    levi: LeviKernels
    prolongation: ProlongationResult
    verdict: str
    notes: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return self.levi.nondegenerate and self.symbol.generating


def finiteness_certificate(t: SymbolTriple, max_degree: int = DEFAULT_MAX_DEGREE) -> Certificate:
    """Run the generalized prolongation and classify the outcome.

    A non-degenerate generating pair is certified finite in advance; if its
    prolongation still hits the cap that is a bug and is raised.
    """
    levi = levi_kernels(t)
    result = prolong(t.m, t.constraints(), max_degree)
    certified = levi.nondegenerate and t.generating
    if certified:
        if not result.terminated:
            raise InternalInconsistency(
                f"certified-finite symbol did not terminate within degree {max_degree}"
            )
        verdict = FINITE_CERTIFIED
    elif result.terminated:
        verdict = FINITE_OBSERVED
    else:
        verdict = UNKNOWN
    notes = []
    if not t.generating:
        notes.append("e + f does not generate m")
    if not levi.nondegenerate:
        notes.append("Levi pairing is degenerate")
    return Certificate(t, levi, result, verdict, notes)
