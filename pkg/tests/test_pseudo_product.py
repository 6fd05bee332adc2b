import random

import pytest

from tanaka import catalog
from tanaka.algebra import LieAlgebra, validate, weak_derived_flag
from tanaka.errors import NontrivialIntersection, PreconditionViolated, PrerequisiteViolated
from tanaka.ode_mixed import symbol_from_tableau, tableau
from tanaka.pseudo_product import (
    F_RULE_E,
    FINITE_CERTIFIED,
    condition_two_holds,
    escape_diagnostic,
    finiteness_certificate,
    freeman,
    levi_kernels,
    make_symbol,
    osculation_filtration,
)

from fuzz import random_two_step


def spans(g, *index_lists):
    return [g.span([g.unit(i) for i in idx]) for idx in index_lists]


def test_make_symbol_examples():
    h3, m4 = catalog.heisenberg(), catalog.engel()
    t = make_symbol(h3, spans(h3, [0], [1]))
    assert t.pairwise_trivial and t.generating
    with pytest.raises(NontrivialIntersection):
        make_symbol(h3, spans(h3, [0], [0]))
    assert make_symbol(m4, spans(m4, [0], [1, 2])).generating


def test_levi_kernels_examples():
    h3, m4 = catalog.heisenberg(), catalog.engel()
    assert levi_kernels(make_symbol(h3, spans(h3, [0], [1]))).nondegenerate
    assert levi_kernels(make_symbol(m4, spans(m4, [0], [1, 2]))).nondegenerate
    g = catalog.heisenberg_plus_center()
    k = levi_kernels(make_symbol(g, spans(g, [0], [1, 3])))
    assert k.left.space.is_zero()
    assert k.right.space == g.span([g.unit(3)])
    assert not k.nondegenerate


def test_freeman_heisenberg():
    h3 = catalog.heisenberg()
    E, F = spans(h3, [0], [1])
    state = freeman(h3, [E], F)
    assert state.E0_zero and state.F_level(0).is_zero() and state.nu == 0


def test_freeman_abelian_stabilizes_immediately():
    g = LieAlgebra(2, {})
    E, F = g.span([g.unit(0)]), g.span([g.unit(1)])
    state = freeman(g, [E], F)
    assert all(state.E_level(i) == E for i in range(4))
    assert all(state.F_level(i) == F for i in range(4))
    with pytest.raises(PreconditionViolated):
        osculation_filtration(state)


def test_freeman_prerequisites():
    m4 = catalog.engel()
    E1, E2 = spans(m4, [0, 1], [0, 1])
    with pytest.raises(PrerequisiteViolated):
        freeman(m4, [E1, E2], m4.span([m4.unit(3)]))
    with pytest.raises(NontrivialIntersection):
        freeman(m4, [m4.span([m4.unit(0)])], m4.span([m4.unit(0), m4.unit(1)]))


def test_f_rule_alternative_agrees_when_mu_is_one():
    m4 = catalog.engel()
    E, F = spans(m4, [0], [1, 2])
    assert freeman(m4, [E], F).F_dims == freeman(m4, [E], F, F_RULE_E).F_dims == (2, 1, 0)


def test_osculation_with_nu_zero_is_weak_flag():
    h3 = catalog.heisenberg()
    E, F = spans(h3, [0], [1])
    full, triple, D_terms = osculation_filtration(freeman(h3, [E], F))
    flag, _ = weak_derived_flag(h3, E + F)
    assert full.dims == flag.dims == (2, 3)
    assert len(D_terms) == 1


def test_certificate_examples():
    h3 = catalog.heisenberg()
    c = finiteness_certificate(make_symbol(h3, spans(h3, [0], [1])))
    assert c.verdict == FINITE_CERTIFIED and c.prolongation.total_dim == 8
    ode = symbol_from_tableau(tableau((4, 3, 2), (2, 2, 2)))
    c = finiteness_certificate(ode.triple)
    assert c.verdict == FINITE_CERTIFIED and c.prolongation.total_dim == 22


def test_degenerate_symbol_not_certified():
    g = catalog.heisenberg_plus_center()
    c = finiteness_certificate(make_symbol(g, spans(g, [0], [1, 3])), max_degree=5)
    assert c.verdict != FINITE_CERTIFIED
    assert c.verdict == ("FiniteObserved" if c.prolongation.terminated else "Unknown")
    assert c.notes


def _random_state(seed):
    rng = random.Random(seed)
    g = random_two_step(rng, max_dim=7)
    idx = g.indices_by_degree[-1]
    k = rng.randint(1, len(idx) - 1)
    E = g.span([g.unit(i) for i in idx[:k]])
    F = g.span([g.unit(i) for i in idx[k:]])
    if not g.is_subalgebra(F):
        F = g.generated_subalgebra(F)
    if not (E & F).is_zero():
        return None
    E_up = [E]
    while True:
        nxt = E_up[-1] + g.bracket_space(E, E_up[-1])
        if nxt == E_up[-1]:
            break
        E_up.append(nxt)
    if not (E_up[-1] & F).is_zero():
        return None
    return g, freeman(g, E_up, F)


def _fuzz_states(count=30):
    seed = 0
    while count:
        got = _random_state(seed)
        seed += 1
        if got is not None:
            count -= 1
            yield got


def test_freeman_invariants_on_fuzz():
    osculated = 0
    for g, state in _fuzz_states():
        for seq in (state.E_down, state.F_down):
            assert all(b <= a for a, b in zip(seq, seq[1:]))
            assert len(seq) <= g.dim + 2
        if g.is_subalgebra(state.F):
            for s in state.F_down[1:]:
                assert g.is_subalgebra(s)
        if not (state.E0_zero and state.nu is not None):
            continue
        try:
            full, triple, _ = osculation_filtration(state)
        except PreconditionViolated:
            continue
        osculated += 1
        assert validate(triple.m).ok
        assert condition_two_holds(g, full, state.E, state.F)
        assert all(s.graded and s.is_subalgebra() for s in triple.subalgebras)
        assert (triple.e.space & triple.f.space).is_zero()
    assert osculated > 0


def test_escape_diagnostic():
    h3, m4 = catalog.heisenberg(), catalog.engel()
    d = escape_diagnostic(make_symbol(h3, spans(h3, [0], [1])))
    assert d.nondegenerate
    # in m4, [e2, e1] = -e3 stays inside e + f, unlike the Levi pairing view
    d = escape_diagnostic(make_symbol(m4, spans(m4, [0], [1, 2])))
    assert d.left.space.is_zero() and d.right.space == m4.span([m4.unit(1)])
