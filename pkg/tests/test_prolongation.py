import random

import pytest

from tanaka import catalog
from tanaka.errors import NotADerivation, NotGradedSubalgebra
from tanaka.linalg import Matrix
from tanaka.prolongation import (
    CAPPED,
    TERMINATED,
    ProlongConstraints,
    a_subspace,
    der0,
    h_slices,
    prolong,
)
from tanaka.spencer import HomSubspace

from fuzz import random_isotropic_pair, random_pairing_symbol, random_two_step
from oracle import brute_force_prolongation


def h3_pair(second=(1,)):
    h3 = catalog.heisenberg()
    return h3, [h3.span([h3.unit(0)]), h3.span([h3.unit(i) for i in second])]


def test_der0_examples():
    h3, pair = h3_pair()
    assert der0(h3).dim == 4
    assert der0(h3, ProlongConstraints.subalgebra_list(pair)).dim == 2
    assert der0(catalog.abelian(3)).dim == 9


def test_heisenberg_pair_split():
    h3, pair = h3_pair()
    r = prolong(h3, ProlongConstraints.subalgebra_list(pair))
    assert r.status == TERMINATED
    assert r.dims == {-2: 1, -1: 2, 0: 2, 1: 2, 2: 1, 3: 0}
    assert r.total_dim == 8


def test_heisenberg_second_pair():
    h3, pair = h3_pair((1, 2))
    assert prolong(h3, ProlongConstraints.subalgebra_list(pair)).total_dim == 6


def test_contact_algebra_is_capped():
    r = prolong(catalog.heisenberg(), max_degree=10)
    assert r.status == CAPPED
    assert all(c.dim > 0 for c in r.components)


def test_line_vector_fields():
    r = prolong(catalog.abelian(1), max_degree=5)
    assert r.status == CAPPED and r.nonnegative_dims == (1,) * 6


def test_every_basis_map_satisfies_leibniz():
    for m, constraints in [
        (h3_pair()[0], ProlongConstraints.subalgebra_list(h3_pair()[1])),
        (catalog.engel(), ProlongConstraints.universal()),
    ]:
        r = prolong(m, constraints, max_degree=4)
        for comp in r.components:
            for images in comp.images:
                assert r.leibniz_violations(comp.k, images) == []


def test_monotone_under_constraints():
    h3, pair = h3_pair()
    universal = prolong(h3, max_degree=4)
    constrained = prolong(h3, ProlongConstraints.subalgebra_list(pair), max_degree=4)
    for k, n in constrained.dims.items():
        assert n <= universal.dims[k]


def test_termination_is_sound_under_larger_cap():
    h3, pair = h3_pair()
    short = prolong(h3, ProlongConstraints.subalgebra_list(pair))
    long = prolong(h3, ProlongConstraints.subalgebra_list(pair), max_degree=40)
    assert short.dims == long.dims and long.terminated


def test_h_slices_heisenberg_pair():
    h3, pair = h3_pair()
    r = prolong(h3, ProlongConstraints.subalgebra_list(pair))
    hs = h_slices(r)
    assert hs.dims[0] == 1 and hs.nonnegative_total == 1
    a = a_subspace(r, hs)
    diag = HomSubspace.span([Matrix.from_rows([[1, 0], [0, -1]], 2)], 2, 2)
    assert a.flat() == diag.flat()


def test_h_slices_abelian_equal_components():
    r = prolong(catalog.abelian(2), max_degree=3)
    hs = h_slices(r)
    assert all(hs.dims[k] == r.dims[k] for k in range(4))
    assert a_subspace(r, hs).dim == 4


def test_a_subspace_vanishes_for_engel_pair():
    m4 = catalog.engel()
    r = prolong(m4, ProlongConstraints.subalgebra_list([m4.span([m4.unit(0)]), m4.span([m4.unit(1), m4.unit(2)])]))
    assert r.terminated and a_subspace(r).dim == 0


def test_capped_runs_keep_nonzero_h_slices():
    r = prolong(catalog.heisenberg(), max_degree=6)
    hs = h_slices(r)
    tail = [hs.dims[k] for k in range(r.stop_degree - r.generation_depth + 1, r.stop_degree + 1)]
    assert any(tail)


def test_prescribed_g0_rejects_non_derivation():
    h3 = catalog.heisenberg()
    not_der = Matrix.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]], 3)
    not_der_scaled = not_der + Matrix.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 5]], 3)
    with pytest.raises(NotADerivation):
        prolong(h3, ProlongConstraints.prescribed_g0([not_der_scaled]))


def test_prescribed_g0_warns_when_not_closed():
    h3 = catalog.heisenberg()
    # e1 -> e2 and e2 -> e1 are derivations of H3 (trace-zero off-diagonal parts) whose bracket is diagonal
    x = Matrix.from_rows([[0, 0, 0], [1, 0, 0], [0, 0, 0]], 3)
    y = Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]], 3)
    r = prolong(h3, ProlongConstraints.prescribed_g0([x, y]), max_degree=2)
    assert r.warnings


def test_non_subalgebra_constraint_rejected():
    h3 = catalog.heisenberg()
    with pytest.raises(NotGradedSubalgebra):
        prolong(h3, ProlongConstraints.subalgebra_list([h3.span([h3.unit(0), h3.unit(1)])]))


def test_max_degree_must_be_positive():
    with pytest.raises(ValueError):
        prolong(catalog.heisenberg(), max_degree=0)


def _raw(m):
    brackets = {p: {k: c for k, c in t.items()} for p, t in m.brackets.items()}
    return m.dim, list(m.degrees), brackets


@pytest.mark.parametrize("seed", range(4))
def test_engine_matches_oracle_on_fuzzed_pairs(seed):
    rng = random.Random(100 + seed)
    m, e, f = random_pairing_symbol(rng, max_dim=5)
    subs = [e.space, f.space]
    r = prolong(m, ProlongConstraints.subalgebra_list(subs), max_degree=5)
    dim, degrees, brackets = _raw(m)
    want = brute_force_prolongation(dim, degrees, brackets, [list(s.basis) for s in subs], max_degree=5)
    assert list(r.nonnegative_dims) == want


@pytest.mark.parametrize("seed", range(3))
def test_engine_matches_oracle_universal_two_step(seed):
    rng = random.Random(200 + seed)
    m = random_two_step(rng, max_dim=5)
    pair = random_isotropic_pair(rng, m)
    dim, degrees, brackets = _raw(m)
    r = prolong(m, ProlongConstraints.subalgebra_list(pair), max_degree=2)
    want = brute_force_prolongation(dim, degrees, brackets, [list(s.basis) for s in pair], max_degree=2)
    assert list(r.nonnegative_dims) == want
