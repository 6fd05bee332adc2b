from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanaka.linalg import (
    AmbientMismatch,
    Matrix,
    Subspace,
    as_rational,
    contains,
    kernel,
    rank,
    rref,
    sum_and_intersect,
)

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def vectors_in(n, max_count=4):
    return st.lists(st.lists(small, min_size=n, max_size=n), max_size=max_count)


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 2]], [(-2, 1)]),
        ([[1, 0], [0, 1]], []),
        ([[1, 1], [2, 2]], [(1, -1)]),
    ],
)
def test_kernel_examples(rows, expected):
    got = kernel(Matrix.from_rows(rows))
    assert got == Subspace.span(expected, len(rows[0]))


def test_sum_and_intersect_examples():
    x, y = Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)
    assert sum_and_intersect(x, y) == (Subspace.full(2), Subspace.zero(2))
    assert sum_and_intersect(x, x) == (x, x)
    a = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    b = Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
    assert sum_and_intersect(a, b) == (Subspace.full(3), Subspace.span([(0, 1, 0)], 3))


@pytest.mark.parametrize(
    "space, v, expected",
    [
        (Subspace.zero(2), (0, 0), True),
        (Subspace.span([(1, 1)], 2), (2, 2), True),
        (Subspace.span([(1, 1)], 2), (1, 0), False),
    ],
)
def test_contains_examples(space, v, expected):
    assert contains(space, v) is expected


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        Subspace.zero(2) + Subspace.zero(3)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational(Fraction(1, 3)) == Fraction(1, 3)


def test_rref_is_reduced():
    rows, pivots = rref([[2, 4, 6], [1, 1, 1]])
    assert pivots == [0, 1]
    assert rows == [(1, 0, -1), (0, 1, 2)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(rows):
    m = Matrix.from_rows(rows)
    k = kernel(m)
    assert rank(rows) + k.dim == m.cols
    for v in k.basis:
        assert all(c == 0 for c in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(vectors_in(4), vectors_in(4))
def test_dimension_formula(a, b):
    A, B = Subspace.span(a, 4), Subspace.span(b, 4)
    s, i = sum_and_intersect(A, B)
    assert s.dim + i.dim == A.dim + B.dim
    assert i <= A and i <= B and A <= s and B <= s


@settings(max_examples=60, deadline=None)
@given(vectors_in(3), st.lists(small, min_size=3, max_size=3))
def test_canonical_form(a, scale_by):
    # any spanning set of the same space gives the identical stored basis
    A = Subspace.span(a, 3)
    mixed = [tuple(x + y * c for x, y in zip(v, A.basis[0])) for v, c in zip(A.basis, scale_by)] if A.dim else []
    B = Subspace.span(list(reversed(mixed)) + list(A.basis), 3)
    assert B.basis == A.basis


@settings(max_examples=40, deadline=None)
@given(vectors_in(4))
def test_annihilator_is_orthogonal_complement(a):
    A = Subspace.span(a, 4)
    ann = A.annihilator()
    assert len(ann) == 4 - A.dim
    for phi in ann:
        for v in A.basis:
            assert sum(p * x for p, x in zip(phi, v)) == 0
