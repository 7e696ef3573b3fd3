from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import F5, Q, composable, matrices
from modules.common import DimensionMismatchError, IndSheafError
from modules.linalg import (
    PrimeField, cokernel, compose, direct_sum, from_rows, identity, image, kernel, make_field, rank, solve,
    span, tensor, zero_map,
)


def test_make_field():
    assert make_field("q").name == "q"
    assert make_field("fp:7").name == "fp:7"
    assert make_field(" FP:5 ") == F5
    with pytest.raises(IndSheafError):
        make_field("fp:9")
    with pytest.raises(IndSheafError):
        make_field("reals")


def test_prime_field_coerces_fractions():
    assert F5.coerce(Fraction(1, 2)) == 3
    assert F5.coerce(-1) == 4
    with pytest.raises(ZeroDivisionError):
        F5.coerce(Fraction(1, 5))
    with pytest.raises(ZeroDivisionError):
        F5.inv(0)


def test_prime_field_rejects_composite():
    with pytest.raises(IndSheafError):
        PrimeField(4)


@given(matrices(Q))
def test_rank_nullity(f):
    assert kernel(f).dim + rank(f) == f.domain_dim


@given(matrices(F5))
def test_rank_nullity_fp(f):
    assert kernel(f).dim + rank(f) == f.domain_dim


@given(matrices(Q))
def test_kernel_is_killed(f):
    for v in kernel(f).basis:
        assert all(x == 0 for x in f.apply(v))


@given(matrices(Q))
def test_cokernel_projection(f):
    q, c = cokernel(f)
    assert c == f.codomain_dim - rank(f)
    assert q.domain_dim == f.codomain_dim and q.codomain_dim == c
    assert compose(q, f).is_zero()
    assert q.is_surjective()


@given(matrices(Q))
def test_solve_finds_preimage_of_columns(f):
    for col in f.columns():
        v = solve(f, col)
        assert v is not None
        assert f.apply(v) == col


def test_solve_outside_image():
    f = from_rows(Q, [[1, 0], [0, 0]])
    assert solve(f, (0, 1)) is None
    with pytest.raises(DimensionMismatchError):
        solve(f, (1,))


@settings(max_examples=50)
@given(composable(Q))
def test_compose_agrees_with_apply(pair):
    g, f = pair
    gf = compose(g, f)
    for j in range(f.domain_dim):
        e = tuple(Q.one() if i == j else Q.zero() for i in range(f.domain_dim))
        assert gf.apply(e) == g.apply(f.apply(e))


def test_compose_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        compose(identity(Q, 2), identity(Q, 3))


@given(matrices(Q, max_dim=3), matrices(Q, max_dim=3))
def test_direct_sum_and_tensor_ranks(f, g):
    assert rank(direct_sum(f, g)) == rank(f) + rank(g)
    assert rank(tensor(f, g)) == rank(f) * rank(g)


def test_subspace_canonical_form():
    a = span(Q, 3, [(1, 1, 0), (0, 1, 0)])
    b = span(Q, 3, [(2, 0, 0), (1, 2, 0), (3, 3, 0)])
    assert a == b
    assert a.dim == 2
    assert a.contains((5, -1, 0))
    assert not a.contains((0, 0, 1))


def test_image_and_zero_map():
    assert image(zero_map(Q, 3, 2)).dim == 0
    assert kernel(zero_map(Q, 3, 2)).dim == 2
    assert identity(F5, 3).is_iso()
    assert not zero_map(F5, 2, 2).is_iso()


def test_reduction_depends_on_the_field():
    rows = [(1, 2), (3, 1)]
    assert rank(from_rows(Q, rows)) == 2
    f = from_rows(F5, rows)
    assert rank(f) == 1
    assert kernel(f).basis == ((1, 2),)
    assert all(isinstance(x, int) and 0 <= x < 5 for x in kernel(f).basis[0])


def test_rational_kernel_stays_in_fractions():
    f = from_rows(Q, [(2, 1, 0), (0, 3, 1)])
    (v,) = kernel(f).basis
    assert all(isinstance(x, Fraction) for x in v)
    assert v == (1, -2, 6)
    assert solve(f, (Fraction(1, 2), 0)) == (Fraction(1, 4), 0, 0)


def test_empty_shapes():
    assert rank(zero_map(Q, 0, 3)) == 0
    assert kernel(zero_map(Q, 0, 3)).dim == 3
    assert kernel(zero_map(F5, 2, 0)).dim == 0
    assert solve(zero_map(Q, 2, 0), (0, 0)) == ()
    assert solve(zero_map(Q, 2, 0), (1, 0)) is None
    q, c = cokernel(zero_map(F5, 2, 0))
    assert c == 2 and q.is_iso()
