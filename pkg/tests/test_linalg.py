from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dercalc.linalg import Matrix, Q, Subspace, image_basis, inverse, kernel_basis, solve_linear

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("3/4") == Fraction(3, 4)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert Matrix(rows).rank() == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_annihilated_and_complementary(rows):
    m = Matrix(rows)
    K = kernel_basis(m)
    assert K.dim + m.rank() == m.cols
    for v in K.basis:
        assert not any(m.apply(v))


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_reproduces_rhs(rows, x):
    m = Matrix(rows)
    x = x[: m.cols]
    b = m.apply(x)
    sol = solve_linear(m, b)
    assert sol is not None
    assert m.apply(sol.particular) == b


def test_inconsistent_system_has_no_solution():
    m = Matrix([[1, 1], [2, 2]])
    assert solve_linear(m, [1, 3]) is None


def test_subspace_equality_is_canonical():
    a = Subspace(3, [(1, 2, 0), (0, 1, 1)])
    b = Subspace(3, [(1, 3, 1), (2, 5, 1)])
    assert a == b and hash(a) == hash(b)
    assert a.contains((1, 4, 2)) and not a.contains((0, 0, 1))


def test_intersection_sum_and_annihilator():
    a = Subspace(3, [(1, 0, 0), (0, 1, 0)])
    b = Subspace(3, [(0, 1, 0), (0, 0, 1)])
    assert a.intersect(b) == Subspace(3, [(0, 1, 0)])
    assert a.sum(b) == Subspace.full(3)
    assert a.annihilator() == Subspace(3, [(0, 0, 1)])
    assert len(a.quotient_basis(a.intersect(b))) == 1


def test_coordinates_outside_is_none():
    a = Subspace(3, [(1, 1, 0)])
    assert a.coordinates((2, 2, 0)) == (Fraction(2),)
    assert a.coordinates((1, 0, 0)) is None


def test_inverse_exact():
    m = Matrix([[2, 1], [7, 4]])
    assert inverse(m) @ m == Matrix.identity(2)
    with pytest.raises(ValueError):
        inverse(Matrix([[1, 2], [2, 4]]))


def test_image_of_product():
    m = Matrix([[1, 0], [0, 0], [1, 0]])
    assert image_basis(m) == Subspace(3, [(1, 0, 1)])
