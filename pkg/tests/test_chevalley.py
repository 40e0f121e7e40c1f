import random

import pytest

from dercalc.algebra import builtin
from dercalc.chevalley import (
    A_VALUED,
    DER_VALUED,
    ChevalleyComplex,
    adjoint_coboundary,
    cohomology_dims,
    complex_differentials,
    differential,
    evaluate,
    fn_bracket,
    insert_K,
    insert_X,
    is_graded_derivation,
    lie_derivative,
    nr_bracket,
    wedge,
    z_multilinear_subspace,
)

SPECS = ["mat(2)", "dual", "functions(2)", "triangular(2)"]


@pytest.fixture(scope="module", params=SPECS)
def cx(request):
    return ChevalleyComplex(builtin(request.param))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _rand_der(cx, rng):
    return [rng.randint(-3, 3) for _ in range(cx.m)]


@pytest.mark.parametrize(
    "spec, dims, betti",
    [
        ("mat(2)", [4, 12, 12, 4], [1, 0, 0, 1]),
        ("dual", [2, 2], [1, 1]),
        ("functions(2)", [2], [2]),
        ("triangular(2)", [3, 6, 3], [1, 1, 0]),
    ],
)
def test_frozen_cohomology(spec, dims, betti):
    cx = ChevalleyComplex(builtin(spec))
    got = [cx.dim(k) for k in cx.degrees]
    assert got == dims
    rows = cohomology_dims(complex_differentials(cx), got)
    assert [r.betti for r in rows] == betti


def test_skew_symmetry_of_values():
    cx = ChevalleyComplex(builtin("mat(2)"))
    phi = cx.random(random.Random(1), 2)
    assert phi.at((1, 0)) == tuple(-x for x in phi.at((0, 1)))
    assert phi.at((1, 1)) == (0,) * 4


def test_differential_in_low_degrees_matches_formula(cx):
    if cx.m == 0:
        pytest.skip("no derivations")
    rng = random.Random(5)
    a = [rng.randint(-3, 3) for _ in range(cx.A.dim)]
    X = _rand_der(cx, rng)
    assert evaluate(differential(cx.element(a)), X) == cx.D.apply(X, a)
    phi = cx.random(rng, 1)
    Y = _rand_der(cx, rng)
    expected = _sub(_sub(cx.D.apply(X, evaluate(phi, Y)), cx.D.apply(Y, evaluate(phi, X))),
                    evaluate(phi, cx.D.bracket(X, Y)))
    if cx.m >= 2:
        assert evaluate(differential(phi), X, Y) == expected


def test_wedge_of_one_cochains(cx):
    if cx.m < 2:
        pytest.skip("needs two derivations")
    rng = random.Random(9)
    phi, psi = cx.random(rng, 1), cx.random(rng, 1)
    X, Y = _rand_der(cx, rng), _rand_der(cx, rng)
    A = cx.A
    expected = _sub(A.multiply(evaluate(phi, X), evaluate(psi, Y)), A.multiply(evaluate(phi, Y), evaluate(psi, X)))
    assert evaluate(wedge(phi, psi), X, Y) == expected


def test_insertion_of_vector_evaluates_first_slot(cx):
    if cx.m == 0:
        pytest.skip("no derivations")
    rng = random.Random(2)
    phi = cx.random(rng, 1)
    X = _rand_der(cx, rng)
    assert insert_X(X, phi).values[0] == evaluate(phi, X)


def test_identity_counts_degree(cx):
    rng = random.Random(4)
    Id = cx.identity() if cx.m else None
    for k in range(1, cx.m + 1):
        phi = cx.random(rng, k)
        assert insert_K(Id, phi) == phi.scale(k)


def test_identity_brackets(cx):
    if cx.m == 0:
        pytest.skip("no derivations")
    rng = random.Random(8)
    Id = cx.identity()
    for l in range(0, min(cx.m, 2) + 1):
        L = cx.random(rng, l, DER_VALUED)
        assert nr_bracket(Id, L) == L.scale(l - 1)
        assert fn_bracket(Id, L).is_zero()


def test_lie_derivative_of_identity_is_d(cx):
    if cx.m == 0:
        pytest.skip("no derivations")
    rng = random.Random(6)
    phi = cx.random(rng, 1)
    assert lie_derivative(cx.identity(), phi) == differential(phi)


def test_d_is_graded_derivation(cx):
    assert is_graded_derivation(cx, cx.d_operator)


def test_adjoint_coboundary_squares_to_zero(cx):
    rng = random.Random(3)
    for k in range(0, cx.m):
        K = cx.random(rng, k, DER_VALUED)
        assert adjoint_coboundary(adjoint_coboundary(K)).is_zero()


def test_z_multilinear_is_everything_for_central_simple():
    cx = ChevalleyComplex(builtin("mat(2)"))
    for k in cx.degrees:
        assert z_multilinear_subspace(cx, k).dim == cx.dim(k, A_VALUED)


def test_dual_numbers_z_multilinear_cut():
    cx = ChevalleyComplex(builtin("dual"))
    assert [z_multilinear_subspace(cx, k).dim for k in cx.degrees] == [2, 1]
