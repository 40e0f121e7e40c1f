import random

import pytest

from dercalc.algebra import builtin
from dercalc.bimodule import multiplication_kernel, universal_one_forms
from dercalc.forms import (
    CapError,
    FormError,
    UniversalForms,
    decompose_uf_derivation,
    delta_bracket,
    j_K,
    j_X,
    uf_lie,
)
from dercalc.linalg import Matrix, unit_vec


@pytest.fixture(scope="module", params=["mat(2)", "dual", "triangular(2)"])
def S(request):
    return UniversalForms(builtin(request.param), 3)


def _rand(A, rng):
    return [rng.randint(-3, 3) for _ in range(A.dim)]


def test_dimensions_follow_bar_complex():
    S = UniversalForms(builtin("mat(2)"), 3)
    assert [S.dim(k) for k in range(5)] == [4, 12, 36, 108, 0]


def test_one_forms_are_kernel_of_multiplication(catalog):
    for A in catalog.values():
        assert universal_one_forms(A).dim == multiplication_kernel(A).dim == A.dim * (A.dim - 1)


def test_d_squares_to_zero(S):
    rng = random.Random(1)
    for k in range(S.cap - 1):
        w = S.random(rng, k)
        assert w.d().d().is_zero()


def test_d_of_unit_vanishes(S):
    assert S.exact(S.A.unit).is_zero()


def test_product_leibniz(S):
    rng = random.Random(2)
    a, b = S.random(rng, 1), S.random(rng, 1)
    assert (a * b).d() == a.d() * b - a * b.d()


def test_contraction_with_d_counts_degree(S):
    rng = random.Random(3)
    for k in range(S.cap + 1):
        w = S.random(rng, k)
        assert j_K(S.d, w) == w.scale(k)


def test_lie_of_d_is_d(S):
    rng = random.Random(4)
    for k in range(S.cap):
        w = S.random(rng, k)
        assert uf_lie(S.d, w) == w.d()


def test_contraction_of_a_db(S):
    rng = random.Random(5)
    A = S.A
    for X in A.derivations.der_basis:
        a, b = _rand(A, rng), _rand(A, rng)
        w = S.element(a) * S.exact(b)
        assert j_X(X, w) == S.element(A.multiply(a, X.apply(b)))


def test_delta_bracket_with_d_counts_degree(S):
    assert delta_bracket(S.d, S.d).is_zero()
    rng = random.Random(6)
    for k in range(S.cap):
        K = S.random_derivation(rng, k)
        assert delta_bracket(S.d, K).vector == K.scale(k - 1).vector


def test_decompose_d(S):
    K, L, flat = decompose_uf_derivation(S, S.d_operator)
    assert K.vector == S.d.vector and L.is_zero() and flat


def test_cap_is_enforced():
    S = UniversalForms(builtin("dual"), 2)
    w = S.random(random.Random(0), 2)
    with pytest.raises(CapError):
        w.d()


def test_non_derivation_is_rejected():
    S = UniversalForms(builtin("dual"), 2)
    images = [S.element((0, 1)).coeffs, {}]
    with pytest.raises(FormError):
        S.derivation(0, images)


def test_algebra_derivation_agrees_with_matrix():
    A = builtin("dual")
    S = UniversalForms(A, 2)
    X = A.derivations.der_basis[0]
    K = S.algebra_derivation(X)
    for i in range(A.dim):
        assert S.from_vector(0, X.column(i)).coeffs == K.images[i]
    assert j_X(Matrix.zeros(2, 2), S.exact(unit_vec(2, 1))).is_zero()
