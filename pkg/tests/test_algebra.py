import random

import pytest

from dercalc.algebra import (
    Algebra,
    builtin,
    check_algebra_hom,
    inner_derivation,
    matrix_amplification,
    validate_algebra,
)
from dercalc.linalg import Matrix, unit_vec


@pytest.mark.parametrize(
    "name, dim, center, der, inner, out",
    [
        ("mat(2)", 4, 1, 3, 3, 0),
        ("mat(3)", 9, 1, 8, 8, 0),
        ("dual", 2, 2, 1, 0, 1),
        ("functions(2)", 2, 2, 0, 0, 0),
        ("functions(3)", 3, 3, 0, 0, 0),
        ("triangular(2)", 3, 1, 2, 2, 0),
        ("amplify(dual,2)", 8, 2, 7, 6, 1),
    ],
)
def test_frozen_dimensions(name, dim, center, der, inner, out):
    A = builtin(name)
    D = A.derivations
    assert (A.dim, A.center.dim, D.dim, D.int_dim, D.out_dim) == (dim, center, der, inner, out)


def test_catalog_is_valid(catalog):
    for A in catalog.values():
        assert validate_algebra(A) is None


def test_associativity_violation_is_located():
    names = ["1", "x", "y"]
    triples = [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (1, 0, 1, 1), (2, 0, 2, 1), (1, 1, 2, 1), (2, 1, 1, 1)]
    bad = validate_algebra(Algebra.from_triples("bad", names, triples, [1, 0, 0]))
    assert bad.kind == "associativity" and bad.where == (1, 1, 1)


def test_unit_violation():
    A = Algebra.from_triples("nu", ["a", "b"], [(0, 0, 0, 1)], [1, 0])
    assert validate_algebra(A).kind == "unit"


def test_derivation_basis_satisfies_leibniz(catalog):
    rng = random.Random(3)
    for A in catalog.values():
        D = A.derivations
        for X in D.der_basis:
            assert D.is_derivation(X)
            a = [rng.randint(-3, 3) for _ in range(A.dim)]
            b = [rng.randint(-3, 3) for _ in range(A.dim)]
            lhs = X.apply(A.multiply(a, b))
            rhs = tuple(p + q for p, q in zip(A.multiply(X.apply(a), b), A.multiply(a, X.apply(b))))
            assert lhs == rhs


def test_bracket_is_commutator_of_matrices(catalog):
    A = catalog["M2"]
    D = A.derivations
    u, v = D.unit(0), D.unit(1)
    X, Y = D.matrix(u), D.matrix(v)
    assert D.matrix(D.bracket(u, v)) == X @ Y - Y @ X


def test_inner_derivations_span_int(catalog):
    A = catalog["T2"]
    D = A.derivations
    for i in range(A.dim):
        ad = inner_derivation(A, unit_vec(A.dim, i))
        assert D.int_subspace.contains(D.coords(ad))


def test_dual_numbers_derivation_scales_eps(catalog):
    X = catalog["D2"].derivations.der_basis[0]
    assert X.apply((1, 0)) == (0, 0)
    image = X.apply((0, 1))
    assert image[0] == 0 and image[1] != 0


def test_diagonal_embedding_is_hom(catalog):
    f = Matrix([[1, 0], [0, 0], [0, 0], [0, 1]])
    assert check_algebra_hom(f, catalog["F2"], catalog["M2"])
    g = Matrix([[0, 1], [0, 0], [0, 0], [1, 0]])
    assert check_algebra_hom(g, catalog["F2"], catalog["M2"])
    assert not check_algebra_hom(Matrix([[1, 1], [0, 0], [0, 0], [0, 1]]), catalog["F2"], catalog["M2"])


def test_amplification_of_field_is_matrix_algebra():
    Q1 = builtin("functions(1)")
    assert matrix_amplification(Q1, 2).constants == builtin("mat(2)").constants


@pytest.mark.parametrize("name", ["mat(0)", "nosuch", "mat(x)", "dual(2)"])
def test_bad_builtin_names(name):
    with pytest.raises(KeyError):
        builtin(name)
