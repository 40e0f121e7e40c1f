import pytest

from dercalc.bimodule import (
    Bimodule,
    BimoduleError,
    chevalley_degree,
    diag,
    diag_kernel,
    factor_through_diag,
    finite_power,
    hom_AA,
    horizontal_tensors,
    is_derivation_based,
    is_diagonal,
    is_hom,
    mat2_catalog,
    quotient,
    regular,
    tensor_square,
    universal_one_forms,
)
from dercalc.derforms import Zeta
from dercalc.linalg import Matrix, Subspace


def test_constructors_validate(catalog):
    for A in catalog.values():
        for M in (regular(A), tensor_square(A), universal_one_forms(A), finite_power(A, 2)):
            assert M.validate() is None
        if A.derivations.dim:
            assert chevalley_degree(A, 1).validate() is None


def test_bimodule_endomorphisms_of_A_are_central(catalog):
    for A in catalog.values():
        homs = hom_AA(regular(A), regular(A))
        assert len(homs) == A.center.dim
        assert all(is_hom(h, regular(A), regular(A)) for h in homs)


def test_regular_is_diagonal(catalog):
    for A in catalog.values():
        assert is_diagonal(regular(A))
        assert diag(regular(A)).module.dim == A.dim


@pytest.mark.parametrize("key", ["D2", "F2"])
def test_tensor_square_collapses_for_commutative(catalog, key):
    A = catalog[key]
    D = diag(tensor_square(A))
    assert D.module.dim == A.dim
    assert D.kernel == horizontal_tensors(A)
    assert not is_diagonal(tensor_square(A))


def test_tensor_square_of_matrices_is_diagonal(catalog):
    assert is_diagonal(tensor_square(catalog["M2"]))


def test_diag_of_one_forms_matches_der_forms(catalog):
    for A in catalog.values():
        Z = Zeta(A, 1)
        assert diag(universal_one_forms(A, Z.S)).module.dim == Z.image[1].dim


def test_catalog_of_matrix_bimodules_is_diagonal():
    assert all(is_diagonal(M) for M in mat2_catalog())


def test_factorisation_through_diag(catalog):
    A = catalog["D2"]
    M = tensor_square(A)
    D = diag(M)
    for f in hom_AA(M, regular(A)):
        g = factor_through_diag(D, M, f)
        assert g is not None and g @ D.projection == f


def test_quotient_by_kernel_is_diagonal(catalog):
    A = catalog["D2"]
    M = tensor_square(A)
    assert is_diagonal(quotient(M, diag_kernel(M)).module)


def test_derivation_based(catalog):
    for A in catalog.values():
        assert is_derivation_based(regular(A))


def test_bad_actions_rejected(catalog):
    A = catalog["D2"]
    I = Matrix.identity(2)
    with pytest.raises(BimoduleError):
        Bimodule(A, [I], [I, I])
    swapped = Bimodule(A, [I, Matrix([[0, 0], [0, 1]])], [I, I])
    assert swapped.validate() is not None


def test_quotient_of_full_space_is_zero(catalog):
    A = catalog["M2"]
    M = regular(A)
    assert quotient(M, Subspace.full(M.dim)).module.dim == 0
