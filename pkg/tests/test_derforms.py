import random

import pytest

from dercalc.algebra import builtin
from dercalc.chevalley import differential, evaluate, wedge
from dercalc.derforms import (
    OutComplex,
    ResourceGuard,
    Zeta,
    ZetaError,
    derivations_into,
    morita_instance_check,
    omega_out,
    zeta_images,
)
from dercalc.linalg import Subspace

FROZEN = {
    # Omega_Der dims, ker zeta dims, Omega_Out dims
    "mat(2)": ([4, 12, 12, 4], [0, 0, 24, 104], [1, 0, 0, 0]),
    "dual": ([2, 1], [0, 1, 2, 2], [2, 1]),
    "functions(2)": ([2], [0, 2, 2, 2], [2]),
    "triangular(2)": ([3, 2, 0], [0, 4, 12, 24], [1, 0, 0]),
}


@pytest.fixture(scope="module")
def zetas():
    return {name: Zeta(builtin(name), 3) for name in FROZEN}


@pytest.mark.parametrize("name", FROZEN)
def test_frozen_dimensions(zetas, name):
    Z = zetas[name]
    der, ker, out = FROZEN[name]
    assert Z.der_dims() == der
    assert [Z.kernel[k].dim for k in range(4)] == ker
    got = omega_out(Z)
    assert [got[k].dim for k in sorted(got)] == out


@pytest.mark.parametrize("name", FROZEN)
def test_zeta_of_a_db(zetas, name):
    Z = zetas[name]
    A, S, cx = Z.A, Z.S, Z.cx
    if cx.m == 0:
        pytest.skip("no derivations")
    rng = random.Random(1)
    a = [rng.randint(-2, 2) for _ in range(A.dim)]
    b = [rng.randint(-2, 2) for _ in range(A.dim)]
    phi = Z(S.element(a) * S.exact(b))
    X = [rng.randint(-2, 2) for _ in range(cx.m)]
    assert evaluate(phi, X) == A.multiply(a, cx.D.apply(X, b))


@pytest.mark.parametrize("name", FROZEN)
def test_zeta_is_multiplicative_chain_map(zetas, name):
    Z = zetas[name]
    S = Z.S
    rng = random.Random(2)
    u, v = S.random(rng, 1), S.random(rng, 1)
    if Z.top >= 2:
        assert Z(u * v) == wedge(Z(u), Z(v))
        assert Z(u.d()) == differential(Z(u))


def test_kernel_for_dual_numbers_is_eps_d_eps(zetas):
    Z = zetas["dual"]
    S = Z.S
    w = S.element((0, 1)) * S.exact((0, 1))
    assert Z.kernel[1] == Subspace(S.dim(1), [w.vector])


def test_matrix_algebra_is_injective_in_degree_one(zetas):
    Z = zetas["mat(2)"]
    assert Z.matrices[1].rank() == 12 and Z.kernel[1].dim == 0


def test_derivations_into_der_forms_include_d(zetas):
    Z = zetas["triangular(2)"]
    images = [differential(Z.cx.element(Z.A.basis_element(i))) for i in range(Z.A.dim)]
    zd = Z.zeta_K(images)
    assert zeta_images(Z, 1).contains(zd.vector)
    assert len(derivations_into(Z, 0)) == Z.A.derivations.dim


def test_zeta_K_rejects_non_derivation(zetas):
    Z = zetas["dual"]
    cx = Z.cx
    imgs = [cx.element((0, 1)), cx.zero(0)]
    with pytest.raises(ZetaError):
        Z.zeta_K(imgs)


def test_out_complex_of_dual_numbers():
    oc = OutComplex(builtin("dual"))
    assert (oc.o, oc.zd) == (1, 2)
    dims, rows = oc.zcomplex()
    assert dims == [2, 1] and [r.betti for r in rows] == [1, 0]


@pytest.mark.parametrize("name, N", [("dual", 2), ("functions(2)", 2), ("triangular(2)", 2)])
def test_morita_instances_agree(name, N):
    assert morita_instance_check(builtin(name), N).passed


def test_morita_guard():
    with pytest.raises(ResourceGuard):
        morita_instance_check(builtin("mat(2)"), 3)
    with pytest.raises(ValueError):
        morita_instance_check(builtin("dual"), 0)
