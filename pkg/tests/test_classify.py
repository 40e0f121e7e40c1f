import random

import pytest

from dercalc.algebra import builtin
from dercalc.chevalley import DER_VALUED, ChevalleyComplex, is_graded_derivation
from dercalc.classify import (
    AnnSpace,
    ClassifyError,
    HigherK,
    ann_basis,
    ann_z_variant,
    decompose_full,
    hat,
    higher_operator,
    insert_Xi,
    random_higher,
    synthesize,
)


@pytest.mark.parametrize(
    "name, dims",
    [("mat(2)", [3, 3, 0, 0]), ("dual", [1, 2]), ("functions(2)", [0]), ("triangular(2)", [2, 2, 0])],
)
def test_frozen_annihilator_dimensions(name, dims):
    A = builtin(name)
    cx = ChevalleyComplex(A)
    assert [ann_basis(A, p, cx).dim for p in range(cx.m + 1)] == dims


def test_z_variant_for_dual_numbers():
    A = builtin("dual")
    cx = ChevalleyComplex(A)
    assert [ann_z_variant(A, p, cx).dim for p in range(cx.m + 1)] == [1, 1]


def test_degree_out_of_range():
    with pytest.raises(ClassifyError):
        ann_basis(builtin("dual"), 2)


@pytest.fixture(scope="module", params=["dual", "triangular(2)"])
def setup(request):
    A = builtin(request.param)
    cx = ChevalleyComplex(A)
    anns = {p: ann_basis(A, p, cx) for p in range(1, cx.m + 1)}
    return cx, anns


def test_insertions_are_graded_derivations(setup):
    cx, anns = setup
    rng = random.Random(11)
    for p, ann in anns.items():
        for k in range(0, cx.m + 1):
            K = random_higher(ann, k, rng)
            assert is_graded_derivation(cx, higher_operator(K))
        for i in range(ann.dim):
            xi = [1 if j == i else 0 for j in range(ann.dim)]
            op = cx.operator(-p, lambda w: insert_Xi(ann, xi, w))
            assert is_graded_derivation(cx, op)


def test_decompose_d(setup):
    cx, anns = setup
    dec = decompose_full(cx, cx.d_operator, anns)
    assert dec.K0 == cx.identity()
    assert all(K.is_zero() for K in dec.parts.values())


def test_zero_decomposes_to_zero(setup):
    cx, anns = setup
    D = cx.d_operator.scale(0)
    assert decompose_full(cx, D, anns).is_zero()


def test_synthesis_round_trip(setup):
    cx, anns = setup
    rng = random.Random(12)
    for k in range(0, min(2, cx.m) + 1):
        K0 = cx.random(rng, k, DER_VALUED)
        parts = [random_higher(anns[p], k + p, rng) for p in anns if k + p <= cx.m]
        D = synthesize(cx, K0, parts)
        dec = decompose_full(cx, D, anns)
        assert dec.K0 == K0
        for K in parts:
            assert dec.parts[K.p] == K
        assert synthesize(cx, dec.K0, list(dec.parts.values())).equals(D)


def test_non_derivation_rejected(setup):
    cx, anns = setup
    D = cx.d_operator.scale(1)
    D.maps[0] = D.maps[0].scale(2)
    with pytest.raises(ClassifyError):
        decompose_full(cx, D, anns)


def test_hat_of_zero_is_zero(setup):
    cx, anns = setup
    K = HigherK(anns[1], 1, [tuple(0 for _ in range(anns[1].dim)) for _ in cx.tuples(1)])
    assert hat(K).is_zero()


def test_as_der_cochain_only_for_p_zero(setup):
    cx, anns = setup
    K = random_higher(anns[1], 0, random.Random(0))
    with pytest.raises(ClassifyError):
        K.as_der_cochain()
    L = HigherK(AnnSpace(cx, 0, []), 1, cx.identity().values)
    assert L.as_der_cochain() == cx.identity()
