import random
from fractions import Fraction

import pytest

from dercalc.algebra import builtin
from dercalc.chevalley import A_VALUED, DER_VALUED, ChevalleyComplex
from dercalc.forms import UniversalForms
from dercalc.textformat import (
    ParseError,
    format_algebra,
    format_cochain,
    format_form_derivation,
    format_rational,
    load_algebra,
    parse_algebra,
    parse_cochain,
    parse_form_derivation,
    parse_rational,
)


@pytest.mark.parametrize("tok, value", [("3", 3), ("-2/6", Fraction(-1, 3)), ("0", 0)])
def test_rationals(tok, value):
    assert parse_rational(tok) == value
    assert parse_rational(format_rational(value)) == value


@pytest.mark.parametrize("tok", ["1.5", "1e3", "x", "1/0"])
def test_inexact_or_bad_rationals(tok):
    with pytest.raises(ParseError):
        parse_rational(tok)


@pytest.mark.parametrize("spec", ["mat(2)", "dual", "triangular(2)", "functions(3)"])
def test_algebra_round_trip(spec):
    A = builtin(spec)
    B = parse_algebra(format_algebra(A))
    assert B.constants == A.constants and B.unit == A.unit and B.name == A.name


def test_algebra_with_comments_and_dim_only():
    text = "# the dual numbers\ndim: 2\nunit: 1 0\nconst: 0 0 0 1\nconst: 0 1 1 1  # 1 eps\nconst: 1 0 1 1\n"
    A = parse_algebra(text)
    assert A.basis_names == ("e0", "e1") and A.derivations.dim == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("basis: a\nunit: 1\nconst: 0 0 0\n", 3),
        ("basis: a\nunit: 1\nconst: 0 0 5 1\n", 3),
        ("basis: a\nunit: 1\ncolour: red\n", 3),
        ("basis: a\nnonsense\n", 2),
    ],
)
def test_algebra_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_algebra(text)
    assert err.value.line == line


def test_missing_unit():
    with pytest.raises(ParseError):
        parse_algebra("basis: a b\n")


def test_load_algebra_from_file(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text(format_algebra(builtin("dual")))
    assert load_algebra(str(path)).dim == 2
    with pytest.raises(ParseError):
        load_algebra(str(tmp_path / "missing.txt"))


@pytest.mark.parametrize("kind, k", [(A_VALUED, 2), (DER_VALUED, 1), (DER_VALUED, 0)])
def test_cochain_round_trip(kind, k):
    cx = ChevalleyComplex(builtin("mat(2)"))
    c = cx.random(random.Random(k), k, kind)
    assert parse_cochain(format_cochain(c), cx) == c


def test_cochain_rejects_unsorted_tuple():
    cx = ChevalleyComplex(builtin("mat(2)"))
    with pytest.raises(ParseError):
        parse_cochain("degree: 2\nvalue: 1 0 : 1 0 0\n", cx)
    with pytest.raises(ParseError):
        parse_cochain("degree: 1\nvalue: 0 : 1 0\n", cx)


def test_form_derivation_round_trip():
    S = UniversalForms(builtin("dual"), 2)
    K = S.random_derivation(random.Random(3), 1)
    back = parse_form_derivation(format_form_derivation(K), S)
    assert back.vector == K.vector
    assert parse_form_derivation(format_form_derivation(S.d), S).vector == S.d.vector


def test_form_derivation_wrong_degree():
    S = UniversalForms(builtin("dual"), 2)
    with pytest.raises(ParseError):
        parse_form_derivation("degree: 1\nimage: 1 : 0 = 1\n", S)
