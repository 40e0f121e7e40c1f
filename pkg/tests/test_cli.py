import json

import pytest

from dercalc.cli import EXIT_FAIL, EXIT_GUARD, EXIT_INVALID, EXIT_OK, EXIT_PARSE, algebra_info, main
from dercalc.algebra import builtin

NON_ASSOCIATIVE = """name: na
basis: 1 x y
unit: 1 0 0
const: 0 0 0 1
const: 0 1 1 1
const: 0 2 2 1
const: 1 0 1 1
const: 2 0 2 1
const: 1 1 2 1
const: 2 1 1 1
"""


def test_info_json(capsys):
    assert main(["info", "dual", "--json"]) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info == {
        "algebra": "dual", "dim": 2, "center": 2, "der": 1, "int": 0, "out": 1,
        "chevalley_dims": [2, 2], "cohomology": [1, 1],
    }


def test_info_amplified():
    info = algebra_info(builtin("amplify(dual,2)"))
    assert (info["der"], info["int"], info["out"], info["center"]) == (7, 6, 1, 2)


def test_catalog_aliases(capsys):
    assert main(["info", "M2"]) == EXIT_OK
    assert "mat(2)" in capsys.readouterr().out


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("basis: a b\nunit: 1 0\nconst: 0 0 0 1.5\n")
    assert main(["info", str(path)]) == EXIT_PARSE
    assert "line 3" in capsys.readouterr().err


def test_invalid_algebra_exit(tmp_path, capsys):
    path = tmp_path / "na.txt"
    path.write_text(NON_ASSOCIATIVE)
    assert main(["info", str(path)]) == EXIT_INVALID
    assert "associativity" in capsys.readouterr().err


def test_unknown_builtin_is_parse_error():
    assert main(["info", "quaternions"]) == EXIT_PARSE


def test_guard_exit():
    assert main(["morita", "mat(2)", "3"]) == EXIT_GUARD


def test_morita_report(capsys):
    assert main(["morita", "dual", "2", "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert all(c["passed"] for c in report["checks"])


def test_check_json_is_stable(capsys):
    args = ["check", "classify", "--algebra", "dual", "--seed", "3", "--json"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["seed"] == 3 and report["checks"]


def test_check_writes_output(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "out", "--algebra", "T2", "--json", "--output", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["checks"]


def test_bracket_identity(capsys):
    assert main(["bracket", "fn", "Id", "Id", "--algebra", "mat(2)"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "degree: 2" in out and "value:" not in out


def test_bracket_nr_with_file(tmp_path, capsys):
    path = tmp_path / "c.txt"
    path.write_text("degree: 2\nkind: Der\nvalue: 0 1 : 0 1 0\nvalue: 1 2 : 1 0 1/2\n")
    assert main(["bracket", "nr", "Id", str(path), "--algebra", "mat(2)"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "value: 0 1 : 0 1 0" in out and "value: 1 2 : 1 0 1/2" in out


def test_bracket_rejects_a_valued(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("degree: 1\nkind: A\nvalue: 0 : 1 0\n")
    assert main(["bracket", "fn", "Id", str(path), "--algebra", "dual"]) == EXIT_PARSE


def test_delta_of_d(capsys):
    assert main(["bracket", "delta", "d", "d", "--algebra", "dual"]) == EXIT_OK
    assert "image:" not in capsys.readouterr().out


def test_bad_subcommand():
    with pytest.raises(SystemExit) as err:
        main(["check", "nonsense"])
    assert err.value.code == 2


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_GUARD}) == 5
