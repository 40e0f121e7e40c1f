"""Command-line entry point: ``dercalc info|check|bracket|morita``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .algebra import CATALOG, Algebra, validate_algebra
from .chevalley import (
    ChevalleyComplex,
    cohomology_dims,
    complex_differentials,
    fn_bracket,
    hook_identities_suite,
    nr_bracket,
    operator_identities_suite,
)
from .forms import CapError, FormError, UniversalForms, delta_bracket, naturality_suite, standard_homs, universal_suite
from .report import Report
from .textformat import (
    ParseError,
    format_cochain,
    format_form_derivation,
    load_algebra,
    parse_cochain,
    parse_form_derivation,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3, 4

SUITES = ("chevalley", "universal", "zeta", "diag", "classify", "out")


class ValidationFailure(Exception):
    pass


def _algebra(spec: str) -> Algebra:
    A = load_algebra(CATALOG.get(spec, spec))
    bad = validate_algebra(A)
    if bad is not None:
        raise ValidationFailure(f"{A.name}: {bad}")
    return A


def _emit(report: Report, args) -> None:
    text = report.to_json() if args.json else report.to_text()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# info


def algebra_info(A: Algebra) -> dict:
    D = A.derivations
    cx = ChevalleyComplex(A)
    ds = complex_differentials(cx)
    dims = [cx.dim(k) for k in cx.degrees]
    rows = cohomology_dims(ds, dims)
    return {
        "algebra": A.name,
        "dim": A.dim,
        "center": A.center.dim,
        "der": D.dim,
        "int": D.int_dim,
        "out": D.out_dim,
        "chevalley_dims": dims,
        "cohomology": [r.betti for r in rows],
    }


def cmd_info(args) -> int:
    A = _algebra(args.algebra)
    info = algebra_info(A)
    if args.json:
        print(json.dumps(info, indent=2, ensure_ascii=False))
    else:
        for key, value in info.items():
            print(f"{key:15} {value}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def _chevalley(algebras, seed):
    out = []
    for A in algebras:
        out.append(operator_identities_suite(A, seed, instances=25))
        out.append(hook_identities_suite(A, seed, instances=10))
    return out


def _universal(algebras, seed):
    out = [universal_suite(A, seed, instances=5) for A in algebras]
    out.append(naturality_suite(standard_homs(), seed))
    return out


def _zeta(algebras, seed):
    from .derforms import zeta_suite

    return [zeta_suite(A, seed, instances=5) for A in algebras]


def _diag(algebras, seed):
    from .bimodule import diag_suite

    return [diag_suite(algebras, seed)]


def _classify(algebras, seed):
    from .classify import classify_suite

    return [classify_suite(A, seed) for A in algebras]


def _out(algebras, seed):
    from .derforms import omega_out_suite, out_complex_compare

    out = []
    for A in algebras:
        out.append(omega_out_suite(A))
        out.append(out_complex_compare(A))
    return out


RUNNERS = {
    "chevalley": _chevalley,
    "universal": _universal,
    "zeta": _zeta,
    "diag": _diag,
    "classify": _classify,
    "out": _out,
}


def run_suites(names: list[str], algebras: list[Algebra], seed: int) -> Report:
    total = Report("+".join(names), seed)
    for name in names:
        for rep in RUNNERS[name](algebras, seed):
            total.extend(rep, prefix=f"{rep.suite}/")
    return total


def cmd_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    specs = args.algebra or list(CATALOG)
    algebras = [_algebra(s) for s in specs]
    start = time.perf_counter()
    report = run_suites(names, algebras, args.seed)
    _emit(report, args)
    if not args.json:
        print(f"elapsed {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# bracket


def _read(arg: str) -> str:
    path = Path(arg)
    if not path.is_file():
        raise ParseError(f"{arg!r} is not a file")
    return path.read_text()


def cmd_bracket(args) -> int:
    A = _algebra(args.algebra)
    if args.kind == "delta":
        S = UniversalForms(A, args.cap)
        ops = [S.d if a == "d" else parse_form_derivation(_read(a), S) for a in args.operands]
        print(format_form_derivation(delta_bracket(*ops)), end="")
        return EXIT_OK
    cx = ChevalleyComplex(A)
    ops = [cx.identity() if a == "Id" else parse_cochain(_read(a), cx) for a in args.operands]
    for c in ops:
        if c.kind != "Der":
            raise ParseError("brackets take Der-valued cochains")
    fn = fn_bracket if args.kind == "fn" else nr_bracket
    print(format_cochain(fn(*ops)), end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# morita


def cmd_morita(args) -> int:
    from .derforms import morita_instance_check

    A = _algebra(args.algebra)
    report = morita_instance_check(A, args.N, args.max_dim)
    _emit(report, args)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dercalc", description="Exact derivation-based differential calculus.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="dimensions of Z(A), Der(A), Int(A), Out(A) and the Chevalley complex")
    p.add_argument("algebra", help="builtin (mat(2), dual, functions(2), triangular(2), amplify(dual,2)) or a file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("check", help="run identity suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--algebra", action="append", help="repeatable; defaults to M2, D2, F2, T2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--output", help="write the report to a file instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bracket", help="fn / nr bracket of cochains, delta bracket of form derivations")
    p.add_argument("kind", choices=("fn", "nr", "delta"))
    p.add_argument("operands", nargs=2, help="files, or 'Id' (fn, nr) / 'd' (delta)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--cap", type=int, default=3, help="degree cap for universal forms")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("morita", help="compare C_Z(Out, Z) for A and Mat_N(A)")
    p.add_argument("algebra")
    p.add_argument("N", type=int)
    p.add_argument("--max-dim", type=int, default=16)
    p.add_argument("--json", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_morita)
    return parser


def main(argv: list[str] | None = None) -> int:
    from .derforms import ResourceGuard

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationFailure as e:
        print(f"invalid algebra: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ResourceGuard, CapError) as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (FormError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
