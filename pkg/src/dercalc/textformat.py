"""Line-based text formats for algebras, cochains and form-valued derivations.

Every file is a list of ``key: value`` lines; ``#`` starts a comment.
Rationals are written as ``p/q`` or plain integers, never as floats.

Algebra::

    name: dual
    basis: 1 eps
    unit: 1 0
    const: 0 1 1 1        # e_0 e_1 = 1 * e_1

Cochain (``kind`` is ``A`` or ``Der``; omitted tuples are zero)::

    degree: 1
    kind: Der
    value: 0 : 1 0 0      # increasing tuple, then the coefficient vector

Form derivation (words are an algebra index followed by lift indices)::

    degree: 1
    image: 1 : 0 0 = 1    # K(e_1) contains 1 * (e_0 d e_lift0)
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .algebra import Algebra, builtin
from .chevalley import A_VALUED, DER_VALUED, ChevalleyComplex, Cochain
from .forms import FormDerivation, UniversalForms


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def parse_rational(tok: str, line: int | None = None) -> Fraction:
    if "." in tok or "e" in tok.lower():
        raise ParseError(f"{tok!r} is not an exact rational", line)
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{tok!r} is not a rational", line) from None


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {body!r}", no)
        yield no, key.strip().lower(), value.strip()


def _ints(s: str, no: int) -> list[int]:
    try:
        return [int(t) for t in s.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {s!r}", no) from None


# ---------------------------------------------------------------------------
# algebras


def parse_algebra(text: str) -> Algebra:
    name, basis, unit, dim = "A", None, None, None
    triples = []
    for no, key, value in _lines(text):
        if key == "name":
            name = value
        elif key == "dim":
            dim = _ints(value, no)
            if len(dim) != 1 or dim[0] < 1:
                raise ParseError("dim must be one positive integer", no)
            dim = dim[0]
        elif key == "basis":
            basis = value.split()
        elif key == "unit":
            unit = [parse_rational(t, no) for t in value.split()]
        elif key == "const":
            toks = value.split()
            if len(toks) != 4:
                raise ParseError("const needs 'i j k coefficient'", no)
            i, j, k = _ints(" ".join(toks[:3]), no)
            triples.append((no, i, j, k, parse_rational(toks[3], no)))
        else:
            raise ParseError(f"unknown key {key!r}", no)
    if basis is None:
        if dim is None:
            raise ParseError("algebra needs 'basis' or 'dim'")
        basis = [f"e{i}" for i in range(dim)]
    if dim is not None and dim != len(basis):
        raise ParseError(f"dim {dim} does not match {len(basis)} basis names")
    n = len(basis)
    if unit is None:
        raise ParseError("algebra needs a 'unit' line")
    if len(unit) != n:
        raise ParseError(f"unit has {len(unit)} entries, expected {n}")
    for no, i, j, k, _ in triples:
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise ParseError("structure constant index out of range", no)
    return Algebra.from_triples(name, basis, [t[1:] for t in triples], unit)


def format_algebra(A: Algebra) -> str:
    out = [f"name: {A.name}", f"dim: {A.dim}", "basis: " + " ".join(A.basis_names),
           "unit: " + " ".join(format_rational(x) for x in A.unit)]
    for i in range(A.dim):
        for j in range(A.dim):
            for k, c in enumerate(A.constants[i][j]):
                if c:
                    out.append(f"const: {i} {j} {k} {format_rational(c)}")
    return "\n".join(out) + "\n"


def load_algebra(spec: str) -> Algebra:
    """A builtin name such as ``mat(2)`` or the path of an algebra file."""
    path = Path(spec)
    if path.is_file():
        return parse_algebra(path.read_text())
    try:
        return builtin(spec)
    except (KeyError, ValueError):
        raise ParseError(f"{spec!r} is neither a file nor a builtin algebra") from None


# ---------------------------------------------------------------------------
# cochains


def parse_cochain(text: str, cx: ChevalleyComplex) -> Cochain:
    degree, kind, values = None, DER_VALUED, {}
    for no, key, value in _lines(text):
        if key == "degree":
            d = _ints(value, no)
            if len(d) != 1 or d[0] < 0:
                raise ParseError("degree must be one non-negative integer", no)
            degree = d[0]
        elif key == "kind":
            if value not in (A_VALUED, DER_VALUED):
                raise ParseError(f"kind must be {A_VALUED!r} or {DER_VALUED!r}", no)
            kind = value
        elif key == "value":
            idx, sep, coeffs = value.partition(":")
            if not sep:
                raise ParseError("value needs 'tuple : coefficients'", no)
            t = tuple(_ints(idx, no))
            if t in values:
                raise ParseError(f"tuple {t} given twice", no)
            values[t] = ([parse_rational(c, no) for c in coeffs.split()], no)
        elif key == "algebra":
            pass
        else:
            raise ParseError(f"unknown key {key!r}", no)
    if degree is None:
        raise ParseError("cochain needs a 'degree' line")
    vd = cx.value_dim(kind)
    clean = {}
    for t, (v, no) in values.items():
        if len(t) != degree or list(t) != sorted(set(t)) or any(not 0 <= x < cx.m for x in t):
            raise ParseError(f"{t} is not an increasing {degree}-tuple of indices below {cx.m}", no)
        if len(v) != vd:
            raise ParseError(f"expected {vd} coefficients, got {len(v)}", no)
        clean[t] = v
    return cx.from_dict(degree, kind, clean)


def format_cochain(c: Cochain) -> str:
    out = [f"algebra: {c.cx.A.name}", f"degree: {c.degree}", f"kind: {c.kind}"]
    for t, v in zip(c.cx.tuples(c.degree), c.values):
        if any(v):
            key = " ".join(map(str, t))
            coeffs = " ".join(format_rational(x) for x in v)
            out.append(f"value: {key} : {coeffs}" if key else f"value: : {coeffs}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# derivations into universal forms


def parse_form_derivation(text: str, S: UniversalForms) -> FormDerivation:
    degree = None
    images = [dict() for _ in range(S.n)]
    for no, key, value in _lines(text):
        if key == "degree":
            d = _ints(value, no)
            if len(d) != 1 or d[0] < 0:
                raise ParseError("degree must be one non-negative integer", no)
            degree = d[0]
        elif key == "image":
            head, sep, rest = value.partition(":")
            word, sep2, coeff = rest.partition("=")
            if not sep or not sep2:
                raise ParseError("image needs 'index : word = coefficient'", no)
            idx = _ints(head, no)
            w = tuple(_ints(word, no))
            if len(idx) != 1 or not 0 <= idx[0] < S.n:
                raise ParseError("image index out of range", no)
            if not w or not 0 <= w[0] < S.n or any(not 0 <= j < S.nbar for j in w[1:]):
                raise ParseError(f"bad word {w}", no)
            images[idx[0]][w] = images[idx[0]].get(w, 0) + parse_rational(coeff.strip(), no)
        elif key in ("algebra", "kind"):
            pass
        else:
            raise ParseError(f"unknown key {key!r}", no)
    if degree is None:
        raise ParseError("form derivation needs a 'degree' line")
    for img in images:
        for w in img:
            if len(w) != degree + 1:
                raise ParseError(f"word {w} does not have degree {degree}")
    return FormDerivation(S, degree, images)


def format_form_derivation(K: FormDerivation) -> str:
    out = [f"algebra: {K.space.A.name}", "kind: form-derivation", f"degree: {K.degree}"]
    for i, img in enumerate(K.images):
        for w in sorted(img):
            out.append(f"image: {i} : {' '.join(map(str, w))} = {format_rational(img[w])}")
    return "\n".join(out) + "\n"
