"""Universal differential forms in the normalized model A (x) Abar^(x)k.

A basis word ``(i0, j1, ..., jk)`` stands for ``e_i0 d(f_j1) ... d(f_jk)``
where ``f_j`` runs over a basis of A whose classes span Abar = A / Q.1.
Forms are kept as sparse ``{word: coefficient}`` dicts internally; vectors
and matrices are only materialized up to the degree cap.
"""

from __future__ import annotations

import random
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Sequence

from .algebra import Algebra, check_algebra_hom
from .graded import GradedOperator, graded_sign
from .linalg import ONE, ZERO, Matrix, Q, Vector, kernel_basis, unit_vec, vec

Word = tuple[int, ...]


class CapError(ValueError):
    """A computation would need forms above the configured degree cap."""


class FormError(ValueError):
    pass


def _acc(out: dict, key, c) -> None:
    if c:
        v = out.get(key, ZERO) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)


def _clean(f: dict) -> dict:
    return {w: c for w, c in f.items() if c}


def _add(f: dict, g: dict, c=1) -> dict:
    out = dict(f)
    for w, x in g.items():
        _acc(out, w, c * x)
    return out


def _scale(f: dict, c) -> dict:
    if not c:
        return {}
    return {w: c * x for w, x in f.items()}


class UniversalForms:
    """Omega^k(A) for k = 0..cap with product, d and derivation calculus."""

    def __init__(self, A: Algebra, cap: int = 3):
        if cap < 1:
            raise ValueError("degree cap must be at least 1")
        self.A = A
        self.cap = cap
        self.n = A.dim
        u = A.unit
        nz = [i for i, x in enumerate(u) if x]
        if not nz:
            raise FormError("algebra has zero unit")
        self.pivot = nz[0]
        self.lifts = tuple(i for i in range(self.n) if i != self.pivot)
        self.nbar = len(self.lifts)
        self._unit = u

    def __repr__(self) -> str:
        return f"UniversalForms({self.A.name}, cap={self.cap})"

    # bookkeeping ----------------------------------------------------------------
    def dim(self, k: int) -> int:
        if k < 0 or k > self.cap:
            return 0
        return self.n * self.nbar ** k

    @lru_cache(maxsize=None)
    def words(self, k: int) -> tuple[Word, ...]:
        if k < 0 or k > self.cap:
            return ()
        return tuple((i,) + rest for i in range(self.n) for rest in product(range(self.nbar), repeat=k))

    @lru_cache(maxsize=None)
    def _windex(self, k: int) -> dict:
        return {w: i for i, w in enumerate(self.words(k))}

    def _guard(self, k: int) -> None:
        if k > self.cap:
            raise CapError(f"degree {k} exceeds cap {self.cap}")

    @lru_cache(maxsize=None)
    def _bar_basis(self, i: int) -> tuple[tuple[int, object], ...]:
        """Coordinates of the class of e_i in Abar, as (index, coeff) pairs."""
        u, p = self._unit, self.pivot
        t = Q(1) / u[p] if i == p else ZERO
        out = []
        for idx, j in enumerate(self.lifts):
            c = (ONE if i == j else ZERO) - t * u[j]
            if c:
                out.append((idx, c))
        return tuple(out)

    def bar(self, a: Sequence) -> Vector:
        out = [ZERO] * self.nbar
        for i, x in enumerate(a):
            if x:
                for t, c in self._bar_basis(i):
                    out[t] += x * c
        return tuple(out)

    # sparse primitives ----------------------------------------------------------
    @lru_cache(maxsize=None)
    def _right_word(self, word: Word, s: int) -> tuple:
        """word . e_s as a tuple of (word, coeff) pairs."""
        A = self.A
        if len(word) == 1:
            prod = A.multiply(unit_vec(self.n, word[0]), unit_vec(self.n, s))
            return tuple(((i,), c) for i, c in enumerate(prod) if c)
        head, last = word[:-1], self.lifts[word[-1]]
        out: dict = {}
        # (w' d a) b = w' d(ab) - (w' a) db
        prod = A.multiply(unit_vec(self.n, last), unit_vec(self.n, s))
        for t, c in enumerate(self.bar(prod)):
            _acc(out, head + (t,), c)
        for v, cv in self._right_word(head, last):
            for t, c in self._bar_basis(s):
                _acc(out, v + (t,), -cv * c)
        return tuple(out.items())

    def _mul(self, f: dict, g: dict) -> dict:
        out: dict = {}
        for v, cv in g.items():
            b0, tail = v[0], v[1:]
            for w, cw in f.items():
                c = cw * cv
                for u, cu in self._right_word(w, b0):
                    _acc(out, u + tail, c * cu)
        return out

    def _left(self, a: Sequence, f: dict) -> dict:
        out: dict = {}
        A = self.A
        for w, c in f.items():
            prod = A.multiply(a, unit_vec(self.n, w[0]))
            for i, x in enumerate(prod):
                _acc(out, (i,) + w[1:], c * x)
        return out

    def _right(self, f: dict, b: Sequence) -> dict:
        out: dict = {}
        for s, x in enumerate(b):
            if x:
                for w, c in f.items():
                    for u, cu in self._right_word(w, s):
                        _acc(out, u, c * x * cu)
        return out

    def _d(self, f: dict) -> dict:
        out: dict = {}
        for w, c in f.items():
            bars = self._bar_basis(w[0])
            for s, us in enumerate(self._unit):
                if us:
                    for t, bt in bars:
                        _acc(out, (s, t) + w[1:], c * us * bt)
        return out

    def _element(self, a: Sequence) -> dict:
        return {(i,): Q(x) for i, x in enumerate(a) if x}

    def _exact(self, a: Sequence) -> dict:
        return self._d(self._element(a))

    # public form API --------------------------------------------------------------
    def form(self, degree: int, coeffs: dict | None = None) -> "UForm":
        return UForm(self, degree, coeffs or {})

    def element(self, a: Sequence) -> "UForm":
        return UForm(self, 0, self._element(vec(a)))

    def exact(self, a: Sequence) -> "UForm":
        return self.element(a).d()

    def from_vector(self, k: int, v: Sequence) -> "UForm":
        self._guard(k)
        ws = self.words(k)
        if len(v) != len(ws):
            raise FormError("vector length does not match the form space")
        return UForm(self, k, {w: Q(x) for w, x in zip(ws, v) if x})

    def basis_form(self, k: int, i: int) -> "UForm":
        return UForm(self, k, {self.words(k)[i]: Q(1)})

    def basis(self, k: int) -> list["UForm"]:
        return [self.basis_form(k, i) for i in range(self.dim(k))]

    def random(self, rng: random.Random, k: int, lo: int = -3, hi: int = 3) -> "UForm":
        return self.from_vector(k, [rng.randint(lo, hi) for _ in range(self.dim(k))])

    def word_label(self, w: Word) -> str:
        names = self.A.basis_names
        head = names[w[0]]
        return " ".join([head] + [f"d{names[self.lifts[j]]}" for j in w[1:]])

    # operators as tables -----------------------------------------------------------
    def operator(self, degree: int, fn: Callable[[dict, int], dict]) -> GradedOperator:
        """Materialize a degree-``degree`` map on every source degree that fits under the cap."""
        maps = {}
        for l in range(-2, self.cap + 1):
            t = l + degree
            if t > self.cap:
                continue
            rows = self.dim(t)
            if l < 0 or t < 0:
                maps[l] = Matrix.zeros(rows, self.dim(l))
                continue
            idx = self._windex(t) if rows else {}
            cols = []
            for w in self.words(l):
                img = fn({w: Q(1)}, l)
                col = [ZERO] * rows
                for u, c in img.items():
                    if len(u) - 1 != t:
                        raise FormError("operator image has wrong degree")
                    col[idx[u]] += c
                cols.append(col)
            maps[l] = Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)
        return GradedOperator(degree, maps)

    @cached_property
    def d_operator(self) -> GradedOperator:
        return self.operator(1, lambda f, l: self._d(f))

    def left_operator(self, a: Sequence) -> GradedOperator:
        return self.operator(0, lambda f, l: self._left(a, f))

    # derivations into forms -----------------------------------------------------------
    def derivation(self, degree: int, images: Sequence, check: bool = True) -> "FormDerivation":
        return FormDerivation(self, degree, images, check)

    @property
    def d(self) -> "FormDerivation":
        return self.derivation(1, [self._exact(unit_vec(self.n, i)) for i in range(self.n)], check=False)

    def algebra_derivation(self, X: Matrix) -> "FormDerivation":
        """A derivation of A (n x n matrix) as a derivation into Omega^0."""
        return self.derivation(0, [self._element(X.column(i)) for i in range(self.n)])

    def inner(self, m: "UForm") -> "FormDerivation":
        """ad_m : a -> m a - a m."""
        imgs = []
        for i in range(self.n):
            e = unit_vec(self.n, i)
            imgs.append(_add(self._right(m.coeffs, e), self._left(e, m.coeffs), -1))
        return self.derivation(m.degree, imgs, check=False)

    @lru_cache(maxsize=None)
    def derivation_basis(self, k: int) -> tuple["FormDerivation", ...]:
        """Basis of Der(A, Omega^k) by solving the Leibniz system."""
        self._guard(k)
        n, dk = self.n, self.dim(k)
        idx = self._windex(k)
        C = self.A.constants
        eqs = n * n * dk
        cols = []
        for s in range(n):
            for w in self.words(k):
                col: dict = {}
                base = {w: Q(1)}
                for i in range(n):
                    for j in range(n):
                        off = (i * n + j) * dk
                        c = C[i][j][s]
                        if c:
                            _acc(col, off + idx[w], c)
                        if s == i:
                            for u, x in self._right(base, unit_vec(n, j)).items():
                                _acc(col, off + idx[u], -x)
                        if s == j:
                            for u, x in self._left(unit_vec(n, i), base).items():
                                _acc(col, off + idx[u], -x)
                cols.append(col)
        ker = kernel_basis(Matrix.from_sparse_columns(cols, eqs))
        out = []
        ws = self.words(k)
        for v in ker.basis:
            imgs = [{ws[p]: x for p, x in enumerate(v[s * dk:(s + 1) * dk]) if x} for s in range(n)]
            out.append(self.derivation(k, imgs, check=False))
        return tuple(out)

    def random_derivation(self, rng: random.Random, k: int, lo: int = -3, hi: int = 3) -> "FormDerivation":
        basis = self.derivation_basis(k)
        imgs = [dict() for _ in range(self.n)]
        for K in basis:
            c = rng.randint(lo, hi)
            if c:
                for i in range(self.n):
                    imgs[i] = _add(imgs[i], K.images[i], c)
        return self.derivation(k, imgs, check=False)

    # graded derivation property ---------------------------------------------------------
    def generators(self) -> list[dict]:
        """Algebra basis and exact forms of the lifts; they generate Omega(A) as an algebra."""
        gens = [self._element(unit_vec(self.n, i)) for i in range(self.n)]
        gens += [self._exact(unit_vec(self.n, j)) for j in self.lifts]
        return gens

    def leibniz_defect(self, D: GradedOperator):
        """First (generator, basis word) pair where D fails graded Leibniz, or None."""
        r = D.degree
        for g in self.generators():
            p = len(next(iter(g))) - 1
            if p not in D.maps:
                continue
            Dg = self._apply(D, g, p)
            for q in range(self.cap + 1):
                if p + q + r > self.cap or p + q not in D.maps or q not in D.maps:
                    continue
                for w in self.words(q):
                    psi = {w: Q(1)}
                    lhs = self._apply(D, self._mul(g, psi), p + q)
                    rhs = _add(self._mul(Dg, psi), self._mul(g, self._apply(D, psi, q)), graded_sign(r, p))
                    if _clean(lhs) != _clean(rhs):
                        return {"generator_degree": p, "word": list(w)}
        return None

    def _apply(self, D: GradedOperator, f: dict, l: int) -> dict:
        t = l + D.degree
        if t < 0:
            return {}
        v = [ZERO] * self.dim(l)
        idx = self._windex(l)
        for w, c in f.items():
            v[idx[w]] += c
        out = D.maps[l].apply(v)
        ws = self.words(t)
        return {ws[i]: x for i, x in enumerate(out) if x}

    def vector(self, f: dict, k: int) -> Vector:
        v = [ZERO] * self.dim(k)
        idx = self._windex(k)
        for w, c in f.items():
            v[idx[w]] += c
        return tuple(v)


class UForm:
    """An element of Omega^k(A)."""

    __slots__ = ("space", "degree", "coeffs")

    def __init__(self, space: UniversalForms, degree: int, coeffs: dict):
        space._guard(degree)
        for w in coeffs:
            if len(w) != degree + 1:
                raise FormError(f"word {w} does not have degree {degree}")
        self.space = space
        self.degree = degree
        self.coeffs = _clean(coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"UForm(0, degree={self.degree})"
        terms = [f"{c}*[{self.space.word_label(w)}]" for w, c in sorted(self.coeffs.items())]
        return " + ".join(terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UForm):
            return NotImplemented
        return self.space is other.space and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __add__(self, other: "UForm") -> "UForm":
        if other.degree != self.degree:
            raise FormError("cannot add forms of different degree")
        return UForm(self.space, self.degree, _add(self.coeffs, other.coeffs))

    def __sub__(self, other: "UForm") -> "UForm":
        if other.degree != self.degree:
            raise FormError("cannot subtract forms of different degree")
        return UForm(self.space, self.degree, _add(self.coeffs, other.coeffs, -1))

    def __neg__(self) -> "UForm":
        return self.scale(-1)

    def scale(self, c) -> "UForm":
        return UForm(self.space, self.degree, _scale(self.coeffs, Q(c)))

    def __mul__(self, other: "UForm") -> "UForm":
        return UForm(self.space, self.degree + other.degree, self.space._mul(self.coeffs, other.coeffs))

    def left(self, a: Sequence) -> "UForm":
        return UForm(self.space, self.degree, self.space._left(vec(a), self.coeffs))

    def right(self, b: Sequence) -> "UForm":
        return UForm(self.space, self.degree, self.space._right(self.coeffs, vec(b)))

    def d(self) -> "UForm":
        return UForm(self.space, self.degree + 1, self.space._d(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def vector(self) -> Vector:
        return self.space.vector(self.coeffs, self.degree)


class FormDerivation:
    """A derivation K : A -> Omega^k(A), stored by its values on the basis of A."""

    def __init__(self, space: UniversalForms, degree: int, images: Sequence, check: bool = True):
        if len(images) != space.n:
            raise FormError("need one image per algebra basis element")
        imgs = []
        for f in images:
            f = f.coeffs if isinstance(f, UForm) else _clean(dict(f))
            for w in f:
                if len(w) != degree + 1:
                    raise FormError("image has the wrong degree")
            imgs.append(f)
        self.space = space
        self.degree = degree
        self.images = tuple(imgs)
        if check:
            bad = self.leibniz_defect()
            if bad is not None:
                raise FormError(f"not a derivation: Leibniz fails at basis pair {bad}")

    def __repr__(self) -> str:
        return f"FormDerivation(degree={self.degree}, algebra={self.space.A.name})"

    def leibniz_defect(self):
        S = self.space
        n = S.n
        for i in range(n):
            for j in range(n):
                ei, ej = unit_vec(n, i), unit_vec(n, j)
                lhs = self._of(S.A.multiply(ei, ej))
                rhs = _add(S._right(self.images[i], ej), S._left(ei, self.images[j]))
                if _clean(lhs) != _clean(rhs):
                    return (i, j)
        return None

    def _of(self, a: Sequence) -> dict:
        out: dict = {}
        for i, x in enumerate(a):
            if x:
                for w, c in self.images[i].items():
                    _acc(out, w, x * c)
        return out

    def __call__(self, a: Sequence) -> UForm:
        return UForm(self.space, self.degree, self._of(vec(a)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormDerivation):
            return NotImplemented
        return self.space is other.space and self.degree == other.degree and self.images == other.images

    def __hash__(self):
        return hash((self.degree, tuple(frozenset(f.items()) for f in self.images)))

    def _combine(self, other: "FormDerivation", c) -> "FormDerivation":
        if self.degree != other.degree:
            raise FormError("degrees differ")
        return FormDerivation(
            self.space, self.degree, [_add(f, g, c) for f, g in zip(self.images, other.images)], check=False
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "FormDerivation":
        c = Q(c)
        return FormDerivation(self.space, self.degree, [_scale(f, c) for f in self.images], check=False)

    def is_zero(self) -> bool:
        return not any(self.images)

    @property
    def vector(self) -> Vector:
        return tuple(x for f in self.images for x in self.space.vector(f, self.degree))

    def compose(self, op: Callable[[dict], dict], degree: int) -> "FormDerivation":
        """op o K, for a map op on sparse forms raising degree by ``degree - self.degree``."""
        return FormDerivation(self.space, degree, [op(f) for f in self.images], check=False)


# ---------------------------------------------------------------------------
# contraction, Lie derivative and brackets


def _j(K: FormDerivation, f: dict) -> dict:
    """j_K on a sparse form: the algebraic derivation of degree deg K - 1 extending K o d."""
    S = K.space
    k = K.degree - 1
    out: dict = {}
    for w, c in f.items():
        l = len(w) - 1
        for i in range(1, l + 1):
            sign = graded_sign(i - 1, k)
            prefix = {w[:i]: c * sign}
            mid = K.images[S.lifts[w[i]]]
            if not mid:
                continue
            tail = w[i + 1:]
            for u, x in S._mul(prefix, mid).items():
                _acc(out, u + tail, x)
    return out


def _lie(K: FormDerivation, f: dict) -> dict:
    S = K.space
    k = K.degree
    first = _j(K, S._d(f))
    second = S._d(_j(K, f))
    return _add(first, second, -graded_sign(k - 1, 1))


def j_X(X, omega: UForm) -> UForm:
    """Contraction with a derivation of A (matrix or degree-0 FormDerivation)."""
    S = omega.space
    K = X if isinstance(X, FormDerivation) else S.algebra_derivation(X)
    if K.degree != 0:
        raise FormError("j_X needs a derivation into Omega^0")
    return j_K(K, omega)


def j_K(K: FormDerivation, omega: UForm) -> UForm:
    t = omega.degree + K.degree - 1
    if t < 0:
        return UForm(omega.space, t, {})
    return UForm(omega.space, t, _j(K, omega.coeffs))


def uf_lie(K: FormDerivation, omega: UForm) -> UForm:
    """L_K = [j_K, d]."""
    S = omega.space
    S._guard(omega.degree + K.degree)
    S._guard(omega.degree + 1)
    return UForm(S, omega.degree + K.degree, _lie(K, omega.coeffs))


def contraction_operator(K: FormDerivation) -> GradedOperator:
    return K.space.operator(K.degree - 1, lambda f, l: _j(K, f))


def lie_operator(K: FormDerivation) -> GradedOperator:
    S = K.space
    return contraction_operator(K).commutator(S.d_operator)


def delta_bracket(K: FormDerivation, L: FormDerivation) -> FormDerivation:
    """[K,L]^Delta = j_K o L - (-1)^{kl} j_L o K, with k, l the contraction degrees."""
    S = K.space
    k, l = K.degree - 1, L.degree - 1
    deg = k + l + 1
    S._guard(deg)
    s = graded_sign(k, l)
    imgs = [_add(_j(K, Lf), _j(L, Kf), -s) for Kf, Lf in zip(K.images, L.images)]
    return FormDerivation(S, deg, imgs, check=False)


def uf_fn_bracket(K: FormDerivation, L: FormDerivation) -> FormDerivation:
    """Froelicher-Nijenhuis bracket: [K,L](a) = L_K(L(a)) - (-1)^{kl} L_L(K(a))."""
    S = K.space
    k, l = K.degree, L.degree
    S._guard(k + l)
    s = graded_sign(k, l)
    imgs = [_add(_lie(K, Lf), _lie(L, Kf), -s) for Kf, Lf in zip(K.images, L.images)]
    out = FormDerivation(S, k + l, imgs, check=False)
    bad = out.leibniz_defect()
    if bad is not None:
        raise FormError(f"bracket failed Leibniz at {bad}")
    return out


def contract_into(L: FormDerivation, K: FormDerivation) -> FormDerivation:
    """j_L o K."""
    S = K.space
    deg = K.degree + L.degree - 1
    S._guard(deg)
    return FormDerivation(S, deg, [_j(L, f) for f in K.images], check=False)


def decompose_uf_derivation(S: UniversalForms, D: GradedOperator):
    """Split a graded derivation D of degree k as L_K + j_L.

    Returns (K, L, zero_commutator) where the last flag reports whether
    [D, d] vanishes on every degree where it can be computed.
    """
    k = D.degree
    bad = S.leibniz_defect(D)
    if bad is not None:
        raise FormError(f"input is not a graded derivation: {bad}")
    if k + 1 > S.cap:
        raise CapError("need Omega^{k+1} to recover the algebraic part")
    n = S.n
    K = FormDerivation(S, k, [S._apply(D, S._element(unit_vec(n, i)), 0) for i in range(n)])
    LK = lie_operator(K)
    rest = D - LK
    L = FormDerivation(S, k + 1, [S._apply(rest, S._exact(unit_vec(n, i)), 1) for i in range(n)])
    rebuilt = LK + contraction_operator(L)
    if not rebuilt.equals(D):
        raise FormError("reassembly failed")
    flat = D.commutator(S.d_operator).is_zero()
    return K, L, flat


# ---------------------------------------------------------------------------
# functoriality


class FormMap:
    """Omega(f) : Omega(A) -> Omega(B) for an algebra homomorphism f."""

    def __init__(self, f: Matrix, SA: UniversalForms, SB: UniversalForms):
        if not check_algebra_hom(f, SA.A, SB.A):
            raise FormError("f is not an algebra homomorphism")
        self.f = f
        self.SA = SA
        self.SB = SB
        self._img = [f.column(i) for i in range(SA.n)]
        self._lift_bar = [SB.bar(self._img[j]) for j in SA.lifts]

    def apply_sparse(self, g: dict) -> dict:
        out: dict = {}
        for w, c in g.items():
            head = self._img[w[0]]
            terms = [((i,), c * x) for i, x in enumerate(head) if x]
            for j in w[1:]:
                b = self._lift_bar[j]
                terms = [(u + (t,), x * y) for u, x in terms for t, y in enumerate(b) if y]
            for u, x in terms:
                _acc(out, u, x)
        return out

    def __call__(self, omega: UForm) -> UForm:
        return UForm(self.SB, omega.degree, self.apply_sparse(omega.coeffs))

    def operator(self) -> dict[int, Matrix]:
        maps = {}
        for k in range(min(self.SA.cap, self.SB.cap) + 1):
            cols = [self.SB.vector(self.apply_sparse({w: ONE}), k) for w in self.SA.words(k)]
            maps[k] = Matrix.from_columns(cols, self.SB.dim(k)) if cols else Matrix.zeros(self.SB.dim(k), 0)
        return maps


def omega_f(f: Matrix, SA: UniversalForms, SB: UniversalForms, omega: UForm) -> UForm:
    return FormMap(f, SA, SB)(omega)


def f_related(K: FormDerivation, Kp: FormDerivation, F: FormMap) -> bool:
    """K' o f = Omega(f) o K on the basis of A."""
    if K.degree != Kp.degree:
        return False
    for i in range(F.SA.n):
        lhs = Kp._of(F._img[i])
        rhs = F.apply_sparse(K.images[i])
        if _clean(lhs) != _clean(rhs):
            return False
    return True


def _ops_commute(F: FormMap, PA: GradedOperator, PB: GradedOperator) -> bool:
    """P_B o Omega(f) = Omega(f) o P_A on every source degree where both are defined."""
    maps = F.operator()
    r = PA.degree
    for l in PA.maps.keys() & PB.maps.keys() & maps.keys():
        t = l + r
        if l < 0 or t not in maps:
            continue
        if PB.maps[l] @ maps[l] != maps[t] @ PA.maps[l]:
            return False
    return True


# ---------------------------------------------------------------------------
# suites


def _runner(rep, name: str, seed: int, instances: int):
    def run(id: str, anchor: str, body):
        for i in range(instances):
            rng = random.Random(f"{seed}:{id}:{i}")
            bad = body(rng)
            if bad is not None:
                return rep.add(id, anchor, False, {"algebra": name, "instance": i, **bad})
        return rep.add(id, anchor, True)

    return run


def _op_eq(P: GradedOperator, Q_: GradedOperator):
    l = P.mismatch(Q_)
    return None if l is None else {"source_degree": l}


def _der_eq(K: FormDerivation, L: FormDerivation):
    if K.degree != L.degree:
        return {"degrees": [K.degree, L.degree]}
    for i, (f, g) in enumerate(zip(K.images, L.images)):
        if f != g:
            return {"basis_element": i}
    return None


def universal_suite(A: Algebra, seed: int = 0, instances: int = 10, cap: int = 3):
    """Calculus identities on Omega(A), all as exact operator tables up to the cap."""
    from .report import Report

    S = UniversalForms(A, cap)
    rep = Report(f"universal[{A.name}]", seed)
    run = _runner(rep, A.name, seed, instances)
    d = S.d_operator
    n = S.n

    rep.add("dimension-count", "dim Ω^k = n(n−1)^k",
            all(len(S.words(k)) == n * (n - 1) ** k for k in range(cap + 1)))
    rep.add("d-squared", "d∘d = 0", (d @ d).is_zero())
    rep.add("d-leibniz", "d is a graded derivation of degree 1", S.leibniz_defect(d) is None)
    jd = contraction_operator(S.d)
    rep.add("contraction-with-d", "j_d ω = (deg ω) ω",
            all(jd.maps[k] == Matrix.identity(S.dim(k)).scale(k) for k in range(cap + 1)))
    rep.add("lie-of-d", "L_d = d", lie_operator(S.d).equals(d))

    def assoc(rng):
        a, b, c = (S.random(rng, rng.randint(0, 1)) for _ in range(3))
        if a.degree + b.degree + c.degree > cap:
            return None
        return None if (a * b) * c == a * (b * c) else {"degrees": [a.degree, b.degree, c.degree]}

    def derivation_ops(rng):
        K = S.random_derivation(rng, rng.randint(0, 2))
        for label, P in (("contraction", contraction_operator(K)), ("lie", lie_operator(K))):
            bad = S.leibniz_defect(P)
            if bad is not None:
                return {"operator": label, "degree": K.degree, **bad}
        return None

    def contraction_anti(rng):
        X = S.random_derivation(rng, 0)
        Y = S.random_derivation(rng, 0)
        jX, jY = contraction_operator(X), contraction_operator(Y)
        P = jX @ jY + jY @ jX
        return None if P.is_zero() else {"note": "j_X j_Y + j_Y j_X != 0"}

    def delta_hom(rng):
        K = S.random_derivation(rng, rng.randint(1, 2))
        L = S.random_derivation(rng, rng.randint(0, 3 - K.degree) if K.degree < 2 else rng.randint(0, 1))
        if K.degree + L.degree - 1 > cap:
            return None
        lhs = contraction_operator(K).commutator(contraction_operator(L))
        return _op_eq(lhs, contraction_operator(delta_bracket(K, L)))

    def fn_hom(rng):
        K = S.random_derivation(rng, rng.randint(0, 1))
        L = S.random_derivation(rng, rng.randint(0, 1))
        lhs = lie_operator(K).commutator(lie_operator(L))
        return _op_eq(lhs, lie_operator(uf_fn_bracket(K, L)))

    def d_central(rng):
        K = S.random_derivation(rng, rng.randint(0, 2))
        return None if uf_fn_bracket(K, S.d).is_zero() else {"degree": K.degree}

    def lie_contraction(rng):
        K = S.random_derivation(rng, rng.randint(0, 1))
        L = S.random_derivation(rng, rng.randint(1, 2))
        k, l = K.degree, L.degree - 1
        lhs = lie_operator(K).commutator(contraction_operator(L))
        rhs = contraction_operator(uf_fn_bracket(K, L)) - lie_operator(contract_into(L, K)).scale(graded_sign(k, l))
        return _op_eq(lhs, rhs)

    def combined(rng):
        k1, k2 = rng.randint(0, 1), rng.randint(0, 1)
        K1, K2 = S.random_derivation(rng, k1), S.random_derivation(rng, k2)
        L1, L2 = S.random_derivation(rng, k1 + 1), S.random_derivation(rng, k2 + 1)
        P1 = lie_operator(K1) + contraction_operator(L1)
        P2 = lie_operator(K2) + contraction_operator(L2)
        s = graded_sign(k1, k2)
        X = uf_fn_bracket(K1, K2) + contract_into(L1, K2) - contract_into(L2, K1).scale(s)
        Y = delta_bracket(L1, L2) + uf_fn_bracket(K1, L2) - uf_fn_bracket(K2, L1).scale(s)
        return _op_eq(P1.commutator(P2), lie_operator(X) + contraction_operator(Y))

    def roundtrip(rng):
        k = rng.randint(0, 1)
        K = S.random_derivation(rng, k)
        L = S.random_derivation(rng, k + 1)
        D = lie_operator(K) + contraction_operator(L)
        K2, L2, flat = decompose_uf_derivation(S, D)
        bad = _der_eq(K, K2) or _der_eq(L, L2)
        if bad is None and flat != L.is_zero():
            bad = {"note": "[D,d] = 0 disagrees with L = 0"}
        return bad

    run("product-associative", "(ω·η)·θ = ω·(η·θ)", assoc)
    run("derivation-operators", "j_K and L_K are graded derivations", derivation_ops)
    run("contractions-anticommute", "j_X j_Y + j_Y j_X = 0", contraction_anti)
    run("delta-homomorphism", "j_{[K,L]^Δ} = [j_K, j_L]", delta_hom)
    run("fn-homomorphism", "L_{[K,L]} = [L_K, L_L]", fn_hom)
    run("d-central", "[K, d] = 0", d_central)
    run("lie-contraction-commutator", "[L_K, j_L] = j([K,L]) − (−1)^{kl} L(j_L∘K)", lie_contraction)
    run("combined-bracket", "[L_{K1}+j_{L1}, L_{K2}+j_{L2}] = L(...) + j(...)", combined)
    run("decomposition-roundtrip", "D = L_K + j_L recovers (K, L)", roundtrip)

    K, L, flat = decompose_uf_derivation(S, d)
    rep.add("decompose-d", "d = L_d + j_0", K == S.d and L.is_zero() and flat)
    rng = random.Random(f"{seed}:algebraic")
    M = S.random_derivation(rng, 1)
    K, L, _ = decompose_uf_derivation(S, contraction_operator(M))
    rep.add("decompose-algebraic", "j_M has K = 0, L = M", K.is_zero() and L == M)
    return rep


def naturality_pairs(F: FormMap, rng: random.Random, degree: int):
    """f-related pairs (K, K') of the given degree built from d, inner derivations and kernels of f."""
    SA, SB = F.SA, F.SB
    pairs = []
    if degree == 1:
        pairs.append((SA.d, SB.d))
    m = SA.random(rng, degree)
    pairs.append((SA.inner(m), SB.inner(F(m))))
    if SB.dim(degree) == 0:
        # every K is related to zero when the target space vanishes
        K = SA.random_derivation(rng, degree)
        pairs.append((K, SB.derivation(degree, [{} for _ in range(SB.n)], check=False)))
    if degree == 0:
        for K in SA.derivation_basis(0):
            zero = SB.derivation(0, [{} for _ in range(SB.n)], check=False)
            if f_related(K, zero, F):
                pairs.append((K, zero))
    return pairs


def naturality_suite(homs, seed: int = 0, instances: int = 5, cap: int = 3):
    """Naturality of j, L and both brackets along algebra homomorphisms.

    ``homs`` is a list of (label, f, A, B).
    """
    from .report import Report

    rep = Report("naturality", seed)
    for label, f, A, B in homs:
        SA, SB = UniversalForms(A, cap), UniversalForms(B, cap)
        F = FormMap(f, SA, SB)
        ok_chain = _ops_commute(F, SA.d_operator, SB.d_operator)
        rep.add(f"{label}:chain-map", "Ω(f)∘d = d∘Ω(f)", ok_chain)
        run = _runner(rep, label, seed, instances)

        def pairs(rng, degrees=(0, 1, 2)):
            return naturality_pairs(F, rng, rng.choice(degrees))

        def contraction(rng):
            for K, Kp in pairs(rng):
                if not f_related(K, Kp, F):
                    return {"note": "constructed pair not f-related", "degree": K.degree}
                if not _ops_commute(F, contraction_operator(K), contraction_operator(Kp)):
                    return {"degree": K.degree}
            return None

        def lie(rng):
            for K, Kp in pairs(rng):
                if not _ops_commute(F, lie_operator(K), lie_operator(Kp)):
                    return {"degree": K.degree}
            return None

        def delta(rng):
            P1, P2 = pairs(rng, (1, 2)), pairs(rng, (0, 1))
            for K1, K1p in P1:
                for K2, K2p in P2:
                    if K1.degree + K2.degree - 1 > cap:
                        continue
                    if not f_related(contract_into(K1, K2), contract_into(K1p, K2p), F):
                        return {"which": "j_K1∘K2", "degrees": [K1.degree, K2.degree]}
                    if not f_related(delta_bracket(K1, K2), delta_bracket(K1p, K2p), F):
                        return {"which": "delta", "degrees": [K1.degree, K2.degree]}
            return None

        def fn(rng):
            P1, P2 = pairs(rng, (0, 1)), pairs(rng, (0, 1, 2))
            for K1, K1p in P1:
                for K2, K2p in P2:
                    if K1.degree + K2.degree > cap:
                        continue
                    if not f_related(uf_fn_bracket(K1, K2), uf_fn_bracket(K1p, K2p), F):
                        return {"degrees": [K1.degree, K2.degree]}
            return None

        run(f"{label}:contraction", "K, K' f-related ⇒ j_{K'}∘Ω(f) = Ω(f)∘j_K", contraction)
        run(f"{label}:delta", "f-related pairs have f-related j_{K1}∘K2 and [K1,K2]^Δ", delta)
        run(f"{label}:lie", "K, K' f-related ⇒ L_{K'}∘Ω(f) = Ω(f)∘L_K", lie)
        run(f"{label}:fn", "f-related pairs have f-related [K1,K2]", fn)
    return rep


def standard_homs():
    """The diagonal embedding Q x Q -> Mat_2 and the augmentation Q[eps] -> Q."""
    from .algebra import dual, functions, mat

    F2, M2, D2, QQ = functions(2), mat(2), dual(), functions(1)
    diag = Matrix.from_columns([unit_vec(4, 0), unit_vec(4, 3)], 4)
    aug = Matrix.from_columns([(1,), (0,)], 1)
    return [("F2->M2", diag, F2, M2), ("D2->Q", aug, D2, QQ)]
