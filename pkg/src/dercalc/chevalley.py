"""The Chevalley complex of Der(A) with values in A or in Der(A).

A cochain of degree k stores one value per strictly increasing k-tuple of
derivation-basis indices; everything else follows by skew multilinearity.
All sums over permutations are written as sums over increasing shuffles, so
no factorial normalisation ever appears.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Sequence

from .algebra import Algebra
from .graded import GradedOperator, graded_sign, operator_from_function, shuffles
from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Q,
    Subspace,
    Vector,
    kernel_basis,
    unit_vec,
    vec,
    zero_vec,
)

A_VALUED = "A"
DER_VALUED = "Der"


class CochainError(ValueError):
    pass


class Cochain:
    __slots__ = ("cx", "degree", "kind", "values")

    def __init__(self, cx: "ChevalleyComplex", degree: int, kind: str, values: Sequence[Sequence]):
        if kind not in (A_VALUED, DER_VALUED):
            raise CochainError(f"unknown codomain {kind!r}")
        if len(values) != cx.count(degree):
            raise CochainError("wrong number of tuple values for this degree")
        vd = cx.value_dim(kind)
        vals = tuple(vec(v) for v in values)
        for v in vals:
            if len(v) != vd:
                raise CochainError("value has wrong dimension for codomain")
        self.cx = cx
        self.degree = degree
        self.kind = kind
        self.values = vals

    # construction / conversion ------------------------------------------------
    @classmethod
    def from_vector(cls, cx, degree: int, kind: str, flat: Sequence) -> "Cochain":
        vd = cx.value_dim(kind)
        return cls(cx, degree, kind, [flat[i * vd:(i + 1) * vd] for i in range(cx.count(degree))])

    @property
    def vector(self) -> Vector:
        return tuple(x for v in self.values for x in v)

    def as_dict(self) -> dict[tuple[int, ...], Vector]:
        return {
            t: v for t, v in zip(self.cx.tuples(self.degree), self.values) if any(v)
        }

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, kind={self.kind}, nonzero={len(self.as_dict())})"

    def _same(self, other: "Cochain") -> None:
        if (self.cx is not other.cx) or self.degree != other.degree or self.kind != other.kind:
            raise CochainError("cochains live in different spaces")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.cx is other.cx
            and self.degree == other.degree
            and self.kind == other.kind
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.degree, self.kind, self.values))

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(
            self.cx, self.degree, self.kind,
            [tuple(a + b for a, b in zip(u, v)) for u, v in zip(self.values, other.values)],
        )

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, c) -> "Cochain":
        c = Q(c)
        return Cochain(self.cx, self.degree, self.kind, [tuple(c * x for x in v) for v in self.values])

    def is_zero(self) -> bool:
        return all(not any(v) for v in self.values)

    # evaluation ---------------------------------------------------------------
    def at(self, idx: Sequence[int]) -> Vector:
        """Value on basis derivations with the given indices, in any order."""
        return self.cx._at(self, tuple(idx))

    def at_mixed(self, first: Sequence, rest: Sequence[int]) -> Vector:
        """Value with a general derivation (coordinates) in the first slot."""
        out = [ZERO] * self.cx.value_dim(self.kind)
        for a, c in enumerate(first):
            if c:
                for i, x in enumerate(self.at((a,) + tuple(rest))):
                    if x:
                        out[i] += c * x
        return tuple(out)


def evaluate(phi: Cochain, *args: Sequence) -> Vector:
    """Evaluate a cochain on derivations given by coordinate vectors."""
    if len(args) != phi.degree:
        raise CochainError(f"cochain of degree {phi.degree} got {len(args)} arguments")
    cx = phi.cx
    out = [ZERO] * cx.value_dim(phi.kind)

    def rec(pos: int, idx: tuple, coeff):
        if pos == len(args):
            for i, x in enumerate(phi.at(idx)):
                if x:
                    out[i] += coeff * x
            return
        for a, c in enumerate(args[pos]):
            if c and a not in idx:
                rec(pos + 1, idx + (a,), coeff * c)

    rec(0, (), ONE)
    return tuple(out)


class ChevalleyComplex:
    """C(Der(A), A) and C(Der(A), Der(A)) for a fixed algebra."""

    def __init__(self, A: Algebra):
        self.A = A
        self.D = A.derivations
        self.m = self.D.dim
        self.n = A.dim

    def __repr__(self) -> str:
        return f"ChevalleyComplex({self.A.name}, dim Der={self.m})"

    # spaces -----------------------------------------------------------------
    @lru_cache(maxsize=None)
    def tuples(self, k: int) -> tuple[tuple[int, ...], ...]:
        if k < 0 or k > self.m:
            return ()
        return tuple(combinations(range(self.m), k))

    @lru_cache(maxsize=None)
    def _index(self, k: int) -> dict:
        return {t: i for i, t in enumerate(self.tuples(k))}

    def count(self, k: int) -> int:
        return comb(self.m, k) if 0 <= k <= self.m else 0

    def value_dim(self, kind: str) -> int:
        return self.n if kind == A_VALUED else self.m

    def dim(self, k: int, kind: str = A_VALUED) -> int:
        return self.count(k) * self.value_dim(kind)

    @property
    def degrees(self) -> range:
        return range(self.m + 1)

    def _at(self, phi: Cochain, idx: tuple) -> Vector:
        if len(set(idx)) != len(idx):
            return zero_vec(self.value_dim(phi.kind))
        order = sorted(range(len(idx)), key=idx.__getitem__)
        key = tuple(idx[i] for i in order)
        v = phi.values[self._index(len(idx))[key]]
        if _perm_parity(order):
            return tuple(-x for x in v)
        return v

    # constructors -----------------------------------------------------------
    def zero(self, k: int, kind: str = A_VALUED) -> Cochain:
        return Cochain(self, k, kind, [zero_vec(self.value_dim(kind))] * self.count(k))

    def from_vector(self, k: int, kind: str, flat: Sequence) -> Cochain:
        return Cochain.from_vector(self, k, kind, flat)

    def basis_cochain(self, k: int, kind: str, i: int) -> Cochain:
        return self.from_vector(k, kind, unit_vec(self.dim(k, kind), i))

    def basis(self, k: int, kind: str = A_VALUED) -> list[Cochain]:
        return [self.basis_cochain(k, kind, i) for i in range(self.dim(k, kind))]

    def from_dict(self, k: int, kind: str, values: dict) -> Cochain:
        vd = self.value_dim(kind)
        out = [zero_vec(vd)] * self.count(k)
        idx = self._index(k)
        for t, v in values.items():
            t = tuple(t)
            if list(t) != sorted(set(t)) or len(t) != k:
                raise CochainError(f"key {t} is not a strictly increasing {k}-tuple")
            if t not in idx:
                raise CochainError(f"key {t} out of range")
            out[idx[t]] = vec(v)
        return Cochain(self, k, kind, out)

    def element(self, a: Sequence) -> Cochain:
        """An algebra element viewed as a 0-cochain."""
        return Cochain(self, 0, A_VALUED, [a])

    def derivation(self, coords: Sequence) -> Cochain:
        """A derivation viewed as a Der-valued 0-cochain."""
        return Cochain(self, 0, DER_VALUED, [coords])

    def identity(self) -> Cochain:
        """Id_{Der(A)} as a Der-valued 1-cochain."""
        return Cochain(self, 1, DER_VALUED, [unit_vec(self.m, a) for (a,) in self.tuples(1)])

    def unit(self) -> Cochain:
        return self.element(self.A.unit)

    def random(self, rng: random.Random, k: int, kind: str = A_VALUED, lo: int = -3, hi: int = 3) -> Cochain:
        return self.from_vector(k, kind, [rng.randint(lo, hi) for _ in range(self.dim(k, kind))])

    def linear_derivation_cochain(self, K: Matrix) -> Cochain:
        """A degree-1 Der-valued cochain from an m x m matrix acting on Der coordinates."""
        return Cochain(self, 1, DER_VALUED, [K.column(a) for (a,) in self.tuples(1)])

    # value-space helpers ------------------------------------------------------
    def act(self, kind: str, x: Sequence, v: Sequence) -> Vector:
        """Action of the derivation x on a value v (X(a) on A, [X, Y] on Der)."""
        if kind == A_VALUED:
            return self.D.apply(x, v)
        return self.D.bracket(x, v)

    def der_bracket(self, u: Sequence, v: Sequence) -> Vector:
        return self.D.bracket(u, v)

    @cached_property
    def _pair_brackets(self) -> dict:
        m = self.m
        return {
            (a, b): self.D.bracket_constants[a][b] for a in range(m) for b in range(m)
        }

    # assembled operators --------------------------------------------------------
    def operator(self, degree: int, fn: Callable[[Cochain], Cochain], kind: str = A_VALUED) -> GradedOperator:
        def image(l: int, i: int):
            return fn(self.basis_cochain(l, kind, i)).vector

        # padded with empty maps so that compositions through degrees outside
        # 0..m stay defined (and are zero)
        pad = self.m + 2
        return operator_from_function(
            degree,
            range(-pad, self.m + pad + 1),
            lambda l: self.dim(l, kind),
            lambda t: self.dim(t, kind),
            image,
        )

    @cached_property
    def d_operator(self) -> GradedOperator:
        return self.operator(1, differential)

    def insertion_operator(self, K: Cochain) -> GradedOperator:
        return self.operator(K.degree - 1, lambda w: insert_K(K, w))

    def lie_operator(self, K: Cochain) -> GradedOperator:
        iK = self.insertion_operator(K)
        return iK.commutator(self.d_operator)


def _perm_parity(order: Sequence[int]) -> int:
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return inv % 2


def _add_into(out: list, v: Sequence, c) -> None:
    if not c:
        return
    for i, x in enumerate(v):
        if x:
            out[i] += c * x


def _build(cx: ChevalleyComplex, degree: int, kind: str, value: Callable[[tuple], Sequence]) -> Cochain:
    if degree < 0:
        return _EmptyCochain(cx, degree, kind)
    return Cochain(cx, degree, kind, [value(t) for t in cx.tuples(degree)])


class _EmptyCochain(Cochain):
    """The zero element of a space with no tuples (negative degree)."""

    def __init__(self, cx, degree, kind):
        self.cx = cx
        self.degree = degree
        self.kind = kind
        self.values = ()


# ---------------------------------------------------------------------------
# products and differentials


def wedge(phi: Cochain, psi: Cochain) -> Cochain:
    """Shuffle product of A-valued cochains (values multiplied in A)."""
    if phi.kind != A_VALUED or psi.kind != A_VALUED:
        raise CochainError("wedge is defined on A-valued cochains")
    cx = phi.cx
    k, l = phi.degree, psi.degree
    A = cx.A

    def value(t):
        out = [ZERO] * cx.n
        for sign, (I, J) in shuffles(k + l, (k, l)):
            a = phi.at(tuple(t[i] for i in I))
            if not any(a):
                continue
            b = psi.at(tuple(t[j] for j in J))
            _add_into(out, A.multiply(a, b), sign)
        return out

    return _build(cx, k + l, A_VALUED, value)


def _coboundary(phi: Cochain) -> Cochain:
    cx = phi.cx
    k = phi.degree
    kind = phi.kind
    brackets = cx._pair_brackets

    def value(t):
        out = [ZERO] * cx.value_dim(kind)
        for i in range(k + 1):
            rest = t[:i] + t[i + 1:]
            sign = -1 if i % 2 else 1
            _add_into(out, cx.act(kind, unit_vec(cx.m, t[i]), phi.at(rest)), sign)
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = tuple(x for p, x in enumerate(t) if p not in (i, j))
                sign = -1 if (i + j) % 2 else 1
                _add_into(out, phi.at_mixed(brackets[(t[i], t[j])], rest), sign)
        return out

    return _build(cx, k + 1, kind, value)


def differential(phi: Cochain) -> Cochain:
    """Chevalley differential on A-valued cochains."""
    if phi.kind != A_VALUED:
        raise CochainError("use adjoint_coboundary for Der-valued cochains")
    return _coboundary(phi)


def adjoint_coboundary(K: Cochain) -> Cochain:
    """Chevalley coboundary of the adjoint representation on Der-valued cochains."""
    if K.kind != DER_VALUED:
        raise CochainError("adjoint coboundary needs a Der-valued cochain")
    return _coboundary(K)


# ---------------------------------------------------------------------------
# insertions and brackets


def insert_X(X: Sequence, omega: Cochain) -> Cochain:
    """(i_X w)(X_1, ..., X_k) = w(X, X_1, ..., X_k); zero on degree 0."""
    return _build(omega.cx, omega.degree - 1, omega.kind, lambda t: omega.at_mixed(X, t))


def insert_K(K: Cochain, omega: Cochain) -> Cochain:
    """Insertion i_K along a Der-valued k-cochain K, lowering degree by 1 - k.

    Acts on A-valued and on Der-valued cochains by the same formula.
    """
    if K.kind != DER_VALUED:
        raise CochainError("insertion needs a Der-valued cochain K")
    cx = omega.cx
    k, l = K.degree, omega.degree
    N = l + k - 1
    if l == 0:
        return _build(cx, N, omega.kind, lambda t: zero_vec(cx.value_dim(omega.kind)))

    def value(t):
        out = [ZERO] * cx.value_dim(omega.kind)
        for sign, (I, J) in shuffles(N, (k, l - 1)):
            kv = K.at(tuple(t[i] for i in I))
            if any(kv):
                _add_into(out, omega.at_mixed(kv, tuple(t[j] for j in J)), sign)
        return out

    return _build(cx, N, omega.kind, value)


def nr_bracket(K: Cochain, L: Cochain) -> Cochain:
    """[K, L]^ = i_K L - (-1)^{(k-1)(l-1)} i_L K."""
    k, l = K.degree, L.degree
    return insert_K(K, L) - insert_K(L, K).scale(graded_sign(k - 1, l - 1))


def lie_derivative(K: Cochain, omega: Cochain) -> Cochain:
    """L_K = [i_K, d] = i_K d - (-1)^{k-1} d i_K."""
    k = K.degree
    first = insert_K(K, differential(omega))
    inner = insert_K(K, omega)
    if inner.degree < 0:
        return first
    return first - differential(inner).scale(graded_sign(k - 1, 1))


def lie_derivative_explicit(K: Cochain, omega: Cochain) -> Cochain:
    """Closed formula for L_K w written out directly in K, w and the bracket."""
    cx = omega.cx
    k, l = K.degree, omega.degree
    N = k + l
    brackets = cx._pair_brackets
    m = cx.m
    sk = -1 if k % 2 else 1

    def value(t):
        out = [ZERO] * cx.n
        for sign, (I, J) in shuffles(N, (k, l)):
            kv = K.at(tuple(t[i] for i in I))
            if any(kv):
                _add_into(out, cx.D.apply(kv, omega.at(tuple(t[j] for j in J))), sign)
        if l >= 1:
            for sign, (a, I, J) in shuffles(N, (1, k, l - 1)):
                kv = K.at(tuple(t[i] for i in I))
                if any(kv):
                    br = cx.D.bracket(unit_vec(m, t[a[0]]), kv)
                    _add_into(out, omega.at_mixed(br, tuple(t[j] for j in J)), sk * sign)
            if k >= 1:
                for sign, (P, I, J) in shuffles(N, (2, k - 1, l - 1)):
                    br = brackets[(t[P[0]], t[P[1]])]
                    kv = K.at_mixed(br, tuple(t[i] for i in I))
                    if any(kv):
                        _add_into(out, omega.at_mixed(kv, tuple(t[j] for j in J)), -sk * sign)
        return out

    return _build(cx, N, A_VALUED, value)


def wedge_bracket(K: Cochain, L: Cochain) -> Cochain:
    """[K, L]_wedge: shuffle sum of Lie brackets of the values."""
    cx = K.cx
    k, l = K.degree, L.degree

    def value(t):
        out = [ZERO] * cx.m
        for sign, (I, J) in shuffles(k + l, (k, l)):
            kv = K.at(tuple(t[i] for i in I))
            if any(kv):
                _add_into(out, cx.D.bracket(kv, L.at(tuple(t[j] for j in J))), sign)
        return out

    return _build(cx, k + l, DER_VALUED, value)


def lie_wedge(K: Cochain, omega: Cochain) -> Cochain:
    """L_wedge(K) w: the values of K act as derivations on the values of w."""
    cx = omega.cx
    k, q = K.degree, omega.degree

    def value(t):
        out = [ZERO] * cx.n
        for sign, (I, J) in shuffles(k + q, (k, q)):
            kv = K.at(tuple(t[i] for i in I))
            if any(kv):
                _add_into(out, cx.D.apply(kv, omega.at(tuple(t[j] for j in J))), sign)
        return out

    return _build(cx, k + q, A_VALUED, value)


def fn_bracket(K: Cochain, L: Cochain) -> Cochain:
    """Froelicher-Nijenhuis bracket from its closed formula in K, L and the Lie bracket."""
    cx = K.cx
    k, l = K.degree, L.degree
    N = k + l
    m = cx.m
    brackets = cx._pair_brackets
    s2 = -1 if k % 2 else 1
    s3 = -graded_sign(k * l + l, 1)  # -(-1)^{kl+l}

    def insert_terms(out, outer: Cochain, inner: Cochain, t, sign_factor):
        p, r = inner.degree, outer.degree
        # outer([X_a, inner(X_I)], X_J)
        for sign, (a, I, J) in shuffles(N, (1, p, r - 1)):
            iv = inner.at(tuple(t[i] for i in I))
            if any(iv):
                br = cx.D.bracket(unit_vec(m, t[a[0]]), iv)
                _add_into(out, outer.at_mixed(br, tuple(t[j] for j in J)), sign_factor * sign)
        # - outer(inner([X_p, X_q], X_I), X_J)
        if p >= 1:
            for sign, (P, I, J) in shuffles(N, (2, p - 1, r - 1)):
                br = brackets[(t[P[0]], t[P[1]])]
                iv = inner.at_mixed(br, tuple(t[i] for i in I))
                if any(iv):
                    _add_into(out, outer.at_mixed(iv, tuple(t[j] for j in J)), -sign_factor * sign)

    def value(t):
        out = [ZERO] * m
        for sign, (I, J) in shuffles(N, (k, l)):
            kv = K.at(tuple(t[i] for i in I))
            if any(kv):
                _add_into(out, cx.D.bracket(kv, L.at(tuple(t[j] for j in J))), sign)
        if l >= 1:
            insert_terms(out, L, K, t, s2)
        if k >= 1:
            insert_terms(out, K, L, t, s3)
        return out

    return _build(cx, N, DER_VALUED, value)


def fn_bracket_decomposed(K: Cochain, L: Cochain) -> Cochain:
    """[K,L] = [K,L]_wedge + (-1)^k i(dK) L - (-1)^{kl+l} i(dL) K, d the adjoint coboundary."""
    k, l = K.degree, L.degree
    out = wedge_bracket(K, L)
    out = out + insert_K(adjoint_coboundary(K), L).scale(graded_sign(k, 1))
    out = out - insert_K(adjoint_coboundary(L), K).scale(graded_sign(k * l + l, 1))
    return out


# ---------------------------------------------------------------------------
# subspaces


def z_multilinear_subspace(cx: ChevalleyComplex, k: int, kind: str = A_VALUED) -> Subspace:
    """Cochains with phi(z X_1, ...) = z phi(X_1, ...) for all central z."""
    total = cx.dim(k, kind)
    if k == 0 or total == 0:
        return Subspace.full(total)
    A, D = cx.A, cx.D
    zs = list(A.center.basis)
    m = cx.m

    def zmul(zi: int, v: Sequence) -> Vector:
        if kind == A_VALUED:
            return A.multiply(zs[zi], v)
        return D.z_action[zi].apply(v)

    conditions = []
    rests = list(combinations(range(m), k - 1))
    for i in range(total):
        phi = cx.basis_cochain(k, kind, i)
        col = []
        for zi in range(len(zs)):
            zaction = D.z_action[zi]
            for b in range(m):
                zx = zaction.column(b)
                for rest in rests:
                    lhs = phi.at_mixed(zx, rest)
                    rhs = zmul(zi, phi.at((b,) + rest))
                    col.extend(x - y for x, y in zip(lhs, rhs))
        conditions.append(col)
    if not conditions or not conditions[0]:
        return Subspace.full(total)
    return kernel_basis(Matrix.from_columns(conditions, len(conditions[0])))


@dataclass
class OperationSubspaces:
    horizontal: Subspace
    invariant: Subspace
    basic: Subspace


def operation_subspaces(cx: ChevalleyComplex, generators: Sequence[Sequence], k: int) -> OperationSubspaces:
    """Horizontal / invariant / basic cochains of degree k for the given derivations."""
    total = cx.dim(k)
    hor = Subspace.full(total)
    inv = Subspace.full(total)
    for X in generators:
        Xc = cx.derivation(X)
        if k >= 1:
            iX = cx.insertion_operator(Xc).maps[k]
            hor = hor.intersect(kernel_basis(iX))
        LX = cx.lie_operator(Xc).maps[k]
        inv = inv.intersect(kernel_basis(LX))
    return OperationSubspaces(hor, inv, hor.intersect(inv))


def maps_into(op: Matrix, source: Subspace, target: Subspace) -> bool:
    return all(target.contains(op.apply(b)) for b in source.basis)


@dataclass
class CohomologyRow:
    degree: int
    dim: int
    dim_kernel: int
    dim_image: int  # image of the incoming differential
    betti: int


def cohomology_dims(ds: Sequence[Matrix], dims: Sequence[int] | None = None) -> list[CohomologyRow]:
    """Ranks of a cochain complex given by its differentials d_k : C^k -> C^{k+1}.

    ``ds[k]`` must have ``dims[k]`` columns and ``dims[k+1]`` rows.
    """
    if dims is None:
        dims = [d.cols for d in ds] + ([ds[-1].rows] if ds else [])
    for k in range(len(ds) - 1):
        if ds[k].rows != ds[k + 1].cols:
            raise ValueError(f"differentials {k} and {k + 1} are not composable")
        if not (ds[k + 1] @ ds[k]).is_zero():
            raise ValueError(f"d o d != 0 at degree {k}")
    ranks = [d.rank() for d in ds]
    rows = []
    for k, dk in enumerate(dims):
        out_rank = ranks[k] if k < len(ds) else 0
        in_rank = ranks[k - 1] if 0 < k <= len(ds) else 0
        ker = dk - out_rank
        rows.append(CohomologyRow(k, dk, ker, in_rank, ker - in_rank))
    return rows


def complex_differentials(cx: ChevalleyComplex) -> list[Matrix]:
    d = cx.d_operator
    return [d.maps[k] for k in range(cx.m)]


# ---------------------------------------------------------------------------
# derivation checks on operator tables


def leibniz_defect(cx: ChevalleyComplex, D: GradedOperator, full: bool = False):
    """First pair (phi, psi) violating graded Leibniz for D, or None.

    By default psi runs over all basis cochains and phi over a generating set
    (algebra basis elements and the coordinate 1-cochains), which suffices.
    """
    r = D.degree
    gens: list[Cochain]
    if full:
        gens = [c for p in cx.degrees for c in cx.basis(p)]
    else:
        gens = [cx.element(unit_vec(cx.n, i)) for i in range(cx.n)]
        one = cx.A.unit
        for a in range(cx.m):
            vals = [one if t == (a,) else zero_vec(cx.n) for t in cx.tuples(1)]
            gens.append(Cochain(cx, 1, A_VALUED, vals))
    others = [c for q in cx.degrees for c in cx.basis(q)]

    def apply(phi: Cochain) -> Cochain | None:
        t = phi.degree + r
        if t < 0 or t > cx.m:
            return None
        return cx.from_vector(t, A_VALUED, D.maps[phi.degree].apply(phi.vector))

    for phi in gens:
        Dphi = apply(phi)
        for psi in others:
            if phi.degree + psi.degree > cx.m:
                continue
            prod = wedge(phi, psi)
            target = prod.degree + r
            if target < 0 or target > cx.m:
                continue
            lhs = D.maps[prod.degree].apply(prod.vector)
            rhs = [ZERO] * cx.dim(target)
            if Dphi is not None:
                _add_into(rhs, wedge(Dphi, psi).vector, 1)
            Dpsi = apply(psi)
            if Dpsi is not None:
                _add_into(rhs, wedge(phi, Dpsi).vector, graded_sign(r, phi.degree))
            if tuple(lhs) != tuple(rhs):
                return phi, psi
    return None


def is_graded_derivation(cx: ChevalleyComplex, D: GradedOperator, full: bool = False) -> bool:
    return leibniz_defect(cx, D, full) is None


# ---------------------------------------------------------------------------
# identity suites


def lie_wedge_operator(K: Cochain) -> GradedOperator:
    return K.cx.operator(K.degree, lambda w: lie_wedge(K, w))


def _rand_der(cx: ChevalleyComplex, rng: random.Random, lo: int = 0, hi: int | None = None) -> Cochain:
    hi = cx.m if hi is None else hi
    return cx.random(rng, rng.randint(lo, max(lo, hi)), DER_VALUED)


def _ops_equal(P: GradedOperator, Q_: GradedOperator):
    l = P.mismatch(Q_)
    return None if l is None else {"source_degree": l}


def _cochains_equal(a: Cochain, b: Cochain):
    if a.degree != b.degree:
        return {"degrees": [a.degree, b.degree]}
    if a.vector == b.vector:
        return None
    for t, u, v in zip(a.cx.tuples(a.degree), a.values, b.values):
        if u != v:
            return {"tuple": list(t), "lhs": list(u), "rhs": list(v)}
    return {"degree": a.degree}


class _Runner:
    """Runs one identity on many seeded instances and records a single check."""

    def __init__(self, report, cx: ChevalleyComplex, seed: int, instances: int):
        self.report = report
        self.cx = cx
        self.seed = seed
        self.instances = instances

    def run(self, id: str, anchor: str, body: Callable[[random.Random], object]) -> bool:
        for i in range(self.instances):
            rng = random.Random(f"{self.seed}:{id}:{i}")
            bad = body(rng)
            if bad is not None:
                return self.report.add(id, anchor, False, {"algebra": self.cx.A.name, "instance": i, **bad})
        return self.report.add(id, anchor, True)


def operator_identities_suite(A: Algebra, seed: int = 0, instances: int = 25):
    """Bracket homomorphism properties and graded Lie axioms, as operator tables."""
    from .report import Report

    cx = ChevalleyComplex(A)
    rep = Report(f"chevalley-operators[{A.name}]", seed)
    run = _Runner(rep, cx, seed, instances).run

    def nr_hom(rng):
        K, L = _rand_der(cx, rng, 1), _rand_der(cx, rng, 1)
        lhs = cx.insertion_operator(K).commutator(cx.insertion_operator(L))
        return _ops_equal(lhs, cx.insertion_operator(nr_bracket(K, L)))

    def fn_hom(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        lhs = cx.lie_operator(K).commutator(cx.lie_operator(L))
        return _ops_equal(lhs, cx.lie_operator(fn_bracket(K, L)))

    def lie_insert(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng, 1)
        k, l = K.degree, L.degree
        lhs = cx.lie_operator(K).commutator(cx.insertion_operator(L))
        rhs = cx.insertion_operator(fn_bracket(K, L)) - cx.lie_operator(insert_K(L, K)).scale(graded_sign(k, l - 1))
        return _ops_equal(lhs, rhs)

    def nr_anti(rng):
        K, L = _rand_der(cx, rng, 1), _rand_der(cx, rng, 1)
        s = graded_sign(K.degree - 1, L.degree - 1)
        return _cochains_equal(nr_bracket(K, L), nr_bracket(L, K).scale(-s))

    def nr_jacobi(rng):
        K, L, M = (_rand_der(cx, rng, 1) for _ in range(3))
        k, l = K.degree - 1, L.degree - 1
        lhs = nr_bracket(K, nr_bracket(L, M))
        rhs = nr_bracket(nr_bracket(K, L), M) + nr_bracket(L, nr_bracket(K, M)).scale(graded_sign(k, l))
        return _cochains_equal(lhs, rhs)

    def fn_anti(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        s = graded_sign(K.degree, L.degree)
        return _cochains_equal(fn_bracket(K, L), fn_bracket(L, K).scale(-s))

    def fn_jacobi(rng):
        K, L, M = (_rand_der(cx, rng) for _ in range(3))
        k, l = K.degree, L.degree
        lhs = fn_bracket(K, fn_bracket(L, M))
        rhs = fn_bracket(fn_bracket(K, L), M) + fn_bracket(L, fn_bracket(K, M)).scale(graded_sign(k, l))
        return _cochains_equal(lhs, rhs)

    run("nr-homomorphism", "[i_K,i_L] = i_{[K,L]^∧}", nr_hom)
    run("fn-homomorphism", "[L_K,L_L] = L_{[K,L]}", fn_hom)
    run("lie-insertion-commutator", "[L_K,i_L] = i([K,L]) − (−1)^{k(l−1)} L(i_L K)", lie_insert)
    run("nr-antisymmetry", "[K,L]^∧ = −(−1)^{(k−1)(l−1)} [L,K]^∧", nr_anti)
    run("nr-jacobi", "graded Jacobi for [·,·]^∧", nr_jacobi)
    run("fn-antisymmetry", "[K,L] = −(−1)^{kl} [L,K]", fn_anti)
    run("fn-jacobi", "graded Jacobi for [·,·]", fn_jacobi)
    return rep


def hook_identities_suite(A: Algebra, seed: int = 0, instances: int = 10):
    """Dual-path equalities relating d, ∂, i, L, the wedge bracket and both brackets."""
    from .report import Report

    cx = ChevalleyComplex(A)
    rep = Report(f"chevalley-identities[{A.name}]", seed)
    run = _Runner(rep, cx, seed, instances).run
    m = cx.m
    D = adjoint_coboundary

    def dd(rng):
        w = cx.random(rng, rng.randint(0, m))
        K = _rand_der(cx, rng)
        return _cochains_equal(differential(differential(w)), cx.zero(w.degree + 2)) or \
            _cochains_equal(D(D(K)), cx.zero(K.degree + 2, DER_VALUED))

    def fn_two_paths(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        return _cochains_equal(fn_bracket(K, L), fn_bracket_decomposed(K, L))

    def lie_two_paths(rng):
        K = _rand_der(cx, rng)
        w = cx.random(rng, rng.randint(0, m))
        return _cochains_equal(lie_derivative(K, w), lie_derivative_explicit(K, w))

    def lie_split(rng):
        K = _rand_der(cx, rng)
        rhs = lie_wedge_operator(K) + cx.insertion_operator(D(K)).scale(graded_sign(K.degree, 1))
        return _ops_equal(cx.lie_operator(K), rhs)

    def wedge_hom(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        PK, PL = lie_wedge_operator(K), lie_wedge_operator(L)
        return _ops_equal(PK.commutator(PL), lie_wedge_operator(wedge_bracket(K, L)))

    def insert_wedge(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        k, l = K.degree, L.degree
        lhs = cx.insertion_operator(K) @ lie_wedge_operator(L)
        rhs = lie_wedge_operator(insert_K(K, L)) + (lie_wedge_operator(L) @ cx.insertion_operator(K)).scale(
            graded_sign(k - 1, l)
        )
        return _ops_equal(lhs, rhs)

    def coboundary_insert(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        k = K.degree
        lhs = D(insert_K(K, L))
        rhs = insert_K(D(K), L) + insert_K(K, D(L)).scale(graded_sign(k - 1, 1)) + wedge_bracket(K, L).scale(
            graded_sign(k, 1)
        )
        return _cochains_equal(lhs, rhs)

    def coboundary_wedge(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        lhs = D(wedge_bracket(K, L))
        rhs = wedge_bracket(D(K), L) + wedge_bracket(K, D(L)).scale(graded_sign(K.degree, 1))
        return _cochains_equal(lhs, rhs)

    def combined(rng):
        k1 = rng.randint(0, m)
        k2 = rng.randint(0, m)
        K1, K2 = cx.random(rng, k1, DER_VALUED), cx.random(rng, k2, DER_VALUED)
        L1, L2 = cx.random(rng, k1 + 1, DER_VALUED), cx.random(rng, k2 + 1, DER_VALUED)
        P1 = cx.lie_operator(K1) + cx.insertion_operator(L1)
        P2 = cx.lie_operator(K2) + cx.insertion_operator(L2)
        s = graded_sign(k1, k2)
        X = fn_bracket(K1, K2) + insert_K(L1, K2) - insert_K(L2, K1).scale(s)
        Y = nr_bracket(L1, L2) + fn_bracket(K1, L2) - fn_bracket(K2, L1).scale(s)
        return _ops_equal(P1.commutator(P2), cx.lie_operator(X) + cx.insertion_operator(Y))

    def insert_fn(rng):
        k1, k2, l = (rng.randint(0, m) for _ in range(3))
        K1, K2 = cx.random(rng, k1, DER_VALUED), cx.random(rng, k2, DER_VALUED)
        L = cx.random(rng, l + 1, DER_VALUED)
        lhs = insert_K(L, fn_bracket(K1, K2))
        rhs = (
            fn_bracket(insert_K(L, K1), K2)
            + fn_bracket(K1, insert_K(L, K2)).scale(graded_sign(k1, l))
            - insert_K(fn_bracket(K1, L), K2).scale(graded_sign(k1, l))
            + insert_K(fn_bracket(K2, L), K1).scale(graded_sign(k1 + l, k2))
        )
        return _cochains_equal(lhs, rhs)

    def fn_nr(rng):
        k, k1, k2 = (rng.randint(0, m) for _ in range(3))
        K = cx.random(rng, k, DER_VALUED)
        L1, L2 = cx.random(rng, k1 + 1, DER_VALUED), cx.random(rng, k2 + 1, DER_VALUED)
        lhs = fn_bracket(K, nr_bracket(L1, L2))
        rhs = (
            nr_bracket(fn_bracket(K, L1), L2)
            + nr_bracket(L1, fn_bracket(K, L2)).scale(graded_sign(k, k1))
            - fn_bracket(insert_K(L1, K), L2).scale(graded_sign(k, k1))
            + fn_bracket(insert_K(L2, K), L1).scale(graded_sign(k + k1, k2))
        )
        return _cochains_equal(lhs, rhs)

    def coboundary_hom(rng):
        K, L = _rand_der(cx, rng), _rand_der(cx, rng)
        return _cochains_equal(D(fn_bracket(K, L)), nr_bracket(D(K), D(L)))

    run("d-squared", "d∘d = 0 and ∂∘∂ = 0", dd)
    run("fn-closed-vs-split", "[K,L] = [K,L]_∧ + (−1)^k i(∂K)L − (−1)^{kl+l} i(∂L)K", fn_two_paths)
    run("lie-closed-vs-commutator", "L_K = [i_K,d] = explicit sum", lie_two_paths)
    run("lie-split", "L_K = L_∧(K) + (−1)^k i(∂K)", lie_split)
    run("wedge-action-hom", "[L_∧(K),L_∧(L)] = L_∧([K,L]_∧)", wedge_hom)
    run("insert-wedge-action", "i_K L_∧(L) = L_∧(i_K L) + (−1)^{(k−1)l} L_∧(L) i_K", insert_wedge)
    run("coboundary-of-insertion", "∂(i_K L) = i_{∂K}L + (−1)^{k−1} i_K ∂L + (−1)^k [K,L]_∧", coboundary_insert)
    run("coboundary-of-wedge-bracket", "∂[K,L]_∧ = [∂K,L]_∧ + (−1)^k [K,∂L]_∧", coboundary_wedge)
    run("combined-bracket", "[L_{K1}+i_{L1}, L_{K2}+i_{L2}] = L(...) + i(...)", combined)
    run("insertion-of-fn", "i_L[K1,K2] expansion", insert_fn)
    run("fn-of-nr", "[K,[L1,L2]^∧] expansion", fn_nr)
    run("coboundary-homomorphism", "∂[K,L] = [∂K,∂L]^∧", coboundary_hom)
    return rep
