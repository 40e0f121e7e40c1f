"""All graded derivations of C(Der(A), A): annihilator spaces, higher
insertions and the peeling decomposition D = L_{K_0} + sum_p i_{K_p}."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import Algebra
from .bimodule import chevalley_degree, hom_AA, regular, submodule
from .chevalley import (
    A_VALUED,
    DER_VALUED,
    ChevalleyComplex,
    Cochain,
    _build,
    _EmptyCochain,
    differential,
    insert_K,
    insert_X,
    leibniz_defect,
    wedge,
    z_multilinear_subspace,
)
from .graded import GradedOperator, perm_sign, shuffles
from .linalg import ZERO, Matrix, Subspace, Vector, kernel_basis, unit_vec, zero_vec


class ClassifyError(ValueError):
    pass


@dataclass
class AnnSpace:
    """Ann^p as n x dim C^p matrices (bimodule maps C^p -> A killing products).

    When ``sub`` is set the matrices act on coordinates of that subspace of C^p.
    For p = 0 the space is Der(A) and ``basis`` is empty; insertion then uses
    derivation coordinates.
    """

    cx: ChevalleyComplex
    p: int
    basis: list[Matrix]
    sub: Subspace | None = None

    @property
    def dim(self) -> int:
        return self.cx.m if self.p == 0 else len(self.basis)

    def element(self, coords: Sequence) -> Matrix:
        n = self.cx.n
        cols = self.sub.dim if self.sub is not None else self.cx.dim(self.p)
        out = Matrix.zeros(n, cols)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b.scale(c)
        return out

    def pair(self, xi: Matrix, phi: Sequence) -> Vector:
        """<Xi, phi>_A for a p-cochain given by its vector."""
        if self.sub is not None:
            c = self.sub.coordinates(phi)
            if c is None:
                raise ClassifyError("cochain lies outside the Z(A)-multilinear part")
            phi = c
        return xi.apply(phi)

    @property
    def flat(self) -> Subspace:
        cols = self.sub.dim if self.sub is not None else self.cx.dim(self.p)
        size = self.cx.n * cols
        return Subspace(size, [[x for r in b.to_rows() for x in r] for b in self.basis])

    def coords(self, xi: Matrix) -> Vector | None:
        return self.flat.coordinates([x for r in xi.to_rows() for x in r])


def _products(cx: ChevalleyComplex, p: int, subs: dict | None = None) -> list[Vector]:
    out = []
    for i in range(1, p):
        left = subs[i].basis if subs else [b.vector for b in cx.basis(i)]
        right = subs[p - i].basis if subs else [b.vector for b in cx.basis(p - i)]
        for u in left:
            cu = cx.from_vector(i, A_VALUED, u)
            for v in right:
                out.append(wedge(cu, cx.from_vector(p - i, A_VALUED, v)).vector)
    return out


def _annihilating(homs: list[Matrix], products: list[Vector], sub: Subspace | None) -> list[Matrix]:
    if not homs or not products:
        return homs
    if sub is not None:
        products = [sub.coordinates(v) for v in products]
        if any(c is None for c in products):
            raise ClassifyError("product of Z(A)-multilinear cochains left the subcomplex")
    cols = []
    for h in homs:
        cols.append([x for v in products for x in h.apply(v)])
    ker = kernel_basis(Matrix.from_columns(cols, len(cols[0])))
    out = []
    for c in ker.basis:
        acc = Matrix.zeros(homs[0].rows, homs[0].cols)
        for x, h in zip(c, homs):
            if x:
                acc = acc + h.scale(x)
        out.append(acc)
    # recanonicalise through the flattened echelon basis
    rows, cols_ = homs[0].rows, homs[0].cols
    flat = Subspace(rows * cols_, [[x for r in m.to_rows() for x in r] for m in out])
    return [Matrix([b[i * cols_:(i + 1) * cols_] for i in range(rows)], cols_) for b in flat.basis]


def ann_basis(A: Algebra, p: int, cx: ChevalleyComplex | None = None) -> AnnSpace:
    cx = cx or ChevalleyComplex(A)
    if p < 0 or p > cx.m:
        raise ClassifyError(f"degree {p} outside 0..{cx.m}")
    if p == 0:
        return AnnSpace(cx, 0, [])
    homs = hom_AA(chevalley_degree(A, p, cx), regular(A))
    return AnnSpace(cx, p, _annihilating(homs, _products(cx, p), None))


def ann_z_variant(A: Algebra, p: int, cx: ChevalleyComplex | None = None) -> AnnSpace:
    """The same construction inside the Z(A)-multilinear subcomplex."""
    cx = cx or ChevalleyComplex(A)
    if p < 0 or p > cx.m:
        raise ClassifyError(f"degree {p} outside 0..{cx.m}")
    if p == 0:
        return AnnSpace(cx, 0, [])
    subs = {q: z_multilinear_subspace(cx, q) for q in range(1, p + 1)}
    M = submodule(chevalley_degree(A, p, cx), subs[p], f"C^{p}_Z({A.name})")
    homs = hom_AA(M, regular(A))
    return AnnSpace(cx, p, _annihilating(homs, _products(cx, p, subs), subs[p]), subs[p])


def _slot_cochain(omega: Cochain, p: int, rest: tuple) -> Vector:
    """The p-cochain (Y_1..Y_p) -> omega(Y_1, ..., Y_p, rest)."""
    cx = omega.cx
    return tuple(x for t in cx.tuples(p) for x in cx._at(omega, t + rest))


def insert_Xi(ann: AnnSpace, xi: Sequence, omega: Cochain) -> Cochain:
    """i_Xi for Xi in Ann^p given by coordinates; for p = 0 this is i_X."""
    cx = omega.cx
    if ann.p == 0:
        return insert_X(xi, omega)
    p = ann.p
    N = omega.degree - p
    if N < 0:
        return _build(cx, N, A_VALUED, lambda t: zero_vec(cx.n))
    X = ann.element(xi)
    return _build(cx, N, A_VALUED, lambda t: ann.pair(X, _slot_cochain(omega, p, tuple(t))))


@dataclass
class HigherK:
    """A skew k-linear map Der(A)^k -> Ann^p, by coordinates on increasing tuples."""

    ann: AnnSpace
    k: int
    values: list[Vector]

    @property
    def p(self) -> int:
        return self.ann.p

    @property
    def degree(self) -> int:
        return self.k - self.p

    def at(self, idx: tuple) -> Vector:
        cx = self.ann.cx
        pos = cx._index(self.k)[idx]
        return self.values[pos]

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.values)

    def as_der_cochain(self) -> Cochain:
        if self.p != 0:
            raise ClassifyError("only Ann^0-valued maps are Der-valued cochains")
        return Cochain(self.ann.cx, self.k, DER_VALUED, self.values)

    def contract(self, X: Sequence) -> "HigherK":
        """i_X K = K(X, ...)."""
        cx = self.ann.cx
        if self.k == 0:
            return HigherK(self.ann, -1, [])
        out = []
        for t in cx.tuples(self.k - 1):
            acc = [ZERO] * self.ann.dim
            for a, c in enumerate(X):
                if c and a not in t:
                    full = (a,) + t
                    order = sorted(range(len(full)), key=full.__getitem__)
                    key = tuple(full[i] for i in order)
                    sign = perm_sign(order)
                    for i, y in enumerate(self.at(key)):
                        acc[i] += sign * c * y
            out.append(tuple(acc))
        return HigherK(self.ann, self.k - 1, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HigherK):
            return NotImplemented
        return self.p == other.p and self.k == other.k and list(self.values) == list(other.values)


def random_higher(ann: AnnSpace, k: int, rng: random.Random) -> HigherK:
    cx = ann.cx
    return HigherK(ann, k, [tuple(rng.randint(-3, 3) for _ in range(ann.dim)) for _ in cx.tuples(k)])


def insert_higher(K: HigherK, omega: Cochain) -> Cochain:
    """i_K, a derivation of degree k - p; for p = 0 it is the insertion along a Der-valued cochain."""
    cx = omega.cx
    if K.p == 0:
        return insert_K(K.as_der_cochain(), omega)
    k, p, l = K.k, K.p, omega.degree
    N = l + k - p
    if l < p:
        return _build(cx, N, A_VALUED, lambda t: zero_vec(cx.n))
    ann = K.ann

    def value(t):
        out = [ZERO] * cx.n
        for sign, (I, J) in shuffles(N, (k, N - k)):
            xi = K.at(tuple(t[i] for i in I))
            if not any(xi):
                continue
            v = ann.pair(ann.element(xi), _slot_cochain(omega, p, tuple(t[j] for j in J)))
            for i, x in enumerate(v):
                if x:
                    out[i] += sign * x
        return out

    return _build(cx, N, A_VALUED, value)


def higher_operator(K: HigherK) -> GradedOperator:
    return K.ann.cx.operator(K.degree, lambda w: insert_higher(K, w))


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class FullDecomposition:
    K0: Cochain
    parts: dict[int, HigherK]

    def is_zero(self) -> bool:
        return self.K0.is_zero() and all(K.is_zero() for K in self.parts.values())


def decompose_full(cx: ChevalleyComplex, D: GradedOperator, anns: dict[int, AnnSpace] | None = None) -> FullDecomposition:
    """Peel L_{K_0} and then i_{K_p} for p = 1..dim Der(A) off a graded derivation."""
    bad = leibniz_defect(cx, D)
    if bad is not None:
        raise ClassifyError("input is not a graded derivation")
    k, n, m = D.degree, cx.n, cx.m
    anns = anns or {p: ann_basis(cx.A, p, cx) for p in range(1, m + 1)}
    if 0 <= k <= m:
        vals = []
        for T in cx.tuples(k):
            cols = [_at_tuple(cx, D.maps[0].apply(unit_vec(n, i)), k, T) for i in range(n)]
            vals.append(cx.D.coords(Matrix.from_columns(cols, n)))
        K0 = Cochain(cx, k, DER_VALUED, vals)
        rest = D - cx.lie_operator(K0)
    else:
        K0 = cx.zero(k, DER_VALUED) if k > m else _EmptyCochain(cx, k, DER_VALUED)
        rest = D
    parts: dict[int, HigherK] = {}
    for p in range(1, m + 1):
        ann = anns[p]
        t = p + k
        if t < 0 or t > m:
            continue
        Rp = rest.maps[p]
        vals = []
        for T in cx.tuples(t):
            cols = [_at_tuple(cx, Rp.apply(e), t, T) for e in _units(cx.dim(p))]
            xi = Matrix.from_columns(cols, n)
            c = ann.coords(xi)
            if c is None:
                raise ClassifyError(f"restriction in degree {p} is not an Ann^{p}-valued cochain")
            vals.append(c)
        Kp = HigherK(ann, t, vals)
        parts[p] = Kp
        if not Kp.is_zero():
            rest = rest - higher_operator(Kp)
    if not rest.is_zero():
        raise ClassifyError("remainder does not vanish after dim Der(A) steps")
    return FullDecomposition(K0, parts)


def _units(d: int):
    return [unit_vec(d, i) for i in range(d)]


def _at_tuple(cx: ChevalleyComplex, v: Sequence, k: int, T: tuple) -> Vector:
    pos = cx._index(k)[T]
    return tuple(v[pos * cx.n:(pos + 1) * cx.n])


def synthesize(cx: ChevalleyComplex, K0: Cochain, parts: Sequence[HigherK]) -> GradedOperator:
    if 0 <= K0.degree <= cx.m:
        D = cx.lie_operator(K0)
    else:
        D = GradedOperator(K0.degree, {l: Matrix.zeros(cx.dim(l + K0.degree), cx.dim(l)) for l in cx.d_operator.maps})
    for K in parts:
        if K.degree != D.degree:
            raise ClassifyError("components have different degrees")
        D = D + higher_operator(K)
    return D


def hat(K: HigherK) -> Cochain:
    """K^(X_1..X_k)(a) = K(X_1..X_k)(da) for K with values in Ann^1."""
    ann, cx = K.ann, K.ann.cx
    if K.p != 1:
        raise ClassifyError("hat needs an Ann^1-valued cochain")
    n = cx.n
    da = [differential(cx.element(unit_vec(n, i))).vector for i in range(n)]
    vals = []
    for T in cx.tuples(K.k):
        xi = ann.element(K.at(T))
        cols = [ann.pair(xi, v) for v in da]
        vals.append(cx.D.coords(Matrix.from_columns(cols, n)))
    return Cochain(cx, K.k, DER_VALUED, vals)


# ---------------------------------------------------------------------------
# suite


def classify_suite(A: Algebra, seed: int = 0, instances: int = 3, max_k: int = 2):
    from .report import Report

    cx = ChevalleyComplex(A)
    m = cx.m
    rep = Report(f"classify[{A.name}]", seed)
    anns = {p: ann_basis(A, p, cx) for p in range(1, m + 1)}
    rep.notes.append("dim Ann^p = " + str([m] + [anns[p].dim for p in range(1, m + 1)]))

    ok = True
    for p, ann in anns.items():
        Cp = chevalley_degree(A, p, cx)
        R = regular(A)
        prods = _products(cx, p)
        for xi in ann.basis:
            if not all(xi @ a == b @ xi for a, b in zip(Cp.left + Cp.right, R.left + R.right)):
                ok = False
            if any(any(xi.apply(v)) for v in prods):
                ok = False
    rep.add("ann-elements", "Ann^p ⊆ Hom^A_A(C^p,A) kills Σ C^i·C^{p−i}", ok)
    if m >= 1:
        full = hom_AA(chevalley_degree(A, 1, cx), regular(A))
        rep.add("ann1-full", "Ann¹ = Hom^A_A(C¹,A)", anns[1].dim == len(full))

    ok, info = True, None
    for p, ann in anns.items():
        for i in range(ann.dim):
            xi = unit_vec(ann.dim, i)
            op = cx.operator(-p, lambda w: insert_Xi(ann, xi, w))
            if leibniz_defect(cx, op) is not None:
                ok, info = False, {"p": p, "basis": i}
            for q in range(p):
                if not op.maps[q].is_zero():
                    ok, info = False, {"p": p, "basis": i, "nonzero_on": q}
    rep.add("xi-derivations", "i_Ξ is a derivation of degree −p vanishing below p", ok, info)

    def run(id, anchor, body):
        for i in range(instances):
            rng = random.Random(f"{seed}:{id}:{i}")
            bad = body(rng)
            if bad is not None:
                return rep.add(id, anchor, False, {"algebra": A.name, "instance": i, **bad})
        return rep.add(id, anchor, True)

    def pick(rng):
        p = rng.randint(1, m)
        k = rng.randint(0, min(max_k, m))
        return anns[p], k

    def higher_leibniz(rng):
        if m == 0:
            return None
        ann, k = pick(rng)
        K = random_higher(ann, k, rng)
        bad = leibniz_defect(cx, higher_operator(K))
        return None if bad is None else {"p": ann.p, "k": k}

    def higher_commutator(rng):
        if m == 0:
            return None
        ann, k = pick(rng)
        K = random_higher(ann, k, rng)
        X = tuple(rng.randint(-3, 3) for _ in range(m))
        iX = cx.operator(-1, lambda w: insert_X(X, w))
        lhs = iX.commutator(higher_operator(K))
        if k == 0:
            return None if lhs.is_zero() else {"p": ann.p, "k": k}
        rhs = higher_operator(K.contract(X))
        return None if lhs.equals(rhs) else {"p": ann.p, "k": k}

    def reductions(rng):
        if m == 0:
            return None
        ann, _ = pick(rng)
        K = random_higher(ann, 0, rng)
        for l in range(m + 1):
            for w in cx.basis(l):
                if insert_higher(K, w) != insert_Xi(ann, K.values[0], w):
                    return {"case": "k = 0", "p": ann.p}
        L = cx.random(rng, rng.randint(0, m), DER_VALUED)
        K0 = HigherK(AnnSpace(cx, 0, []), L.degree, L.values)
        for l in range(m + 1):
            for w in cx.basis(l):
                if insert_higher(K0, w) != insert_K(L, w):
                    return {"case": "p = 0"}
        return None

    def roundtrip(rng):
        k = rng.randint(-1, min(max_k, m))
        K0 = cx.random(rng, k, DER_VALUED) if k >= 0 else _EmptyCochain(cx, k, DER_VALUED)
        parts = []
        for p in range(1, min(2, m) + 1):
            if 0 <= k + p <= m:
                parts.append(random_higher(anns[p], k + p, rng))
        D = synthesize(cx, K0, parts)
        dec = decompose_full(cx, D, anns)
        if k >= 0 and dec.K0 != K0:
            return {"k": k, "component": 0}
        for K in parts:
            if dec.parts.get(K.p) != K:
                return {"k": k, "component": K.p}
        for p, K in dec.parts.items():
            if p > 2 and not K.is_zero():
                return {"k": k, "component": p}
        if not synthesize(cx, dec.K0, list(dec.parts.values())).equals(D):
            return {"k": k, "reassembly": False}
        return None

    run("higher-derivation", "i_K is a derivation of degree k − p", higher_leibniz)
    run("higher-commutator", "[i_X, i_K] = i_{i_X K}", higher_commutator)
    run("higher-reductions", "k = 0 gives i_Ξ, p = 0 gives the Der-valued insertion", reductions)
    run("decomposition-roundtrip", "D = L_{K₀} + Σ_p i_{K_p} recovers every component", roundtrip)

    for k in range(-1, min(max_k, m) + 1):
        if k < -m:
            continue
        zero = GradedOperator(k, {l: Matrix.zeros(cx.dim(l + k), cx.dim(l)) for l in cx.d_operator.maps})
        dec = decompose_full(cx, zero, anns)
        if not dec.is_zero():
            rep.add("zero-decomposition", "0 = L_0 + Σ i_0 (uniqueness)", False, {"k": k})
            break
    else:
        rep.add("zero-decomposition", "0 = L_0 + Σ i_0 (uniqueness)", True)

    dec = decompose_full(cx, cx.d_operator, anns)
    rep.add("decompose-d", "d = L_{Id}", (m == 0 or dec.K0 == cx.identity()) and all(K.is_zero() for K in dec.parts.values()))

    if m >= 1:
        X = cx.D.unit(0)
        iX = cx.operator(-1, lambda w: insert_X(X, w))
        dec = decompose_full(cx, iX, anns)
        rebuilt = None
        for K in dec.parts.values():
            rebuilt = higher_operator(K) if rebuilt is None else rebuilt + higher_operator(K)
        ok = rebuilt is not None and rebuilt.equals(iX)
        rep.add("decompose-insertion", "i_X reassembles from its components", ok)

        def hat_rule(rng):
            k = rng.randint(0, min(max_k, m))
            K = random_higher(anns[1], k, rng)
            D = higher_operator(K).commutator(cx.d_operator)
            dec = decompose_full(cx, D, anns)
            return None if dec.K0 == hat(K) else {"k": k}

        run("commutator-with-d", "[i_K,d]|A = L_{K̂}|A", hat_rule)

    ok = True
    for p in range(1, m + 1):
        az = ann_z_variant(A, p, cx)
        if A.center.dim == 1 and az.dim != anns[p].dim:
            ok = False
    rep.add("ann-z-variant", "Ann^p_{Z(A)} agrees with Ann^p when Z(A) = ℚ", ok)
    rep.notes.append("dim Ann^p_Z = " + str([m] + [ann_z_variant(A, p, cx).dim for p in range(1, m + 1)]))
    return rep
