"""The evaluation map zeta from universal forms onto Omega_Der(A), the
derivation calculus on Omega_Der(A), and the outer-derivation complex."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .algebra import Algebra, matrix_amplification
from .chevalley import (
    A_VALUED,
    DER_VALUED,
    ChevalleyComplex,
    Cochain,
    _EmptyCochain,
    cohomology_dims,
    differential,
    fn_bracket,
    insert_K,
    insert_X,
    lie_derivative,
    nr_bracket,
    operation_subspaces,
    wedge,
    z_multilinear_subspace,
)
from .forms import (
    FormDerivation,
    UniversalForms,
    _j,
    contraction_operator,
    delta_bracket,
    uf_fn_bracket,
    uf_lie,
)
from .graded import graded_sign
from .linalg import ZERO, Matrix, Subspace, Vector, image_basis, kernel_basis, unit_vec, zero_vec


class ZetaError(ValueError):
    pass


class ResourceGuard(RuntimeError):
    """Input exceeds the size this check is meant to run on."""


class Zeta:
    """zeta_k : Omega^k(A) -> C^k(Der(A), A) with its image and kernel."""

    def __init__(self, A: Algebra, cap: int = 3):
        self.A = A
        self.S = UniversalForms(A, cap)
        self.cx = ChevalleyComplex(A)
        self.top = min(cap, self.cx.m)

    def __repr__(self) -> str:
        return f"Zeta({self.A.name}, cap={self.S.cap})"

    @cached_property
    def contractions(self):
        S, D = self.S, self.cx.D
        return [contraction_operator(S.algebra_derivation(X)) for X in D.der_basis]

    @cached_property
    def matrices(self) -> dict[int, Matrix]:
        S, cx = self.S, self.cx
        out = {0: Matrix.identity(S.n)}
        for k in range(1, S.cap + 1):
            blocks = []
            for T in cx.tuples(k):
                M = Matrix.identity(S.dim(k))
                deg = k
                for t in T:
                    M = self.contractions[t].maps[deg] @ M
                    deg -= 1
                blocks.append(M)
            if blocks:
                rows = [r for B in blocks for r in B.to_rows()]
                out[k] = Matrix(rows, S.dim(k))
            else:
                out[k] = Matrix.zeros(0, S.dim(k))
        return out

    def __call__(self, f: dict | object, k: int | None = None) -> Cochain:
        """zeta of a universal form (UForm or sparse dict plus degree)."""
        if k is None:
            k, f = f.degree, f.coeffs
        if k > self.cx.m:
            return self.cx.zero(k)
        v = self.S.vector(f, k)
        return self.cx.from_vector(k, A_VALUED, self.matrices[k].apply(v))

    @cached_property
    def image(self) -> dict[int, Subspace]:
        """Omega_Der^k as subspaces of the cochain spaces."""
        return {k: image_basis(self.matrices[k]) for k in range(self.S.cap + 1)}

    @cached_property
    def kernel(self) -> dict[int, Subspace]:
        """F^1 Omega^k = ker zeta_k."""
        return {k: kernel_basis(self.matrices[k]) for k in range(self.S.cap + 1)}

    def der_dims(self) -> list[int]:
        return [self.image[k].dim for k in range(self.top + 1)]

    # Omega_Der-valued derivations ------------------------------------------------
    def compose(self, K: FormDerivation) -> list[Cochain]:
        """zeta o K as images of the basis of A."""
        return [self(f, K.degree) for f in K.images]

    def zeta_K(self, images: Sequence[Cochain]) -> Cochain:
        """The Der-valued cochain (X_1..X_k) -> (a -> K(a)(X_1..X_k))."""
        cx, A = self.cx, self.A
        if len(images) != A.dim:
            raise ZetaError("need one image per basis element")
        k = images[0].degree
        for i, c in enumerate(images):
            if c.degree != k or c.kind != A_VALUED:
                raise ZetaError("images must be A-valued cochains of one degree")
            if k <= self.top and not self.image[k].contains(c.vector):
                raise ZetaError(f"image of basis element {i} is not in Omega_Der")
        bad = derivation_defect(cx, images)
        if bad is not None:
            raise ZetaError(f"not a derivation at basis pair {bad}")
        vals = []
        for T in cx.tuples(k):
            X = Matrix.from_columns([c.at(T) for c in images], A.dim)
            vals.append(cx.D.coords(X))
        return Cochain(cx, k, DER_VALUED, vals)

    def zeta_of(self, K: FormDerivation) -> Cochain:
        return self.zeta_K(self.compose(K))

    # the contraction along zeta ---------------------------------------------------
    @cached_property
    def _dlifts(self) -> list[Cochain]:
        cx = self.cx
        return [differential(cx.element(unit_vec(self.A.dim, j))) for j in self.S.lifts]

    def _word_chain(self, head: Cochain, js: Sequence[int]) -> Cochain:
        out = head
        for j in js:
            out = wedge(out, self._dlifts[j])
        return out

    def jtilde(self, images: Sequence[Cochain], f: dict, l: int) -> Cochain:
        """tilde-j_K on a universal form, built from wedge products of zeta images.

        ``images`` are the values K(e_i) in Omega_Der^{k+1}.
        """
        cx = self.cx
        q = images[0].degree
        k = q - 1
        target = l + k
        if target < 0:
            return _EmptyCochain(cx, target, A_VALUED)
        acc = [ZERO] * cx.dim(target)
        for w, c in f.items():
            for i in range(1, l + 1):
                head = self._word_chain(cx.element(unit_vec(self.A.dim, w[0])), w[1:i])
                mid = images[self.S.lifts[w[i]]]
                tail = self._word_chain(cx.unit(), w[i + 1:])
                term = wedge(wedge(head, mid), tail)
                s = c * graded_sign(i - 1, k)
                for p, x in enumerate(term.vector):
                    if x:
                        acc[p] += s * x
        return cx.from_vector(target, A_VALUED, acc)


def derivation_defect(cx: ChevalleyComplex, images: Sequence[Cochain]):
    """First basis pair (i, j) where K(e_i e_j) != K(e_i) e_j + e_i K(e_j), or None."""
    A = cx.A
    n = A.dim
    k = images[0].degree

    def of(a):
        acc = [ZERO] * cx.dim(k)
        for i, x in enumerate(a):
            if x:
                for p, y in enumerate(images[i].vector):
                    if y:
                        acc[p] += x * y
        return cx.from_vector(k, A_VALUED, acc)

    for i in range(n):
        for j in range(n):
            ei, ej = cx.element(unit_vec(n, i)), cx.element(unit_vec(n, j))
            lhs = of(A.multiply(ei.values[0], ej.values[0]))
            rhs = wedge(images[i], ej) + wedge(ei, images[j])
            if lhs != rhs:
                return (i, j)
    return None


# ---------------------------------------------------------------------------
# derivations of Omega_Der


def _coords(sub: Subspace, v: Sequence) -> Vector:
    c = sub.coordinates(v)
    if c is None:
        raise ZetaError("vector is outside the subspace")
    return c


def restrict_operator(Z: Zeta, fn, degree: int) -> dict[int, Matrix]:
    """Matrix of a cochain map on Omega_Der coordinates, degree by degree."""
    maps = {}
    cx = Z.cx
    for l in range(Z.top + 1):
        t = l + degree
        if t < 0 or t > Z.top:
            continue
        src, dst = Z.image[l], Z.image[t]
        cols = []
        for b in src.basis:
            img = fn(cx.from_vector(l, A_VALUED, b))
            cols.append(_coords(dst, img.vector))
        maps[l] = Matrix.from_columns(cols, dst.dim) if cols else Matrix.zeros(dst.dim, 0)
    return maps


def _apply_restricted(Z: Zeta, maps: dict, degree: int, c: Cochain) -> Cochain:
    l = c.degree
    t = l + degree
    coords = _coords(Z.image[l], c.vector)
    out = maps[l].apply(coords)
    dst = Z.image[t]
    acc = [ZERO] * Z.cx.dim(t)
    for x, b in zip(out, dst.basis):
        if x:
            for p, y in enumerate(b):
                if y:
                    acc[p] += x * y
    return Z.cx.from_vector(t, A_VALUED, acc)


@dataclass
class DerDecomposition:
    K: Cochain  # zeta K, Der-valued of degree k
    L: Cochain  # zeta L, Der-valued of degree k + 1
    commutes_with_d: bool


def der_derivation_defect(Z: Zeta, maps: dict, degree: int):
    """Graded Leibniz for a restricted operator on spanning pairs (generator, basis)."""
    cx, A = Z.cx, Z.A
    gens = [cx.element(unit_vec(A.dim, i)) for i in range(A.dim)]
    gens += [differential(cx.element(unit_vec(A.dim, j))) for j in Z.S.lifts]
    for g in gens:
        p = g.degree
        if p not in maps:
            continue
        Dg = _apply_restricted(Z, maps, degree, g)
        for q in range(Z.top + 1):
            if p + q > Z.top or p + q + degree > Z.top or q not in maps or p + q not in maps:
                continue
            for b in Z.image[q].basis:
                psi = cx.from_vector(q, A_VALUED, b)
                lhs = _apply_restricted(Z, maps, degree, wedge(g, psi))
                rhs = wedge(Dg, psi) + wedge(g, _apply_restricted(Z, maps, degree, psi)).scale(
                    graded_sign(degree, p)
                )
                if lhs != rhs:
                    return {"generator_degree": p, "degree": q}
    return None


def decompose_der_derivation(Z: Zeta, maps: dict, degree: int) -> DerDecomposition:
    """Split a graded derivation D of Omega_Der as L_K + i_L."""
    cx, A = Z.cx, Z.A
    k = degree
    bad = der_derivation_defect(Z, maps, k)
    if bad is not None:
        raise ZetaError(f"input is not a graded derivation: {bad}")
    if k + 1 > Z.top:
        raise ZetaError("degree too high to recover the algebraic part")
    Kimgs = [_apply_restricted(Z, maps, k, cx.element(unit_vec(A.dim, i))) for i in range(A.dim)]
    zK = Z.zeta_K(Kimgs)
    LK = restrict_operator(Z, lambda c: lie_derivative(zK, c), k)
    rest = {l: maps[l] - LK[l] for l in maps if l in LK}
    Limgs = [
        _apply_restricted(Z, rest, k, differential(cx.element(unit_vec(A.dim, i)))) for i in range(A.dim)
    ]
    zL = Z.zeta_K(Limgs)
    iL = restrict_operator(Z, lambda c: insert_K(zL, c), k)
    for l in maps:
        if l in LK and l in iL and maps[l] != LK[l] + iL[l]:
            raise ZetaError(f"reassembly failed in degree {l}")
    dmap = restrict_operator(Z, differential, 1)
    flat = True
    s = graded_sign(k, 1)
    for l in maps:
        if l + 1 in maps and l in dmap and l + k in dmap:
            if dmap[l + k] @ maps[l] != (maps[l + 1] @ dmap[l]).scale(s):
                flat = False
    return DerDecomposition(zK, zL, flat)


def derivations_into(Z: Zeta, k: int) -> list[list[Cochain]]:
    """Basis of Der(A, Omega^k_Der) as lists of basis images."""
    cx, A = Z.cx, Z.A
    n = A.dim
    sub = Z.image[k]
    block = cx.dim(k)
    units = [cx.element(unit_vec(n, i)) for i in range(n)]
    cols = []
    for s in range(n):
        for b in sub.basis:
            bc = cx.from_vector(k, A_VALUED, b)
            col = [ZERO] * (n * n * block)
            for i in range(n):
                for j in range(n):
                    off = (i * n + j) * block
                    c = A.constants[i][j][s]
                    acc = bc.scale(c) if c else cx.zero(k)
                    if s == i:
                        acc = acc - wedge(bc, units[j])
                    if s == j:
                        acc = acc - wedge(units[i], bc)
                    for p, x in enumerate(acc.vector):
                        col[off + p] = x
            cols.append(col)
    if not cols:
        return []
    ker = kernel_basis(Matrix.from_columns(cols, n * n * block))
    d = sub.dim
    out = []
    for v in ker.basis:
        imgs = []
        for s in range(n):
            acc = [ZERO] * block
            for c, b in zip(v[s * d:(s + 1) * d], sub.basis):
                if c:
                    for p, x in enumerate(b):
                        acc[p] += c * x
            imgs.append(cx.from_vector(k, A_VALUED, acc))
        out.append(imgs)
    return out


def zeta_images(Z: Zeta, k: int) -> Subspace:
    """The cochains zeta K for K in Der(A, Omega^k_Der)."""
    cx = Z.cx
    return Subspace(cx.dim(k, DER_VALUED), [Z.zeta_K(imgs).vector for imgs in derivations_into(Z, k)])


def preserving_subspace(Z: Zeta, k: int) -> Subspace:
    """Z(A)-multilinear Der-valued k-cochains L whose insertion maps Omega_Der into itself."""
    cx = Z.cx
    zm = z_multilinear_subspace(cx, k, DER_VALUED)
    rows_per_L = []
    for B in zm.basis:
        L = cx.from_vector(k, DER_VALUED, B)
        col = []
        for l in range(Z.top + 1):
            t = l + k - 1
            if t < 0 or t > Z.top:
                continue
            ann = Z.image[t].annihilator().basis
            for b in Z.image[l].basis:
                img = insert_K(L, cx.from_vector(l, A_VALUED, b)).vector
                col.extend(sum((x * y for x, y in zip(a, img)), ZERO) for a in ann)
        rows_per_L.append(col)
    if not rows_per_L or not rows_per_L[0]:
        return zm
    ker = kernel_basis(Matrix.from_columns(rows_per_L, len(rows_per_L[0])))
    vecs = []
    for c in ker.basis:
        acc = [ZERO] * cx.dim(k, DER_VALUED)
        for x, B in zip(c, zm.basis):
            if x:
                for p, y in enumerate(B):
                    acc[p] += x * y
        vecs.append(acc)
    return Subspace(cx.dim(k, DER_VALUED), vecs)


# ---------------------------------------------------------------------------
# suites


def zeta_suite(A: Algebra, seed: int = 0, instances: int = 5, cap: int = 3):
    """Homomorphism properties of zeta, the ideal F^1 and the calculus on Omega_Der."""
    from .report import Report

    Z = Zeta(A, cap)
    S, cx = Z.S, Z.cx
    rep = Report(f"zeta[{A.name}]", seed)
    dC = cx.d_operator
    dO = S.d_operator
    top = Z.top

    ok = True
    for k in range(S.cap):
        if k + 1 > cx.m:
            break
        if Z.matrices[k + 1] @ dO.maps[k] != dC.maps[k] @ Z.matrices[k]:
            ok = False
    rep.add("zeta-chain-map", "ζ∘d = d∘ζ", ok)

    ok = True
    gens = S.generators()
    for g in gens:
        p = len(next(iter(g))) - 1
        zg = Z(g, p)
        for q in range(S.cap + 1 - p):
            for w in S.words(q):
                f = {w: 1}
                if Z(S._mul(g, f), p + q) != wedge(zg, Z(f, q)):
                    ok = False
    rep.add("zeta-multiplicative", "ζ(ω·η) = ζω·ζη", ok)

    ok = True
    for k in range(S.cap):
        for v in Z.kernel[k].basis:
            f = S.from_vector(k, v).coeffs
            if not Z.kernel[k + 1].contains(S.vector(S._d(f), k + 1)):
                ok = False
            for g in gens:
                p = len(next(iter(g))) - 1
                if k + p > S.cap:
                    continue
                for prod in (S._mul(g, f), S._mul(f, g)):
                    if not Z.kernel[k + p].contains(S.vector(prod, k + p)):
                        ok = False
    rep.add("f1-ideal", "F¹ is a graded differential ideal", ok)

    ok = all(z_multilinear_subspace(cx, k).contains(Z.image[k]) for k in range(top + 1))
    rep.add("image-z-multilinear", "Ω_Der ⊆ C_{Z(A)}(Der(A),A)", ok)
    rep.notes.append(
        "dim Ω_Der = " + str(Z.der_dims()) + ", dim F¹ = " + str([Z.kernel[k].dim for k in range(S.cap + 1)])
    )

    def rand_K(rng, k):
        return S.random_derivation(rng, k)

    def run(id, anchor, body):
        for i in range(instances):
            rng = random.Random(f"{seed}:{id}:{i}")
            bad = body(rng)
            if bad is not None:
                return rep.add(id, anchor, False, {"algebra": A.name, "instance": i, **bad})
        return rep.add(id, anchor, True)

    def kills_f1(rng):
        K = rand_K(rng, rng.randint(0, top))
        imgs = Z.compose(K)
        for l in range(1, S.cap + 1):
            if l + K.degree - 1 > cx.m:
                continue
            for v in Z.kernel[l].basis:
                f = S.from_vector(l, v).coeffs
                if not Z.jtilde(imgs, f, l).is_zero():
                    return {"degree": K.degree, "form_degree": l}
        return None

    def factor(rng):
        K = rand_K(rng, rng.randint(0, top))
        imgs = Z.compose(K)
        zK = Z.zeta_K(imgs)
        for l in range(1, S.cap + 1):
            if l + K.degree - 1 > cx.m:
                continue
            for w in S.words(l):
                f = {w: 1}
                if Z.jtilde(imgs, f, l) != insert_K(zK, Z(f, l)):
                    return {"degree": K.degree, "word": list(w)}
        return None

    def contraction_rule(rng):
        if top < 1 or cx.m == 0:
            return None
        K = rand_K(rng, rng.randint(1, top))
        imgs = Z.compose(K)
        k = K.degree - 1
        X = cx.D.unit(rng.randrange(cx.m))
        Xf = S.algebra_derivation(cx.D.matrix(X))
        iXK = [insert_X(X, c) for c in imgs]
        for l in range(1, S.cap + 1):
            if l + k > cx.m:
                continue
            for w in S.words(l):
                f = {w: 1}
                lhs = insert_X(X, Z.jtilde(imgs, f, l))
                if l >= 2:
                    lhs = lhs - Z.jtilde(imgs, _j(Xf, f), l - 1).scale(graded_sign(k, 1))
                if lhs != Z.jtilde(iXK, f, l):
                    return {"degree": K.degree, "word": list(w)}
        return None

    def insertion_compat(rng):
        K = rand_K(rng, rng.randint(0, top))
        zK = Z.zeta_of(K)
        q = rng.randint(1, S.cap)
        if q + K.degree - 1 > cx.m or q + K.degree - 1 > S.cap:
            return None
        om = S.random(rng, q)
        lhs = insert_K(zK, Z(om))
        rhs = Z(_j(K, om.coeffs), q + K.degree - 1)
        return None if lhs == rhs else {"degree": K.degree, "form_degree": q}

    def delta_compat(rng):
        if top < 1:
            return None
        K = rand_K(rng, rng.randint(1, top))
        L = rand_K(rng, rng.randint(1, top))
        if K.degree + L.degree - 1 > S.cap:
            return None
        lhs = Z.zeta_of(delta_bracket(K, L))
        rhs = nr_bracket(Z.zeta_of(K), Z.zeta_of(L))
        return None if lhs == rhs else {"degrees": [K.degree, L.degree]}

    def lie_compat(rng):
        K = rand_K(rng, rng.randint(0, top))
        q = rng.randint(0, S.cap - 1)
        if q + K.degree > S.cap:
            return None
        om = S.random(rng, q)
        lhs = Z(uf_lie(K, om))
        rhs = lie_derivative(Z.zeta_of(K), Z(om))
        return None if lhs == rhs else {"degree": K.degree, "form_degree": q}

    def fn_compat(rng):
        K = rand_K(rng, rng.randint(0, top))
        L = rand_K(rng, rng.randint(0, top))
        if K.degree + L.degree > S.cap:
            return None
        lhs = Z.zeta_of(uf_fn_bracket(K, L))
        rhs = fn_bracket(Z.zeta_of(K), Z.zeta_of(L))
        return None if lhs == rhs else {"degrees": [K.degree, L.degree]}

    def roundtrip(rng):
        if top < 1:
            return None
        k = rng.randint(0, top - 1)
        K, L = rand_K(rng, k), rand_K(rng, k + 1)
        zK, zL = Z.zeta_of(K), Z.zeta_of(L)
        maps = restrict_operator(Z, lambda c: lie_derivative(zK, c) + insert_K(zL, c), k)
        dec = decompose_der_derivation(Z, maps, k)
        if dec.K != zK or dec.L != zL:
            return {"degree": k}
        if dec.commutes_with_d != zL.is_zero():
            return {"degree": k, "note": "[D,d] = 0 disagrees with L = 0"}
        return None

    run("jtilde-kills-f1", "j̃_K(F¹) = 0", kills_f1)
    run("jtilde-factorization", "j̃_K = i_{ζK}∘ζ", factor)
    run("jtilde-commutator", "i_X j̃_K − (−1)^k j̃_K j_X = j̃_{i_X∘K}", contraction_rule)
    run("insertion-compatibility", "i_{ζ(K)}(ζω) = ζ(j_K ω)", insertion_compat)
    run("delta-compatibility", "ζ([K,L]^Δ) = [ζK,ζL]^∧", delta_compat)
    run("lie-compatibility", "ζ L_K ω = L_{ζK} ζω", lie_compat)
    run("fn-compatibility", "ζ([K,L]) = [ζK,ζL]", fn_compat)
    run("decomposition-roundtrip", "D = L_K + i_L on Ω_Der recovers (K, L)", roundtrip)

    ok, info = True, None
    for k in range(top + 1):
        zk, pres = zeta_images(Z, k), preserving_subspace(Z, k)
        if zk != pres:
            ok, info = False, {"degree": k, "zeta_images": zk.dim, "preserving": pres.dim}
            break
    rep.add("preserving-are-zeta", "i_L preserves Ω_Der ⟺ L = ζK", ok, info)

    def jtilde_X(rng):
        if cx.m == 0:
            return None
        K = rand_K(rng, 0)
        imgs = Z.compose(K)
        for l in range(1, min(S.cap, cx.m + 1) + 1):
            for w in S.words(l):
                f = {w: 1}
                if Z.jtilde(imgs, f, l) != Z(_j(K, f), l - 1):
                    return {"word": list(w)}
        return None

    run("jtilde-degree-zero", "j̃_X = ζ∘j_X", jtilde_X)

    if top >= 1:
        Id = Z.zeta_of(S.d)
        rep.add("zeta-of-d", "ζ(d) = Id", Id == cx.identity())
        dmaps = restrict_operator(Z, differential, 1)
        dec = decompose_der_derivation(Z, dmaps, 1) if top >= 2 else None
        if dec is not None:
            rep.add("decompose-d", "d on Ω_Der has K = Id, L = 0", dec.K == Id and dec.L.is_zero() and dec.commutes_with_d)
    return rep


# ---------------------------------------------------------------------------
# outer derivations


def omega_out(Z: Zeta) -> dict[int, Subspace]:
    """Forms in Omega_Der that are basic for all inner derivations."""
    cx = Z.cx
    gens = list(cx.D.int_basis)
    return {k: Z.image[k].intersect(operation_subspaces(cx, gens, k).basic) for k in range(Z.top + 1)}


def omega_out_suite(A: Algebra, cap: int = 3):
    """Omega_Out is a differential graded subalgebra with Omega^0_Out = Z(A)."""
    from .report import Report

    Z = Zeta(A, cap)
    cx = Z.cx
    O = omega_out(Z)
    rep = Report(f"omega-out[{A.name}]", None)
    rep.add("degree-zero-center", "Ω⁰_Out(A) = Z(A)", O[0] == A.center)
    ok = True
    for k in range(Z.top):
        for b in O[k].basis:
            if not O[k + 1].contains(differential(cx.from_vector(k, A_VALUED, b)).vector):
                ok = False
    rep.add("d-stable", "d(Ω_Out) ⊆ Ω_Out", ok)
    ok = True
    for p in range(Z.top + 1):
        for q in range(Z.top + 1 - p):
            for u in O[p].basis:
                for v in O[q].basis:
                    w = wedge(cx.from_vector(p, A_VALUED, u), cx.from_vector(q, A_VALUED, v))
                    if not O[p + q].contains(w.vector):
                        ok = False
    rep.add("product-stable", "Ω_Out·Ω_Out ⊆ Ω_Out", ok)
    rep.notes.append(f"{A.name}: dim Ω_Out = {[O[k].dim for k in range(Z.top + 1)]}")
    return rep


class OutComplex:
    """C(Out(A), Z(A)) with the induced action, and its Z(A)-multilinear part."""

    def __init__(self, A: Algebra):
        self.A = A
        self.D = D = A.derivations
        self.o = D.out_dim
        self.zbasis = list(A.center.basis)
        self.zsub = A.center
        self.zd = len(self.zbasis)
        # action of outer representatives on Z(A), in center coordinates
        self.action = [
            [self._zc(D.apply(r, z)) for z in self.zbasis] for r in D.out_reps
        ]
        # Z(A)-module structure on Out(A)
        self.zmod = []
        for zi in range(self.zd):
            zact = D.z_action[zi]
            self.zmod.append([D.out_coords(zact.apply(r)) for r in D.out_reps])
        self.bracket = D.out_bracket_constants

    def _zc(self, a: Sequence) -> Vector:
        c = self.zsub.coordinates(a)
        if c is None:
            raise ZetaError("derivation does not preserve the center")
        return c

    def tuples(self, k: int):
        return tuple(combinations(range(self.o), k)) if 0 <= k <= self.o else ()

    def dim(self, k: int) -> int:
        return len(self.tuples(k)) * self.zd

    def _value(self, v: Sequence, k: int, idx: Sequence[int]) -> Vector:
        """Value of a cochain vector at out-basis indices in any order."""
        if len(set(idx)) != len(idx):
            return zero_vec(self.zd)
        order = sorted(range(len(idx)), key=idx.__getitem__)
        key = tuple(idx[i] for i in order)
        pos = self.tuples(k).index(key)
        sign = 1
        for i in range(len(order)):
            for j in range(i + 1, len(order)):
                if order[i] > order[j]:
                    sign = -sign
        return tuple(sign * x for x in v[pos * self.zd:(pos + 1) * self.zd])

    def _value_mixed(self, v, k, first: Sequence, rest: Sequence[int]) -> Vector:
        out = [ZERO] * self.zd
        for a, c in enumerate(first):
            if c:
                for i, x in enumerate(self._value(v, k, (a,) + tuple(rest))):
                    out[i] += c * x
        return tuple(out)

    def _act(self, a: int, z: Sequence) -> Vector:
        out = [ZERO] * self.zd
        for j, c in enumerate(z):
            if c:
                for i, x in enumerate(self.action[a][j]):
                    out[i] += c * x
        return tuple(out)

    def differential(self, k: int) -> Matrix:
        cols = []
        for p in range(self.dim(k)):
            v = unit_vec(self.dim(k), p)
            col = []
            for T in self.tuples(k + 1):
                acc = [ZERO] * self.zd
                for i in range(k + 1):
                    rest = T[:i] + T[i + 1:]
                    s = -1 if i % 2 else 1
                    for q, x in enumerate(self._act(T[i], self._value(v, k, rest))):
                        acc[q] += s * x
                for i in range(k + 1):
                    for j in range(i + 1, k + 1):
                        rest = tuple(x for t, x in enumerate(T) if t not in (i, j))
                        s = -1 if (i + j) % 2 else 1
                        br = self.bracket[T[i]][T[j]]
                        for q, x in enumerate(self._value_mixed(v, k, br, rest)):
                            acc[q] += s * x
                col.extend(acc)
            cols.append(col)
        rows = self.dim(k + 1)
        return Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)

    def z_multilinear(self, k: int) -> Subspace:
        total = self.dim(k)
        if k == 0 or total == 0:
            return Subspace.full(total)
        A = self.A
        cols = []
        rests = list(combinations(range(self.o), k - 1))
        for p in range(total):
            v = unit_vec(total, p)
            col = []
            for zi, z in enumerate(self.zbasis):
                for b in range(self.o):
                    zb = self.zmod[zi][b]
                    for rest in rests:
                        lhs = self._value_mixed(v, k, zb, rest)
                        val = self._value(v, k, (b,) + rest)
                        rhs = self._zc(A.multiply(z, _expand(self.zbasis, val, A.dim)))
                        col.extend(x - y for x, y in zip(lhs, rhs))
            cols.append(col)
        if not cols or not cols[0]:
            return Subspace.full(total)
        return kernel_basis(Matrix.from_columns(cols, len(cols[0])))

    def pullback(self, cx: ChevalleyComplex, k: int) -> Matrix:
        """Pull a cochain on Out(A) back along Der(A) -> Out(A) into C^k(Der(A), A)."""
        D = self.D
        proj = [D.out_coords(D.unit(a)) for a in range(cx.m)]
        cols = []
        n = self.A.dim
        for p in range(self.dim(k)):
            v = unit_vec(self.dim(k), p)
            vals = []
            for T in cx.tuples(k):
                acc = [ZERO] * self.zd
                _multi(self, v, k, [proj[t] for t in T], acc)
                vals.append(_expand(self.zbasis, acc, n))
            cols.append([x for val in vals for x in val])
        rows = cx.dim(k)
        return Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)

    def zcomplex(self, top: int | None = None):
        """Graded dims and cohomology of C_{Z}(Out, Z)."""
        top = self.o if top is None else top
        subs = [self.z_multilinear(k) for k in range(top + 1)]
        ds = []
        for k in range(top):
            dk = self.differential(k)
            src, dst = subs[k], subs[k + 1]
            cols = []
            for b in src.basis:
                img = dk.apply(b)
                c = dst.coordinates(img)
                if c is None:
                    raise ZetaError("differential leaves the Z-multilinear subcomplex")
                cols.append(c)
            ds.append(Matrix.from_columns(cols, dst.dim) if cols else Matrix.zeros(dst.dim, 0))
        dims = [s.dim for s in subs]
        return dims, cohomology_dims(ds, dims)


def _expand(basis, coords, n) -> Vector:
    out = [ZERO] * n
    for c, b in zip(coords, basis):
        if c:
            for i, x in enumerate(b):
                out[i] += c * x
    return tuple(out)


def _multi(oc: OutComplex, v, k, args, acc) -> None:
    def rec(pos, idx, coeff):
        if pos == len(args):
            for i, x in enumerate(oc._value(v, k, idx)):
                if x:
                    acc[i] += coeff * x
            return
        for a, c in enumerate(args[pos]):
            if c and a not in idx:
                rec(pos + 1, idx + (a,), coeff * c)

    rec(0, (), 1)


def out_complex_compare(A: Algebra):
    """Basic cochains for inner derivations versus cochains on Out(A) with values in Z(A)."""
    from .report import Report

    rep = Report(f"out[{A.name}]", None)
    cx = ChevalleyComplex(A)
    oc = OutComplex(A)
    gens = list(cx.D.int_basis)
    dims_basic, dims_out, dims_bz, dims_oz = [], [], [], []
    same, same_z, inter, inj = True, True, True, True
    top = cx.m
    for k in range(top + 1):
        basic = operation_subspaces(cx, gens, k).basic
        basic_z = basic.intersect(z_multilinear_subspace(cx, k))
        P = oc.pullback(cx, k)
        if P.rank() != P.cols:
            inj = False
        img = image_basis(P)
        zsub = oc.z_multilinear(k)
        img_z = Subspace(cx.dim(k), [P.apply(b) for b in zsub.basis])
        same &= img == basic
        same_z &= img_z == basic_z
        dims_basic.append(basic.dim)
        dims_out.append(oc.dim(k))
        dims_bz.append(basic_z.dim)
        dims_oz.append(zsub.dim)
        if k < top:
            P1 = oc.pullback(cx, k + 1)
            if cx.d_operator.maps[k] @ P != P1 @ oc.differential(k):
                inter = False
    rep.add("pullback-injective", "C(Out(A),Z(A)) → C(Der(A),A) is injective", inj)
    rep.add("basic-equals-out", "basic part of C(Der(A),A) = C(Out(A),Z(A))", same)
    rep.add("basic-z-equals-out-z", "basic part of C_{Z}(Der(A),A) = C_{Z}(Out(A),Z(A))", same_z)
    rep.add("dims-agree", "graded dimensions agree", dims_basic == dims_out and dims_bz == dims_oz,
            None if dims_basic == dims_out and dims_bz == dims_oz else
            {"basic": dims_basic, "out": dims_out, "basic_z": dims_bz, "out_z": dims_oz})
    rep.add("differentials-intertwine", "d∘pullback = pullback∘d", inter)
    rep.notes.append(f"dims basic {dims_basic}, Z-multilinear {dims_bz}")
    return rep


MORITA_MAX_DIM = 16


def morita_instance_check(A: Algebra, N: int, max_dim: int = MORITA_MAX_DIM):
    """Compare C_{Z}(Out, Z) for A and Mat_N(A): graded dims and cohomology."""
    from .report import Report

    if N < 1:
        raise ValueError("N must be positive")
    if A.dim * N * N > max_dim:
        raise ResourceGuard(f"dim Mat_{N}({A.name}) = {A.dim * N * N} exceeds {max_dim}")
    B = matrix_amplification(A, N)
    rep = Report(f"morita[{A.name},{N}]", None)
    sides = []
    for alg in (A, B):
        oc = OutComplex(alg)
        dims, rows = oc.zcomplex()
        sides.append((dims, [r.betti for r in rows]))
        rep.notes.append(
            f"{alg.name}: dim {alg.dim}, Z {oc.zd}, Der {oc.D.dim}, Out {oc.o}, "
            f"graded dims {dims}, cohomology {[r.betti for r in rows]}"
        )
    (da, ca), (db, cb) = sides
    rep.add("graded-dims", "C_{Z}(Out,Z) graded dims agree for A and Mat_N(A)", da == db, {"A": da, "Mat_N(A)": db})
    rep.add("cohomology-dims", "C_{Z}(Out,Z) cohomology agrees for A and Mat_N(A)", ca == cb, {"A": ca, "Mat_N(A)": cb})
    return rep
