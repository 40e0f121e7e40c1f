"""Finite-dimensional bimodules, their homomorphisms into each other and the
diagonal quotient Diag(M)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import Algebra, Violation, mat
from .chevalley import ChevalleyComplex
from .forms import UniversalForms
from .linalg import ZERO, Matrix, Subspace, kernel_basis, solve_columns, unit_vec


class BimoduleError(ValueError):
    pass


class Bimodule:
    """An A-bimodule: ``left[i]`` acts as m -> e_i m, ``right[i]`` as m -> m e_i."""

    def __init__(self, A: Algebra, left: Sequence[Matrix], right: Sequence[Matrix], name: str = "M"):
        if len(left) != A.dim or len(right) != A.dim:
            raise BimoduleError("need one action matrix per basis element")
        dims = {m.shape for m in list(left) + list(right)}
        if len(dims) != 1 or (r := next(iter(dims)))[0] != r[1]:
            raise BimoduleError("action matrices must be square of one size")
        self.A = A
        self.dim = next(iter(dims))[0]
        self.left = tuple(left)
        self.right = tuple(right)
        self.name = name

    def __repr__(self) -> str:
        return f"Bimodule({self.name}, dim={self.dim})"

    def lam(self, a: Sequence) -> Matrix:
        return _combine(self.left, a, self.dim)

    def rho(self, b: Sequence) -> Matrix:
        return _combine(self.right, b, self.dim)

    def validate(self) -> Violation | None:
        A, n = self.A, self.A.dim
        I = Matrix.identity(self.dim)
        if self.lam(A.unit) != I:
            return Violation("unit", "left", "1 does not act as the identity")
        if self.rho(A.unit) != I:
            return Violation("unit", "right", "1 does not act as the identity")
        for i in range(n):
            for j in range(n):
                ab = A.constants[i][j]
                if self.left[i] @ self.left[j] != self.lam(ab):
                    return Violation("left module", f"({i},{j})", "e_i(e_j m) != (e_i e_j) m")
                if self.right[j] @ self.right[i] != self.rho(ab):
                    return Violation("right module", f"({i},{j})", "(m e_i) e_j != m (e_i e_j)")
                if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                    return Violation("bimodule", f"({i},{j})", "left and right actions do not commute")
        return None


def _combine(ms: Sequence[Matrix], coeffs: Sequence, size: int) -> Matrix:
    out = Matrix.zeros(size, size)
    for c, m in zip(coeffs, ms):
        if c:
            out = out + m.scale(c)
    return out


def _checked(M: Bimodule) -> Bimodule:
    bad = M.validate()
    if bad is not None:
        raise BimoduleError(str(bad))
    return M


# ---------------------------------------------------------------------------
# constructors


def regular(A: Algebra) -> Bimodule:
    return _checked(Bimodule(A, A.left_mult, A.right_mult, f"{A.name}"))


def tensor_square(A: Algebra) -> Bimodule:
    """A (x) A with a (x . y) b = a x (x) y b; basis index x * n + y."""
    n = A.dim
    I = Matrix.identity(n)
    left = [_kron(A.left_mult[i], I) for i in range(n)]
    right = [_kron(I, A.right_mult[i]) for i in range(n)]
    return _checked(Bimodule(A, left, right, f"{A.name}⊗{A.name}"))


def _kron(P: Matrix, Q_: Matrix) -> Matrix:
    p, q = P.rows, Q_.rows
    rows = []
    for i in range(p):
        for k in range(q):
            rows.append([P[i, j] * Q_[k, l] for j in range(P.cols) for l in range(Q_.cols)])
    return Matrix(rows, P.cols * Q_.cols)


def universal_one_forms(A: Algebra, S: UniversalForms | None = None) -> Bimodule:
    """Omega^1(A) in the reduced model A (x) Abar."""
    S = S or UniversalForms(A, 1)
    words = S.words(1)
    idx = {w: i for i, w in enumerate(words)}
    d = len(words)

    def table(act):
        out = []
        for i in range(A.dim):
            e = unit_vec(A.dim, i)
            cols = [{idx[u]: x for u, x in act(e, {w: 1}).items()} for w in words]
            out.append(Matrix.from_sparse_columns(cols, d))
        return out

    left = table(lambda e, f: S._left(e, f))
    right = table(lambda e, f: S._right(f, e))
    return _checked(Bimodule(A, left, right, f"Ω¹({A.name})"))


def chevalley_degree(A: Algebra, k: int, cx: ChevalleyComplex | None = None) -> Bimodule:
    """C^k(Der(A), A) with (a phi b)(X) = a phi(X) b."""
    cx = cx or ChevalleyComplex(A)
    blocks = cx.count(k)
    left = [_block_diag(A.left_mult[i], blocks) for i in range(A.dim)]
    right = [_block_diag(A.right_mult[i], blocks) for i in range(A.dim)]
    return _checked(Bimodule(A, left, right, f"C^{k}({A.name})"))


def finite_power(A: Algebra, J: int) -> Bimodule:
    left = [_block_diag(A.left_mult[i], J) for i in range(A.dim)]
    right = [_block_diag(A.right_mult[i], J) for i in range(A.dim)]
    return _checked(Bimodule(A, left, right, f"{A.name}^{J}"))


def _block_diag(m: Matrix, copies: int) -> Matrix:
    n = m.rows
    size = n * copies
    rows = []
    for b in range(copies):
        for i in range(n):
            row = [ZERO] * size
            row[b * n:(b + 1) * n] = m.row(i)
            rows.append(row)
    return Matrix(rows, size) if rows else Matrix.zeros(0, 0)


def submodule(M: Bimodule, sub: Subspace, name: str | None = None) -> Bimodule:
    """A sub-bimodule in the coordinates of its echelon basis."""
    if sub.ambient_dim != M.dim:
        raise BimoduleError("subspace lives in the wrong space")

    def restricted(m: Matrix) -> Matrix:
        cols = []
        for b in sub.basis:
            c = sub.coordinates(m.apply(b))
            if c is None:
                raise BimoduleError("subspace is not a sub-bimodule")
            cols.append(c)
        return Matrix.from_columns(cols, sub.dim)

    left = [restricted(m) for m in M.left]
    right = [restricted(m) for m in M.right]
    return _checked(Bimodule(M.A, left, right, name or f"{M.name}|sub"))


@dataclass
class Quotient:
    module: Bimodule
    projection: Matrix  # quotient.dim x M.dim
    reps: list  # vectors of M lifting the quotient basis


def quotient(M: Bimodule, K: Subspace) -> Quotient:
    """M / K for a sub-bimodule K, with basis chosen by echelon completion."""
    if K.ambient_dim != M.dim:
        raise BimoduleError("subspace lives in the wrong space")
    for acts in (M.left, M.right):
        for m in acts:
            for b in K.basis:
                if not K.contains(m.apply(b)):
                    raise BimoduleError("subspace is not a sub-bimodule")
    reps = Subspace.full(M.dim).quotient_basis(K)
    q = len(reps)
    basis = Matrix.from_columns(list(reps) + list(K.basis), M.dim)
    sols = solve_columns(basis, [unit_vec(M.dim, i) for i in range(M.dim)])
    P = Matrix.from_columns([s[:q] for s in sols], q) if sols else Matrix.zeros(q, 0)

    def induced(m: Matrix) -> Matrix:
        return Matrix.from_columns([P.apply(m.apply(r)) for r in reps], q)

    Qm = Bimodule(M.A, [induced(m) for m in M.left], [induced(m) for m in M.right], f"{M.name}/K")
    return Quotient(_checked(Qm), P, list(reps))


# ---------------------------------------------------------------------------
# homomorphisms


def hom_AA(M: Bimodule, N: Bimodule) -> list[Matrix]:
    """Basis of the bimodule maps M -> N (N.dim x M.dim matrices)."""
    if M.A is not N.A and M.A.constants != N.A.constants:
        raise BimoduleError("bimodules over different algebras")
    p, q = N.dim, M.dim
    unknowns = p * q
    eqs = []
    for acts_M, acts_N in ((M.left, N.left), (M.right, N.right)):
        for aM, aN in zip(acts_M, acts_N):
            eqs.append((aM, aN))
    rows_per = p * q
    cols = []
    for r in range(p):
        for c in range(q):
            # F = E_rc: F aM - aN F
            col: dict = {}
            for e, (aM, aN) in enumerate(eqs):
                off = e * rows_per
                for j in range(q):
                    x = aM[c, j]
                    if x:
                        k = off + r * q + j
                        col[k] = col.get(k, ZERO) + x
                for i in range(p):
                    y = aN[i, r]
                    if y:
                        k = off + i * q + c
                        col[k] = col.get(k, ZERO) - y
            cols.append({k: v for k, v in col.items() if v})
    if unknowns == 0:
        return []
    ker = kernel_basis(Matrix.from_sparse_columns(cols, len(eqs) * rows_per))
    return [Matrix([v[i * q:(i + 1) * q] for i in range(p)], q) for v in ker.basis]


def is_hom(f: Matrix, M: Bimodule, N: Bimodule) -> bool:
    return all(f @ a == b @ f for a, b in zip(M.left, N.left)) and all(
        f @ a == b @ f for a, b in zip(M.right, N.right)
    )


@dataclass
class Diag:
    module: Bimodule
    projection: Matrix
    kernel: Subspace
    reps: list


def diag_kernel(M: Bimodule) -> Subspace:
    homs = hom_AA(M, regular(M.A))
    if not homs:
        return Subspace.full(M.dim)
    rows = [r for h in homs for r in h.to_rows()]
    return kernel_basis(Matrix(rows, M.dim))


def diag(M: Bimodule) -> Diag:
    K = diag_kernel(M)
    q = quotient(M, K)
    mod = q.module
    mod.name = f"Diag({M.name})"
    return Diag(mod, q.projection, K, q.reps)


def is_diagonal(M: Bimodule) -> bool:
    return diag_kernel(M).dim == 0


def factor_through_diag(D: Diag, M: Bimodule, f: Matrix) -> Matrix | None:
    """The map g with f = g o p_M, or None when f does not vanish on ker p_M."""
    if any(any(f.apply(b)) for b in D.kernel.basis):
        return None
    return Matrix.from_columns([f.apply(r) for r in D.reps], f.rows) if D.reps else Matrix.zeros(f.rows, 0)


def is_derivation_based(M: Bimodule, A: Algebra | None = None) -> bool:
    """Every bimodule map Omega^1(A) -> M kills the kernel of zeta_1."""
    from .derforms import Zeta

    A = A or M.A
    Z = Zeta(A, 1)
    O1 = universal_one_forms(A, Z.S)
    F1 = Z.kernel[1]
    return all(not any(h.apply(b)) for h in hom_AA(O1, M) for b in F1.basis)


def horizontal_tensors(A: Algebra) -> Subspace:
    """Sum x_n (x) y_n in A (x) A with sum x_n c y_n = 0 for every c."""
    n = A.dim
    cols = []
    for x in range(n):
        for y in range(n):
            col = []
            for c in range(n):
                col.extend(A.multiply(A.multiply(unit_vec(n, x), unit_vec(n, c)), unit_vec(n, y)))
            cols.append(col)
    return kernel_basis(Matrix.from_columns(cols, n * n))


def multiplication_kernel(A: Algebra) -> Subspace:
    n = A.dim
    cols = [A.multiply(unit_vec(n, x), unit_vec(n, y)) for x in range(n) for y in range(n)]
    return kernel_basis(Matrix.from_columns(cols, n))


def mat2_catalog() -> list[Bimodule]:
    A = mat(2)
    return [regular(A), universal_one_forms(A), tensor_square(A), chevalley_degree(A, 1), finite_power(A, 2)]


# ---------------------------------------------------------------------------
# suite


def diag_suite(algebras: Sequence[Algebra], seed: int = 0, instances: int = 3):
    """Diagonal quotients of the standard bimodules and Diag(Omega^1) versus Omega^1_Der."""
    from .derforms import Zeta
    from .report import Report

    rep = Report("diag", seed)
    for A in algebras:
        tag = A.name
        R = regular(A)
        hRR = hom_AA(R, R)
        rep.add(f"hom-regular[{tag}]", "Hom^A_A(A,A) ≅ Z(A)", len(hRR) == A.center.dim,
                {"homs": len(hRR), "center": A.center.dim})
        rep.add(f"diag-regular[{tag}]", "Diag(A) = A", is_diagonal(R))

        T = tensor_square(A)
        hT = hom_AA(T, R)
        rep.add(f"hom-tensor[{tag}]", "Hom^A_A(A⊗A,A) ≅ A via φ ↦ φ(1⊗1)", _check_tensor_homs(A, hT))
        K = diag_kernel(T)
        rep.add(f"tensor-kernel-horizontal[{tag}]", "ker p_{A⊗A} = Ω¹(A)_{H-Int(A)}", K == horizontal_tensors(A))
        if A.is_commutative():
            dT = diag(T)
            ok = dT.module.dim == A.dim and K == multiplication_kernel(A)
            rep.add(f"diag-tensor-commutative[{tag}]", "Diag(A⊗A) = A for commutative A", ok)

        Z = Zeta(A, 1)
        O1 = universal_one_forms(A, Z.S)
        D1 = diag(O1)
        ok_dim = D1.module.dim == Z.image[1].dim
        rep.add(f"diag-omega1-dim[{tag}]", "dim Diag(Ω¹(A)) = dim Ω¹_Der(A)", ok_dim,
                {"diag": D1.module.dim, "omega_der": Z.image[1].dim})
        rep.add(f"diag-omega1-square[{tag}]", "ζ₁ = ι∘p with ι : Diag(Ω¹(A)) ≅ Ω¹_Der(A)", _zeta_square(Z, O1, D1))

        rep.add(f"diag-idempotent[{tag}]", "Diag(Diag(M)) = Diag(M)",
                all(is_diagonal(diag(M).module) for M in (T, O1)))
        rep.add(f"products-diagonal[{tag}]", "A^J is diagonal", is_diagonal(finite_power(A, 2)))

        rng = random.Random(f"{seed}:adjunction[{tag}]")
        ok = True
        for M in (T, O1):
            D = diag(M)
            homs = hom_AA(M, finite_power(A, 2))
            for _ in range(instances):
                f = _random_combo(rng, homs, finite_power(A, 2).dim, M.dim)
                g = factor_through_diag(D, M, f)
                if g is None or g @ D.projection != f or not is_hom(g, D.module, finite_power(A, 2)):
                    ok = False
        rep.add(f"diag-adjunction[{tag}]", "maps to diagonal bimodules factor uniquely through p_M", ok)

        based = [is_derivation_based(M, A) for M in (R, finite_power(A, 2))]
        rep.add(f"diagonal-derivation-based[{tag}]", "diagonal bimodules are derivation based", all(based))
        rep.notes.append(
            f"{tag}: dim ker p(A⊗A) = {K.dim}, dim F¹Ω¹ = {Z.kernel[1].dim}, "
            f"A⊗A derivation based: {is_derivation_based(T, A)}"
        )

    cat = mat2_catalog()
    flags = {M.name: is_diagonal(M) for M in cat}
    rep.add("mat2-catalog-diagonal", "every Mat_2 bimodule in the catalog is diagonal", all(flags.values()), flags)
    return rep


def _random_combo(rng: random.Random, basis: Sequence[Matrix], rows: int, cols: int) -> Matrix:
    out = Matrix.zeros(rows, cols)
    for b in basis:
        c = rng.randint(-3, 3)
        if c:
            out = out + b.scale(c)
    return out


def _check_tensor_homs(A: Algebra, homs: Sequence[Matrix]) -> bool:
    """phi -> phi(1 (x) 1) is a bijection Hom(A(x)A, A) -> A."""
    n = A.dim
    one = A.unit
    t = [one[x] * one[y] for x in range(n) for y in range(n)]
    images = [h.apply(t) for h in homs]
    return len(homs) == n and Matrix.from_columns(images, n).rank() == n


def _zeta_square(Z, O1: Bimodule, D1: Diag) -> bool:
    """The induced map Diag(Omega^1) -> C^1 is an injective bimodule map onto Omega^1_Der."""
    zeta1 = Z.matrices[1]
    if D1.kernel != Z.kernel[1]:
        return False
    iota = factor_through_diag(D1, O1, zeta1)
    if iota is None or iota @ D1.projection != zeta1:
        return False
    C1 = chevalley_degree(Z.A, 1, Z.cx)
    if not is_hom(iota, D1.module, C1):
        return False
    img = Subspace(zeta1.rows, iota.columns())
    return iota.rank() == iota.cols and img == Z.image[1]
