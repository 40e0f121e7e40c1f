"""Finite-dimensional unital associative algebras given by structure constants.

Elements are plain coordinate tuples in the declared basis.  The derivation
Lie algebra is computed by solving the Leibniz system and carries its own
basis; derivations are passed around either as ``n x n`` operator matrices or
as coordinate vectors in that basis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Q,
    Subspace,
    Vector,
    kernel_basis,
    lincomb,
    unit_vec,
    vec,
    vsub,
    zero_vec,
)


class AlgebraError(ValueError):
    """Raised for malformed algebra data or failed structural checks."""


@dataclass(frozen=True)
class Violation:
    kind: str  # "associativity" | "unit" | "shape"
    where: tuple
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} violated at {self.where}: {self.detail}"


class Algebra:
    """Associative unital algebra over Q.

    ``constants[i][j]`` is the coordinate vector of ``e_i * e_j``.
    """

    def __init__(self, name: str, basis_names: Sequence[str], constants, unit: Sequence):
        self.name = name
        self.basis_names = tuple(basis_names)
        self.dim = n = len(self.basis_names)
        self.constants = tuple(tuple(vec(constants[i][j]) for j in range(n)) for i in range(n))
        for row in self.constants:
            for v in row:
                if len(v) != n:
                    raise AlgebraError("structure constant vector has wrong length")
        self.unit = vec(unit)
        if len(self.unit) != n:
            raise AlgebraError("unit has wrong length")

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, dim={self.dim})"

    @classmethod
    def from_triples(cls, name, basis_names, triples, unit) -> "Algebra":
        n = len(basis_names)
        table = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, c in triples:
            table[i][j][k] += Q(c)
        return cls(name, basis_names, table, unit)

    # elements ---------------------------------------------------------------
    def basis_element(self, i: int) -> Vector:
        return unit_vec(self.dim, i)

    def zero(self) -> Vector:
        return zero_vec(self.dim)

    def _check(self, *elements) -> None:
        for a in elements:
            if len(a) != self.dim:
                raise AlgebraError(
                    f"element of length {len(a)} does not belong to {self.name} (dim {self.dim})"
                )

    def multiply(self, a: Sequence, b: Sequence) -> Vector:
        self._check(a, b)
        out = [ZERO] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            row = self.constants[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += xy * c
        return tuple(out)

    def commutator(self, a: Sequence, b: Sequence) -> Vector:
        return vsub(self.multiply(a, b), self.multiply(b, a))

    @cached_property
    def left_mult(self) -> tuple[Matrix, ...]:
        """``left_mult[i]`` is the matrix of ``x -> e_i x``."""
        n = self.dim
        return tuple(
            Matrix.from_columns([self.constants[i][j] for j in range(n)], n) for i in range(n)
        )

    @cached_property
    def right_mult(self) -> tuple[Matrix, ...]:
        """``right_mult[j]`` is the matrix of ``x -> x e_j``."""
        n = self.dim
        return tuple(
            Matrix.from_columns([self.constants[i][j] for i in range(n)], n) for j in range(n)
        )

    def left_matrix(self, a: Sequence) -> Matrix:
        self._check(a)
        n = self.dim
        return Matrix.from_columns([self.multiply(a, unit_vec(n, j)) for j in range(n)], n)

    def right_matrix(self, b: Sequence) -> Matrix:
        self._check(b)
        n = self.dim
        return Matrix.from_columns([self.multiply(unit_vec(n, j), b) for j in range(n)], n)

    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.constants[i][j] == self.constants[j][i] for i in range(n) for j in range(n))

    # structure ------------------------------------------------------------------
    @cached_property
    def center(self) -> Subspace:
        return center(self)

    @cached_property
    def derivations(self) -> "DerivationSpace":
        return derivations(self)


def validate_algebra(A: Algebra) -> Violation | None:
    """Return ``None`` when A is associative with two-sided unit, else the first violation."""
    n = A.dim
    c = A.constants
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = A.multiply(c[i][j], unit_vec(n, k))
                right = A.multiply(unit_vec(n, i), c[j][k])
                if left != right:
                    return Violation(
                        "associativity",
                        (i, j, k),
                        f"(e{i} e{j}) e{k} = {_fmt(left)} but e{i} (e{j} e{k}) = {_fmt(right)}",
                    )
    for i in range(n):
        e = unit_vec(n, i)
        if A.multiply(A.unit, e) != e or A.multiply(e, A.unit) != e:
            return Violation("unit", (i,), f"1 does not act as identity on e{i}")
    return None


def _fmt(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def multiply(A: Algebra, a: Sequence, b: Sequence) -> Vector:
    return A.multiply(a, b)


def commutator(A: Algebra, a: Sequence, b: Sequence) -> Vector:
    return A.commutator(a, b)


def center(A: Algebra) -> Subspace:
    """Kernel of the stacked operator a -> ([a, e_1], ..., [a, e_n])."""
    n = A.dim
    rows = []
    for j in range(n):
        # [a, e_j] = (R_j - L_j) a
        rows.extend((A.right_mult[j] - A.left_mult[j]).to_rows())
    return kernel_basis(Matrix(rows, n))


def inner_derivation(A: Algebra, a: Sequence) -> Matrix:
    """Matrix of b -> [a, b]."""
    return A.left_matrix(a) - A.right_matrix(a)


def _flatten(m: Matrix) -> Vector:
    return tuple(x for r in m.to_rows() for x in r)


def _unflatten(v: Sequence, n: int) -> Matrix:
    return Matrix([v[r * n:(r + 1) * n] for r in range(n)], n)


def leibniz_system(A: Algebra) -> Matrix:
    """Linear conditions on the n*n entries of X (row-major) for X to be a derivation."""
    n = A.dim
    c = A.constants
    rows = []
    for i in range(n):
        for j in range(n):
            for t in range(n):
                row = [ZERO] * (n * n)
                for k in range(n):
                    if c[i][j][k]:
                        row[t * n + k] += c[i][j][k]
                for r in range(n):
                    if c[r][j][t]:
                        row[r * n + i] -= c[r][j][t]
                    if c[i][r][t]:
                        row[r * n + j] -= c[i][r][t]
                if any(row):
                    rows.append(row)
    if not rows:
        return Matrix.zeros(0, n * n)
    return Matrix(rows, n * n)


@dataclass
class DerivationSpace:
    """Der(A) with its bracket, the inner ideal and a choice of outer representatives.

    Derivation coordinates refer to ``der_basis``.  ``int_subspace`` and the
    ``out_reps`` live in that coordinate space.
    """

    algebra: Algebra
    der_subspace: Subspace  # in flattened n*n operator coordinates
    der_basis: list[Matrix]
    bracket_constants: list[list[Vector]]
    int_subspace: Subspace
    out_reps: list[Vector]
    out_bracket_constants: list[list[Vector]]
    z_action: list[Matrix] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.der_basis)

    @property
    def int_basis(self) -> tuple[Vector, ...]:
        return self.int_subspace.basis

    @property
    def int_dim(self) -> int:
        return self.int_subspace.dim

    @property
    def out_dim(self) -> int:
        return len(self.out_reps)

    def coords(self, op: Matrix) -> Vector:
        c = self.der_subspace.coordinates(_flatten(op))
        if c is None:
            raise AlgebraError("operator is not a derivation of the algebra")
        return c

    def is_derivation(self, op: Matrix) -> bool:
        return self.der_subspace.contains(_flatten(op))

    def matrix(self, coords: Sequence) -> Matrix:
        n = self.algebra.dim
        if not self.der_basis:
            return Matrix.zeros(n, n)
        flat = lincomb(coords, [_flatten(X) for X in self.der_basis], n * n)
        return _unflatten(flat, n)

    def apply(self, coords: Sequence, a: Sequence) -> Vector:
        """X(a) for the derivation X with the given coordinates."""
        out = [ZERO] * self.algebra.dim
        for c, X in zip(coords, self.der_basis):
            if c:
                for i, x in enumerate(X.apply(a)):
                    out[i] += c * x
        return tuple(out)

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        m = self.dim
        out = [ZERO] * m
        for a, x in enumerate(u):
            if not x:
                continue
            for b, y in enumerate(v):
                if not y:
                    continue
                for c, z in enumerate(self.bracket_constants[a][b]):
                    if z:
                        out[c] += x * y * z
        return tuple(out)

    def unit(self, i: int) -> Vector:
        return unit_vec(self.dim, i)

    def out_coords(self, u: Sequence) -> Vector:
        """Coordinates of the class of u in Out(A) with respect to out_reps."""
        return _out_coordinates(self, u)


def _out_coordinates(D: DerivationSpace, u: Sequence) -> Vector:
    m = D.dim
    cols = list(D.out_reps) + list(D.int_subspace.basis)
    if not cols:
        return ()
    from .linalg import solve_linear

    sol = solve_linear(Matrix.from_columns(cols, m), u)
    if sol is None:
        raise AlgebraError("vector does not lie in Der(A)")
    return sol.particular[: len(D.out_reps)]


def derivations(A: Algebra) -> DerivationSpace:
    """Solve the Leibniz system and assemble Der(A), Int(A), Out(A)."""
    n = A.dim
    space = kernel_basis(leibniz_system(A))
    basis = [_unflatten(v, n) for v in space.basis]
    m = len(basis)
    D = DerivationSpace(A, space, basis, [], Subspace.zero(m), [], [])

    def coords(op: Matrix) -> Vector:
        return D.coords(op)

    D.bracket_constants = [
        [coords(X @ Y - Y @ X) for Y in basis] for X in basis
    ]
    ads = [coords(inner_derivation(A, unit_vec(n, i))) for i in range(n)]
    D.int_subspace = Subspace(m, ads)
    D.out_reps = Subspace.full(m).quotient_basis(D.int_subspace)
    _check_lie(D)
    _check_ideal(D, ads)
    D.out_bracket_constants = [
        [D.out_coords(D.bracket(r, s)) for s in D.out_reps] for r in D.out_reps
    ]
    D.z_action = [
        Matrix.from_columns([coords(A.left_matrix(z) @ X) for X in basis], m)
        for z in A.center.basis
    ]
    return D


def _check_lie(D: DerivationSpace) -> None:
    m = D.dim
    e = [D.unit(i) for i in range(m)]
    for a in range(m):
        if any(D.bracket(e[a], e[a])):
            raise AlgebraError("computed bracket is not alternating")
        for b in range(m):
            for c in range(m):
                jac = [
                    D.bracket(e[a], D.bracket(e[b], e[c])),
                    D.bracket(e[b], D.bracket(e[c], e[a])),
                    D.bracket(e[c], D.bracket(e[a], e[b])),
                ]
                if any(sum(col) for col in zip(*jac)):
                    raise AlgebraError(f"Jacobi identity fails on derivation basis {(a, b, c)}")


def _check_ideal(D: DerivationSpace, ads: list[Vector]) -> None:
    A = D.algebra
    for i in range(D.dim):
        X = D.der_basis[i]
        for a in range(A.dim):
            lhs = D.bracket(D.unit(i), ads[a])
            rhs = D.coords(inner_derivation(A, X.column(a)))
            if lhs != rhs:
                raise AlgebraError("[X, ad(a)] != ad(X(a)); Int(A) is not an ideal")


def check_algebra_hom(f: Matrix, A: Algebra, B: Algebra) -> bool:
    if f.shape != (B.dim, A.dim):
        raise AlgebraError(f"hom matrix must be {B.dim}x{A.dim}, got {f.rows}x{f.cols}")
    if f.apply(A.unit) != B.unit:
        return False
    cols = f.columns()
    for i in range(A.dim):
        for j in range(A.dim):
            if f.apply(A.constants[i][j]) != B.multiply(cols[i], cols[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# catalog


def mat(N: int) -> Algebra:
    names = [f"E{p + 1}{q + 1}" for p in range(N) for q in range(N)]
    triples = []
    for p in range(N):
        for q in range(N):
            for s in range(N):
                triples.append((p * N + q, q * N + s, p * N + s, 1))
    unit = [ONE if p == q else ZERO for p in range(N) for q in range(N)]
    return Algebra.from_triples(f"mat({N})", names, triples, unit)


def dual() -> Algebra:
    """Q[eps]/(eps^2) on the basis (1, eps)."""
    triples = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]
    return Algebra.from_triples("dual", ["1", "eps"], triples, [1, 0])


def functions(S: int) -> Algebra:
    """Q^S with pointwise product, basis of minimal idempotents."""
    triples = [(i, i, i, 1) for i in range(S)]
    return Algebra.from_triples(f"functions({S})", [f"p{i + 1}" for i in range(S)], triples, [1] * S)


def triangular(N: int) -> Algebra:
    """Upper triangular N x N matrices."""
    idx = [(p, q) for p in range(N) for q in range(p, N)]
    pos = {pq: i for i, pq in enumerate(idx)}
    triples = []
    for (p, q) in idx:
        for (r, s) in idx:
            if q == r:
                triples.append((pos[(p, q)], pos[(r, s)], pos[(p, s)], 1))
    unit = [ONE if p == q else ZERO for (p, q) in idx]
    names = [f"E{p + 1}{q + 1}" for (p, q) in idx]
    return Algebra.from_triples(f"triangular({N})", names, triples, unit)


def matrix_amplification(A: Algebra, N: int) -> Algebra:
    """Mat_N(A) on the basis E_pq (x) e_i, index (p*N + q)*n + i."""
    if N < 1:
        raise AlgebraError("amplification size must be at least 1")
    n = A.dim
    D = N * N * n
    table = [[[ZERO] * D for _ in range(D)] for _ in range(D)]
    for p in range(N):
        for q in range(N):
            for s in range(N):
                for i in range(n):
                    for j in range(n):
                        prod = A.constants[i][j]
                        left = (p * N + q) * n + i
                        right = (q * N + s) * n + j
                        for k, c in enumerate(prod):
                            if c:
                                table[left][right][(p * N + s) * n + k] += c
    unit = [ZERO] * D
    for p in range(N):
        for i in range(n):
            unit[(p * N + p) * n + i] = A.unit[i]
    names = [f"E{p + 1}{q + 1}.{A.basis_names[i]}" for p in range(N) for q in range(N) for i in range(n)]
    return Algebra(f"amplify({A.name},{N})", names, table, unit)


_BUILTIN = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def builtin(spec: str) -> Algebra:
    """Parse names like ``mat(2)``, ``dual``, ``functions(2)``, ``triangular(2)``,
    ``amplify(dual,2)``."""
    m = _BUILTIN.match(spec)
    if not m:
        raise KeyError(spec)
    name, args = m.group(1), m.group(2)
    if name == "dual" and not args:
        return dual()
    if name == "amplify" and args:
        base, _, count = args.rpartition(",")
        return matrix_amplification(builtin(base), int(count))
    if args is None or not args.strip().isdigit():
        raise KeyError(spec)
    k = int(args)
    factories = {"mat": mat, "functions": functions, "triangular": triangular}
    if name not in factories or k < 1:
        raise KeyError(spec)
    return factories[name](k)


CATALOG = {"M2": "mat(2)", "D2": "dual", "F2": "functions(2)", "T2": "triangular(2)"}
