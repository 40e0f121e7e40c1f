"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Row reduction
is done on sparse dict rows, which keeps the structure-constant systems
(very sparse in practice) cheap, while :class:`Matrix` itself is a dense,
immutable grid.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple  # tuple of Fractions


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction.

    Floats are rejected: nothing in this package is allowed to round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use ints, Fractions or 'p/q' strings")
    return Fraction(x)


def vec(entries: Iterable) -> Vector:
    return tuple(Q(x) for x in entries)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> Vector:
    c = Q(c)
    if c == 0:
        return zero_vec(len(u))
    return tuple(c * a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int | None = None) -> Vector:
    if n is None:
        n = len(vectors[0]) if vectors else 0
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for i, x in enumerate(v):
            if x:
                out[i] += c * x
    return tuple(out)


class Matrix:
    """Dense immutable rational matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        rows = tuple(vec(r) for r in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([(ZERO,) * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([unit_vec(n, i) for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(rows, 0)
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length mismatch")
        return cls([tuple(c[i] for c in columns) for i in range(rows)], len(columns))

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int) -> "Matrix":
        grid = [[ZERO] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                grid[i][j] = Q(x)
        return cls(grid, len(columns))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> tuple[Vector, ...]:
        return self._data

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    # algebra ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix([vadd(a, b) for a, b in zip(self._data, other._data)], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix([vsub(a, b) for a, b in zip(self._data, other._data)], self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([tuple(-x for x in r) for r in self._data], self.cols)

    def scale(self, c) -> "Matrix":
        return Matrix([vscale(c, r) for r in self._data], self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        other_rows = [
            [(j, x) for j, x in enumerate(r) if x] for r in other._data
        ]
        out = []
        for r in self._data:
            acc = [ZERO] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in other_rows[k]:
                        acc[j] += a * b
            out.append(acc)
        return Matrix(out, other.cols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz), ZERO) for r in self._data)

    @property
    def T(self) -> "Matrix":
        if self.cols == 0:
            return Matrix.zeros(0, self.rows)
        return Matrix(list(zip(*self._data)), self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def rank(self) -> int:
        return len(rref(self._data, self.cols)[0])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return Matrix(self._data + other._data, self.cols)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return Matrix([a + b for a, b in zip(self._data, other._data)], self.cols + other.cols)

    def restrict_columns(self, basis: Sequence[Sequence]) -> "Matrix":
        """Matrix of ``self`` precomposed with the given column vectors."""
        return Matrix.from_columns([self.apply(b) for b in basis], self.rows)


def vstack_all(blocks: Sequence[Matrix], cols: int) -> Matrix:
    data: list = []
    for b in blocks:
        if b.cols != cols:
            raise ValueError("column count mismatch in vstack")
        data.extend(b.to_rows())
    return Matrix(data, cols)


# ---------------------------------------------------------------------------
# sparse row reduction


def _sparse(row: Sequence) -> dict:
    return {j: Q(x) for j, x in enumerate(row) if x}


def rref(rows: Iterable, ncols: int) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of the rows (dense sequences or sparse dicts).

    Returns the nonzero reduced rows (as sparse dicts, sorted by pivot) and
    their pivot columns.  Pivots are normalised to 1.
    """
    pivots: dict[int, dict] = {}
    for raw in rows:
        row = dict(raw) if isinstance(raw, dict) else _sparse(raw)
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if not f:
                continue
            for j, x in pivots[c].items():
                y = row.get(j, ZERO) - f * x
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        if inv != 1:
            row = {j: x * inv for j, x in row.items()}
        for other in pivots.values():
            f = other.get(p)
            if f:
                for j, x in row.items():
                    y = other.get(j, ZERO) - f * x
                    if y:
                        other[j] = y
                    else:
                        other.pop(j, None)
        pivots[p] = row
    order = sorted(pivots)
    return [pivots[p] for p in order], order


def _dense(row: dict, n: int) -> Vector:
    out = [ZERO] * n
    for j, x in row.items():
        out[j] = x
    return tuple(out)


class Subspace:
    """A linear subspace of Q^n, stored by its reduced echelon basis.

    Two equal subspaces always have identical ``basis`` tuples, so ``==`` is
    representation equality.
    """

    __slots__ = ("ambient_dim", "basis", "pivots", "_sparse_rows")

    def __init__(self, ambient_dim: int, vectors: Iterable = ()):
        self.ambient_dim = ambient_dim
        rows, piv = rref(vectors, ambient_dim)
        self._sparse_rows = rows
        self.pivots = tuple(piv)
        self.basis = tuple(_dense(r, ambient_dim) for r in rows)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [unit_vec(n, i) for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce(self, v: Sequence) -> dict:
        """Remainder of ``v`` after elimination against the echelon basis."""
        row = _sparse(v) if not isinstance(v, dict) else dict(v)
        for r, p in zip(self._sparse_rows, self.pivots):
            f = row.get(p)
            if f:
                for j, x in r.items():
                    y = row.get(j, ZERO) - f * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        return row

    def contains(self, v) -> bool:
        if isinstance(v, Subspace):
            self._check(v)
            return all(not self.reduce(b) for b in v.basis)
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        return not self.reduce(v)

    __contains__ = contains

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coordinates of ``v`` in the echelon basis, or None when v is outside."""
        if self.reduce(v):
            return None
        return tuple(Q(v[p]) for p in self.pivots)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def annihilator(self) -> "Subspace":
        """Vectors f with f . v = 0 for every v in the subspace."""
        return kernel_basis(Matrix(self.basis, self.ambient_dim))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        ann = list(self.annihilator().basis) + list(other.annihilator().basis)
        return kernel_basis(Matrix(ann, self.ambient_dim))

    def quotient_basis(self, sub: "Subspace") -> list[Vector]:
        """Basis vectors of ``self`` completing ``sub``'s basis (needs sub <= self)."""
        self._check(sub)
        if not self.contains(sub):
            raise ValueError("quotient_basis requires the second subspace to lie inside the first")
        reps: list[Vector] = []
        span = sub
        for b in self.basis:
            if not span.contains(b):
                reps.append(b)
                span = Subspace(self.ambient_dim, list(span.basis) + [b])
        return reps

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an ambient_dim x dim matrix."""
        return Matrix.from_columns(list(self.basis), self.ambient_dim)


def kernel_basis(m: Matrix) -> Subspace:
    rows, piv = rref(m.to_rows(), m.cols)
    pivset = set(piv)
    vectors = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = {f: ONE}
        for r, p in zip(rows, piv):
            x = r.get(f)
            if x:
                v[p] = -x
        vectors.append(v)
    return Subspace(m.cols, vectors)


def image_basis(m: Matrix) -> Subspace:
    return Subspace(m.rows, m.T.to_rows() if m.cols else [])


def subspace_ops(a: Subspace, b: Subspace, which: str):
    """Dispatch to intersect / sum / contains / quotient_basis."""
    a._check(b)
    if which == "intersect":
        return a.intersect(b)
    if which == "sum":
        return a.sum(b)
    if which == "contains":
        return a.contains(b)
    if which == "quotient_basis":
        return a.quotient_basis(b)
    raise ValueError(f"unknown subspace operation {which!r}")


class LinearSolution(NamedTuple):
    particular: Vector
    kernel: Subspace


def solve_linear(m: Matrix, rhs: Sequence) -> LinearSolution | None:
    """Solve ``m x = rhs`` exactly.

    Returns a particular solution together with the kernel, or ``None`` when
    the system is inconsistent.
    """
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal the number of rows")
    n = m.cols
    aug = []
    for r, b in zip(m.to_rows(), rhs):
        row = _sparse(r)
        if b:
            row[n] = Q(b)
        aug.append(row)
    rows, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for r, p in zip(rows, piv):
        x[p] = r.get(n, ZERO)
    return LinearSolution(tuple(x), kernel_basis(m))


def solve_columns(m: Matrix, targets: Sequence[Sequence]) -> list[Vector] | None:
    """Particular solutions of ``m x = t`` for several right-hand sides at once."""
    n = m.cols
    k = len(targets)
    aug = []
    for i, r in enumerate(m.to_rows()):
        row = _sparse(r)
        for t_idx, t in enumerate(targets):
            if t[i]:
                row[n + t_idx] = Q(t[i])
        aug.append(row)
    rows, piv = rref(aug, n + k)
    if piv and piv[-1] >= n:
        return None
    sols = []
    for t_idx in range(k):
        x = [ZERO] * n
        for r, p in zip(rows, piv):
            x[p] = r.get(n + t_idx, ZERO)
        sols.append(tuple(x))
    return sols


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    n = m.rows
    sols = solve_columns(m, [unit_vec(n, i) for i in range(n)])
    if sols is None or m.rank() != n:
        raise ValueError("matrix is singular")
    return Matrix.from_columns(sols, n)
