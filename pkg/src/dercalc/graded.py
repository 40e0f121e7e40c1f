"""Graded linear operators materialised as one matrix per source degree,
plus the shuffle combinatorics shared by every cochain formula."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .linalg import Matrix


def perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def shuffles(n: int, sizes: tuple[int, ...]) -> tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]:
    """All ordered partitions of range(n) into increasing blocks of the given sizes.

    Each entry is ``(sign, blocks)`` where sign is the sign of the permutation
    listing the blocks one after the other.
    """
    if sum(sizes) != n or any(s < 0 for s in sizes):
        return ()
    out = []

    def rec(remaining: tuple[int, ...], k: int, acc: list):
        if k == len(sizes) - 1:
            blocks = acc + [remaining]
            flat = [x for b in blocks for x in b]
            out.append((perm_sign(flat), tuple(blocks)))
            return
        for block in combinations(remaining, sizes[k]):
            rest = tuple(x for x in remaining if x not in block)
            rec(rest, k + 1, acc + [block])

    if not sizes:
        return ((1, ()),) if n == 0 else ()
    rec(tuple(range(n)), 0, [])
    return tuple(out)


def graded_sign(a: int, b: int) -> int:
    return -1 if (a * b) % 2 else 1


class GradedOperator:
    """A linear map of fixed degree between graded spaces, stored per source degree.

    ``maps[l]`` is the matrix from degree ``l`` to degree ``l + degree``.  Only
    degrees that could actually be computed are present; combining operators
    restricts to the common domain.
    """

    def __init__(self, degree: int, maps: dict[int, Matrix]):
        self.degree = degree
        self.maps = dict(maps)

    def __repr__(self) -> str:
        return f"GradedOperator(degree={self.degree}, domain={sorted(self.maps)})"

    @property
    def domain(self) -> list[int]:
        return sorted(self.maps)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        maps = {}
        for l, m in other.maps.items():
            t = l + other.degree
            if t in self.maps:
                maps[l] = self.maps[t] @ m
        return GradedOperator(self.degree + other.degree, maps)

    def _combine(self, other: "GradedOperator", sign: int) -> "GradedOperator":
        if self.degree != other.degree:
            raise ValueError("cannot add operators of different degree")
        maps = {}
        for l in self.maps.keys() & other.maps.keys():
            maps[l] = self.maps[l] + other.maps[l] if sign > 0 else self.maps[l] - other.maps[l]
        return GradedOperator(self.degree, maps)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, 1)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, -1)

    def scale(self, c) -> "GradedOperator":
        if c == 1:
            return self
        return GradedOperator(self.degree, {l: m.scale(c) for l, m in self.maps.items()})

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1)

    def commutator(self, other: "GradedOperator") -> "GradedOperator":
        """Graded commutator self o other - (-1)^{|self||other|} other o self."""
        s = graded_sign(self.degree, other.degree)
        return (self @ other) - (other @ self).scale(s)

    def restrict(self, degrees: Iterable[int]) -> "GradedOperator":
        keep = set(degrees)
        return GradedOperator(self.degree, {l: m for l, m in self.maps.items() if l in keep})

    def mismatch(self, other: "GradedOperator") -> int | None:
        """First common source degree where the two differ (None if they agree).

        Raises if the degrees differ or there is no common domain to compare on.
        """
        if self.degree != other.degree:
            raise ValueError(f"operator degrees differ: {self.degree} vs {other.degree}")
        common = sorted(self.maps.keys() & other.maps.keys())
        if not common:
            raise ValueError("operators have no common domain")
        for l in common:
            if self.maps[l] != other.maps[l]:
                return l
        return None

    def equals(self, other: "GradedOperator") -> bool:
        return self.mismatch(other) is None

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())


def operator_from_function(
    degree: int,
    degrees: Iterable[int],
    source_dim: Callable[[int], int],
    target_dim: Callable[[int], int],
    image: Callable[[int, int], Sequence],
) -> GradedOperator:
    """Materialise an operator by evaluating it on every basis vector."""
    maps = {}
    for l in degrees:
        rows = target_dim(l + degree)
        cols = [image(l, i) for i in range(source_dim(l))]
        maps[l] = Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)
    return GradedOperator(degree, maps)
