"""Binary relations on {1, ..., n} and the preorders that shape structural matrices.

The Python API indexes points from 0; the JSON encoding and every message
shown to users are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import NotAPreorder, SizeMismatch

Table = tuple[tuple[bool, ...], ...]


@dataclass(frozen=True, eq=False)
class Relation:
    """A raw relation, stored as an n x n boolean table."""

    n: int
    table: Table

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ground set size must be positive, got {self.n}")
        if len(self.table) != self.n or any(len(row) != self.n for row in self.table):
            raise SizeMismatch(f"relation table must be {self.n}x{self.n}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], *, one_based: bool = False):
        shift = 1 if one_based else 0
        rows = [[False] * n for _ in range(n)]
        for i, j in pairs:
            i, j = i - shift, j - shift
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i + 1},{j + 1}) outside {{1,...,{n}}}")
            rows[i][j] = True
        return cls(n, tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal(cls, n: int):
        return cls.from_pairs(n, ((i, i) for i in range(n)))

    @classmethod
    def full(cls, n: int):
        return cls(n, tuple((True,) * n for _ in range(n)))

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.n == other.n and self.table == other.table

    def __hash__(self):
        return hash((self.n, self.table))

    def __contains__(self, pair) -> bool:
        i, j = pair
        return self.table[i][j]

    def pairs(self, *, one_based: bool = False) -> list[tuple[int, int]]:
        s = 1 if one_based else 0
        return [(i + s, j + s) for i in range(self.n) for j in range(self.n) if self.table[i][j]]

    def is_reflexive(self) -> bool:
        return all(self.table[i][i] for i in range(self.n))

    def is_transitive(self) -> bool:
        t, n = self.table, self.n
        return all(
            t[i][k] or not (t[i][j] and t[j][k])
            for i in range(n) for j in range(n) for k in range(n)
        )

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs(one_based=True)]}

    def __str__(self) -> str:
        body = ",".join(f"({i},{j})" for i, j in self.pairs(one_based=True))
        return f"{{{body}}} on n={self.n}"


class Preorder(Relation):
    """A reflexive, transitive relation; construction fails otherwise."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_reflexive():
            missing = [i + 1 for i in range(self.n) if not self.table[i][i]]
            raise NotAPreorder(f"not reflexive: missing ({missing[0]},{missing[0]})")
        if not self.is_transitive():
            raise NotAPreorder(f"not transitive: {Relation.__str__(self)}")


def validate(rel: Relation) -> bool:
    return rel.is_reflexive() and rel.is_transitive()


def closure(rel: Relation) -> Preorder:
    """Reflexive-transitive closure by Warshall saturation."""
    n = rel.n
    t = [list(row) for row in rel.table]
    for i in range(n):
        t[i][i] = True
    for k in range(n):
        for i in range(n):
            if t[i][k]:
                row_k = t[k]
                row_i = t[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return Preorder(n, tuple(tuple(r) for r in t))


def as_preorder(rel: Relation, *, close: bool = False) -> Preorder:
    """Return ``rel`` as a Preorder, closing it only when asked to."""
    if isinstance(rel, Preorder):
        return rel
    if close:
        return closure(rel)
    return Preorder(rel.n, rel.table)


def compose_kron(outer: Preorder, inner: Preorder) -> Preorder:
    """Relation on n*m points describing n x n block matrices with m x m blocks.

    Point i (1-based) sits in block ceil(i/m) at in-block position
    ((i - 1) mod m) + 1; a pair is related when both the block indices are
    related by ``outer`` and the in-block positions by ``inner``.
    """
    n, m = outer.n, inner.n
    N = n * m
    rows = tuple(
        tuple(outer.table[i // m][j // m] and inner.table[i % m][j % m] for j in range(N))
        for i in range(N)
    )
    return Preorder(N, rows)


def relation_from_json(doc: dict) -> Relation:
    n = int(doc["n"])
    return Relation.from_pairs(n, (tuple(p) for p in doc.get("pairs", [])), one_based=True)


def preorder_from_json(doc: dict, *, close: bool = False) -> Preorder:
    return as_preorder(relation_from_json(doc), close=close)
