"""Square matrices over a ring, structural checks, adjoints and block flattening.

Determinants, adjugates and characteristic polynomials are computed by
permutation sums and principal minors, never by division, so they work over
any commutative ring (Z/m with composite m included). The preadjoint is the
noncommutative analogue: a double sum over permutations whose products keep
the printed left-to-right factor order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Iterator

from .errors import (
    NoncommutativeRing,
    NotStructural,
    PreadjointTooLarge,
    SizeMismatch,
    UnsupportedRing,
)
from .preorder import Preorder, preorder_from_json
from .rings import MatrixRing, Ring, RingElement, matmul_rows, ring_from_json

PREADJOINT_MAX_N = 5


def _parity(perm: tuple[int, ...]) -> int:
    """Sign of a permutation given as a tuple of images."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _perms_fixing(n: int, s: int, r: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (rho, sgn(rho)) for every permutation of range(n) with rho[s] == r."""
    sources = [i for i in range(n) if i != s]
    targets = [j for j in range(n) if j != r]
    for images in permutations(targets):
        rho = [0] * n
        rho[s] = r
        for i, j in zip(sources, images):
            rho[i] = j
        rho = tuple(rho)
        yield rho, _parity(rho)


def _require_commutative(ring: Ring, what: str):
    if not ring.commutative:
        raise NoncommutativeRing(f"{what} needs a commutative ring, got {ring}")


def det_rows(ring: Ring, rows) -> Any:
    """Leibniz determinant of a payload table."""
    n = len(rows)
    add, sub, mul, is_zero = ring.add, ring.sub, ring.mul, ring.is_zero
    total = ring.zero()
    for perm in permutations(range(n)):
        term = ring.one()
        for i in range(n):
            a = rows[i][perm[i]]
            if is_zero(a):
                term = None
                break
            term = mul(term, a)
        if term is None:
            continue
        total = add(total, term) if _parity(perm) > 0 else sub(total, term)
    return total


def adjugate_rows(ring: Ring, rows):
    """Classical adjoint: entry (r, s) sums sgn(rho) * prod_{i != s} a[i][rho(i)] over rho(s) = r."""
    n = len(rows)
    add, sub, mul, is_zero = ring.add, ring.sub, ring.mul, ring.is_zero
    out = []
    for r in range(n):
        row = []
        for s in range(n):
            acc = ring.zero()
            for rho, sign in _perms_fixing(n, s, r):
                term = ring.one()
                for i in range(n):
                    if i == s:
                        continue
                    a = rows[i][rho[i]]
                    if is_zero(a):
                        term = None
                        break
                    term = mul(term, a)
                if term is not None:
                    acc = add(acc, term) if sign > 0 else sub(acc, term)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class StructMatrix:
    """An n x n matrix of ring payloads, optionally tagged with the preorder it respects.

    Indices are 0-based in Python; JSON documents are row-major and the
    pattern in them is 1-based. A pattern, when present, is checked on
    construction but never enforced by arithmetic: products and inverses come
    back untagged and must be re-checked with :func:`check_structural`.
    """

    ring: Ring
    entries: tuple[tuple[Any, ...], ...]
    pattern: Preorder | None = field(default=None)

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise SizeMismatch("matrix must be square and non-empty")
        if self.pattern is not None:
            if self.pattern.n != n:
                raise SizeMismatch(f"pattern on {self.pattern.n} points for a {n}x{n} matrix")
            bad = _first_violation(self, self.pattern)
            if bad is not None:
                raise NotStructural(f"entry ({bad[0] + 1},{bad[1] + 1}) is nonzero outside the pattern")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def of(cls, ring: Ring, rows, pattern: Preorder | None = None) -> StructMatrix:
        """Build from rows of RingElements, ints, or raw payloads."""
        return cls(ring, tuple(tuple(ring.coerce(v) for v in row) for row in rows), pattern)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> StructMatrix:
        return scalar_embed(RingElement(ring, ring.one()), n)

    @classmethod
    def zeros(cls, ring: Ring, n: int) -> StructMatrix:
        return scalar_embed(RingElement(ring, ring.zero()), n)

    def entry(self, i: int, j: int) -> RingElement:
        return RingElement(self.ring, self.entries[i][j])

    def with_pattern(self, pattern: Preorder | None) -> StructMatrix:
        return StructMatrix(self.ring, self.entries, pattern)

    def _check(self, other: StructMatrix):
        if not isinstance(other, StructMatrix):
            raise TypeError(f"expected StructMatrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise SizeMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.n != self.n:
            raise SizeMismatch(f"size mismatch: {self.n} vs {other.n}")

    def __eq__(self, other):
        if not isinstance(other, StructMatrix):
            return NotImplemented
        return self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __add__(self, other):
        self._check(other)
        return StructMatrix(self.ring, MatrixRing(self.n, self.ring).add(self.entries, other.entries))

    def __sub__(self, other):
        self._check(other)
        return StructMatrix(self.ring, MatrixRing(self.n, self.ring).sub(self.entries, other.entries))

    def __neg__(self):
        return StructMatrix(self.ring, MatrixRing(self.n, self.ring).neg(self.entries))

    def __matmul__(self, other):
        return matmul(self, other)

    __mul__ = __matmul__

    def scale(self, c) -> StructMatrix:
        """Left multiplication by the scalar ``c`` (RingElement, int, or payload)."""
        c = self.ring.coerce(c)
        mul = self.ring.mul
        return StructMatrix(self.ring, tuple(tuple(mul(c, a) for a in row) for row in self.entries))

    def __pow__(self, k: int) -> StructMatrix:
        return StructMatrix(self.ring, MatrixRing(self.n, self.ring).pow(self.entries, k))

    def is_identity(self) -> bool:
        return self.entries == MatrixRing(self.n, self.ring).one()

    def is_zero(self) -> bool:
        return self.entries == MatrixRing(self.n, self.ring).zero()

    def to_json(self) -> dict:
        doc = {
            "ring": self.ring.to_json(),
            "n": self.n,
            "entries": [[self.ring.encode(a) for a in row] for row in self.entries],
        }
        if self.pattern is not None:
            doc["theta"] = self.pattern.to_json()
        return doc

    def __repr__(self):
        return f"StructMatrix({self.ring}, {self.to_json()['entries']!r})"


def matrix_from_json(doc: dict, *, close_theta: bool = False) -> StructMatrix:
    ring = ring_from_json(doc["ring"])
    rows = doc["entries"]
    if "n" in doc and int(doc["n"]) != len(rows):
        raise SizeMismatch(f"document says n={doc['n']} but has {len(rows)} rows")
    theta = doc.get("theta")
    pattern = preorder_from_json(theta, close=close_theta) if theta is not None else None
    return StructMatrix(ring, tuple(tuple(ring.decode(a) for a in row) for row in rows), pattern)


def _first_violation(A: StructMatrix, theta: Preorder):
    is_zero = A.ring.is_zero
    for i, row in enumerate(A.entries):
        for j, a in enumerate(row):
            if not theta.table[i][j] and not is_zero(a):
                return i, j
    return None


def check_structural(A: StructMatrix, theta: Preorder) -> bool:
    """True iff every entry of A outside theta is zero."""
    if theta.n != A.n:
        raise SizeMismatch(f"theta on {theta.n} points, matrix is {A.n}x{A.n}")
    return _first_violation(A, theta) is None


def matmul(A: StructMatrix, B: StructMatrix) -> StructMatrix:
    A._check(B)
    return StructMatrix(A.ring, matmul_rows(A.ring, A.entries, B.entries))


def scalar_embed(r: RingElement, n: int) -> StructMatrix:
    return StructMatrix(r.ring, MatrixRing(n, r.ring).scalar(r.payload))


def determinant(A: StructMatrix) -> RingElement:
    _require_commutative(A.ring, "determinant")
    return RingElement(A.ring, det_rows(A.ring, A.entries))


def adjoint_classical(A: StructMatrix) -> StructMatrix:
    _require_commutative(A.ring, "adjoint")
    return StructMatrix(A.ring, adjugate_rows(A.ring, A.entries))


def preadjoint(A: StructMatrix, *, max_n: int = PREADJOINT_MAX_N) -> StructMatrix:
    """Preadjoint over an arbitrary ring.

    Entry (r, s) is the sum over rho with rho(s) = r and over every ordering
    tau of the positions other than s of
    sgn(rho) * a[tau(p1), rho(tau(p1))] * ... * a[tau(p_{n-1}), rho(tau(p_{n-1}))],
    factors taken left to right in position order. Over a commutative ring
    this equals (n-1)! * adj(A). Terms are streamed; cost is
    n^2 * ((n-1)!)^2 products, hence the ``max_n`` cap.
    """
    n = A.n
    if n > max_n:
        raise PreadjointTooLarge(f"preadjoint limited to n <= {max_n} (got {n})")
    ring, rows = A.ring, A.entries
    add, sub, mul, is_zero = ring.add, ring.sub, ring.mul, ring.is_zero
    out = []
    for r in range(n):
        row = []
        for s in range(n):
            others = [i for i in range(n) if i != s]
            acc = ring.zero()
            for rho, sign in _perms_fixing(n, s, r):
                factors = [rows[i][rho[i]] for i in range(n)]
                if any(is_zero(factors[i]) for i in others):
                    continue
                for order in permutations(others):
                    term = ring.one()
                    for i in order:
                        term = mul(term, factors[i])
                    acc = add(acc, term) if sign > 0 else sub(acc, term)
            row.append(acc)
        out.append(tuple(row))
    return StructMatrix(ring, tuple(out))


@dataclass(frozen=True)
class MonicPolynomial:
    """c_0 + c_1 t + ... + c_{d-1} t^{d-1} + lead * t^d with ``lead`` an integer.

    ``lead`` is 1 for a genuinely monic polynomial; other nonzero integers
    cover Cayley-Hamilton identities with integer leading coefficient.
    """

    ring: Ring
    coeffs: tuple[Any, ...]
    lead: int = 1

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("degree must be at least 1")
        if self.lead == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def all_coeffs(self) -> tuple[Any, ...]:
        return tuple(self.coeffs) + (self.ring.from_int(self.lead),)

    @classmethod
    def from_coeffs(cls, ring: Ring, coeffs) -> MonicPolynomial:
        """From c_0..c_d; c_d must be (the image of) an integer."""
        coeffs = [ring.coerce(c) for c in coeffs]
        top = coeffs[-1]
        candidates = sorted((k for k in range(-64, 65) if k), key=lambda k: (abs(k), k < 0))
        lead = next((k for k in candidates if ring.from_int(k) == top), None)
        if lead is None:
            raise ValueError("leading coefficient must be a small nonzero integer")
        return cls(ring, tuple(coeffs[:-1]), lead)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "degree": self.degree,
            "coeffs": [self.ring.encode(c) for c in self.all_coeffs()],
            "lead": self.lead,
        }


def polynomial_from_json(doc: dict) -> MonicPolynomial:
    ring = ring_from_json(doc["ring"])
    coeffs = [ring.decode(c) for c in doc["coeffs"]]
    if "lead" in doc:
        return MonicPolynomial(ring, tuple(coeffs[:-1]), int(doc["lead"]))
    return MonicPolynomial.from_coeffs(ring, coeffs)


def evaluate(p: MonicPolynomial, A: StructMatrix) -> StructMatrix:
    """p(A) with each coefficient acting as a scalar matrix (Horner, coefficients on the left)."""
    if p.ring != A.ring:
        raise SizeMismatch(f"polynomial over {p.ring}, matrix over {A.ring}")
    coeffs = p.all_coeffs()
    acc = scalar_embed(RingElement(A.ring, coeffs[-1]), A.n)
    for c in reversed(coeffs[:-1]):
        acc = matmul(acc, A) + scalar_embed(RingElement(A.ring, c), A.n)
    return acc


def char_poly(A: StructMatrix) -> MonicPolynomial:
    """det(t I - A) via principal minors: the t^i coefficient is
    (-1)^(n-i) times the sum of the (n-i) x (n-i) principal minors."""
    ring = A.ring
    _require_commutative(ring, "char_poly")
    n = A.n
    coeffs = []
    for i in range(n):
        k = n - i
        total = ring.zero()
        for idx in combinations(range(n), k):
            sub = tuple(tuple(A.entries[a][b] for b in idx) for a in idx)
            total = ring.add(total, det_rows(ring, sub))
        coeffs.append(total if k % 2 == 0 else ring.neg(total))
    return MonicPolynomial(ring, tuple(coeffs), 1)


def flatten_blocks(B: StructMatrix) -> StructMatrix:
    """View an n x n matrix of m x m blocks as an nm x nm matrix over the block base ring.

    Block (i, j), position (p, q) lands at (m*i + p, m*j + q), 0-based.
    """
    if not isinstance(B.ring, MatrixRing):
        raise UnsupportedRing(f"flatten_blocks needs a MatrixRing, got {B.ring}")
    m, n = B.ring.size, B.n
    rows = tuple(
        tuple(B.entries[I // m][J // m][I % m][J % m] for J in range(n * m))
        for I in range(n * m)
    )
    return StructMatrix(B.ring.base, rows)


def unflatten_blocks(F: StructMatrix, m: int) -> StructMatrix:
    """Inverse of :func:`flatten_blocks`."""
    if F.n % m:
        raise SizeMismatch(f"{F.n} is not a multiple of block size {m}")
    n = F.n // m
    ring = MatrixRing(m, F.ring)
    rows = tuple(
        tuple(
            tuple(tuple(F.entries[m * i + p][m * j + q] for q in range(m)) for p in range(m))
            for j in range(n)
        )
        for i in range(n)
    )
    return StructMatrix(ring, rows)


def check_block_structural(B: StructMatrix, outer: Preorder, inner: Preorder) -> bool:
    """B lies in M_n(outer, M_m(inner, R)): zero blocks outside ``outer`` and every block inner-structural."""
    if not isinstance(B.ring, MatrixRing):
        raise UnsupportedRing(f"block check needs a MatrixRing, got {B.ring}")
    if outer.n != B.n or inner.n != B.ring.size:
        raise SizeMismatch("pattern sizes do not match the block layout")
    base_zero = B.ring.base.is_zero
    for i, row in enumerate(B.entries):
        for j, block in enumerate(row):
            for p, brow in enumerate(block):
                for q, a in enumerate(brow):
                    if base_zero(a):
                        continue
                    if not (outer.table[i][j] and inner.table[p][q]):
                        return False
    return True


__all__ = [
    "StructMatrix",
    "MonicPolynomial",
    "adjoint_classical",
    "adjugate_rows",
    "char_poly",
    "check_block_structural",
    "check_structural",
    "det_rows",
    "determinant",
    "evaluate",
    "flatten_blocks",
    "matmul",
    "matrix_from_json",
    "polynomial_from_json",
    "preadjoint",
    "scalar_embed",
    "unflatten_blocks",
]
