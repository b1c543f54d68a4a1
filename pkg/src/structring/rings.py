"""Concrete base rings with exact, canonical normal-form arithmetic.

Each ring class is a frozen dataclass that doubles as the ring descriptor.
Ring methods act on raw payloads (ints, Fractions, nested tuples); the
:class:`RingElement` wrapper pairs a payload with its ring and provides the
usual operators for code that prefers to write ``1 - y * x``.

Payload normal forms:

* ``Integers`` / ``Modular`` / ``Rationals``: ``int`` (residue in ``[0, m)``)
  or ``Fraction``.
* ``MatrixRing``: tuple of row tuples of base payloads.
* ``Grassmann``: tuple of ``(monomial, coeff)`` pairs, monomials are strictly
  increasing generator tuples (1-based), sorted by ``(degree, monomial)``; no
  zero coefficients.
* ``Jacobson``: tuple of ``((i, j), coeff)`` pairs for ``coeff * y**i x**j``,
  sorted by ``(i, j)``; no zero coefficients.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable

from .errors import DescriptorMismatch, NoncommutativeRing, NotAUnit, UnsupportedRing


def _factor_prime_power(m: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``m == p**e`` or None if m is not a prime power."""
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            break
        p += 1
    else:
        return m, 1
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return (p, e) if m == 1 else None


def is_prime(m: int) -> bool:
    f = _factor_prime_power(m)
    return f is not None and f[1] == 1


class Ring(ABC):
    """Uniform interface over payload arithmetic."""

    commutative: bool
    finite: bool

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def one(self): ...

    @abstractmethod
    def add(self, a, b): ...

    @abstractmethod
    def neg(self, a): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def from_int(self, k: int):
        """Image of the integer k (k-fold sum of the identity)."""

    @abstractmethod
    def try_inverse(self, a):
        """Two-sided inverse of ``a``; raises NotAUnit when none is detected."""

    @abstractmethod
    def encode(self, a) -> Any: ...

    @abstractmethod
    def decode(self, obj: Any): ...

    @abstractmethod
    def to_json(self) -> dict: ...

    @abstractmethod
    def random(self, rng): ...

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_one(self, a) -> bool:
        return a == self.one()

    def pow(self, a, k: int):
        result, base = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element(self, payload) -> RingElement:
        return RingElement(self, payload)

    def coerce(self, value):
        """Payload for ``value``: a RingElement of this ring, an int, or a payload."""
        if isinstance(value, RingElement):
            if value.ring != self:
                raise DescriptorMismatch(f"{value.ring} element used in {self}")
            return value.payload
        if isinstance(value, int) and not isinstance(value, bool):
            return self.from_int(value)
        return value


# --------------------------------------------------------------------------
# commutative scalars


@dataclass(frozen=True)
class Integers(Ring):
    commutative = True
    finite = False

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return int(k)

    def try_inverse(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit of Z")

    def encode(self, a):
        return str(a)

    def decode(self, obj):
        return int(obj)

    def to_json(self):
        return {"kind": "integers"}

    def random(self, rng):
        return int(rng.integers(-4, 5))

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Rationals(Ring):
    commutative = True
    finite = False

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return Fraction(k)

    def try_inverse(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit of Q")
        return 1 / a

    def encode(self, a):
        return str(a)

    def decode(self, obj):
        return Fraction(obj)

    def to_json(self):
        return {"kind": "rationals"}

    def random(self, rng):
        num = int(rng.integers(-3, 4))
        den = int(rng.choice([1, 1, 1, 2, 3]))
        return Fraction(num, den)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class Modular(Ring):
    modulus: int

    commutative = True
    finite = True

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def from_int(self, k):
        return k % self.modulus

    def try_inverse(self, a):
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            raise NotAUnit(f"{a} is not a unit mod {self.modulus}") from None

    def encode(self, a):
        return a

    def decode(self, obj):
        return int(obj) % self.modulus

    def to_json(self):
        return {"kind": "mod", "modulus": self.modulus}

    def random(self, rng):
        return int(rng.integers(0, self.modulus))

    def __str__(self):
        return f"Z/{self.modulus}"


def _check_field(base: Ring, owner: str):
    if isinstance(base, Rationals):
        return
    if isinstance(base, Modular) and is_prime(base.modulus):
        return
    raise UnsupportedRing(f"{owner} needs Rationals or Modular(prime) coefficients, got {base}")


# --------------------------------------------------------------------------
# matrix rings


@dataclass(frozen=True)
class MatrixRing(Ring):
    """k x k matrices over ``base``.

    Any base ring is accepted for arithmetic; inversion needs a commutative
    base.
    """

    size: int
    base: Ring

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("matrix size must be positive")

    @property
    def commutative(self):
        return self.size == 1 and self.base.commutative

    @property
    def finite(self):
        return self.base.finite

    def zero(self):
        z = self.base.zero()
        return tuple((z,) * self.size for _ in range(self.size))

    def one(self):
        return self.scalar(self.base.one())

    def scalar(self, c):
        z, k = self.base.zero(), self.size
        return tuple(tuple(c if i == j else z for j in range(k)) for i in range(k))

    def add(self, a, b):
        add = self.base.add
        return tuple(tuple(add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def sub(self, a, b):
        sub = self.base.sub
        return tuple(tuple(sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def neg(self, a):
        neg = self.base.neg
        return tuple(tuple(neg(x) for x in r) for r in a)

    def mul(self, a, b):
        return matmul_rows(self.base, a, b)

    def from_int(self, k):
        return self.scalar(self.base.from_int(k))

    def try_inverse(self, a):
        if not self.base.commutative:
            raise NoncommutativeRing(f"adjugate inversion over {self.base} is not available")
        from .structmat import adjugate_rows, det_rows

        d = det_rows(self.base, a)
        d_inv = self.base.try_inverse(d)
        mul = self.base.mul
        return tuple(tuple(mul(d_inv, x) for x in r) for r in adjugate_rows(self.base, a))

    def encode(self, a):
        return [[self.base.encode(x) for x in r] for r in a]

    def decode(self, obj):
        if len(obj) != self.size or any(len(r) != self.size for r in obj):
            raise ValueError(f"expected a {self.size}x{self.size} array")
        return tuple(tuple(self.base.decode(x) for x in r) for r in obj)

    def to_json(self):
        return {"kind": "matrix", "size": self.size, "base": self.base.to_json()}

    def random(self, rng):
        return tuple(tuple(self.base.random(rng) for _ in range(self.size)) for _ in range(self.size))

    def __str__(self):
        return f"M_{self.size}({self.base})"


def matmul_rows(ring: Ring, a, b):
    """Product of two square payload tables over ``ring``; left factor first."""
    n = len(a)
    add, mul, zero, is_zero = ring.add, ring.mul, ring.zero(), ring.is_zero
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(n):
            acc = zero
            for k in range(n):
                x = ai[k]
                if is_zero(x):
                    continue
                y = b[k][j]
                if is_zero(y):
                    continue
                acc = add(acc, mul(x, y))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


# --------------------------------------------------------------------------
# Grassmann (exterior) algebra


def grassmann_mul_basis(s: tuple[int, ...], t: tuple[int, ...]):
    """Product of basis monomials e_S * e_T.

    Returns ``None`` when the monomials share a generator, else
    ``(sign, merged)`` where sign is the parity of the transpositions
    that sort the concatenation of S and T.
    """
    if set(s) & set(t):
        return None
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(s + t))


def _mono_key(item):
    mono = item[0]
    return len(mono), mono


@dataclass(frozen=True)
class Grassmann(Ring):
    """Exterior algebra on ``generators`` anticommuting generators over a field."""

    generators: int
    base: Ring

    def __post_init__(self):
        if self.generators < 1:
            raise ValueError("need at least one generator")
        _check_field(self.base, "Grassmann")

    @property
    def commutative(self):
        return self.generators <= 1

    @property
    def finite(self):
        return self.base.finite

    def _normalize(self, coeffs: dict):
        is_zero = self.base.is_zero
        return tuple(sorted(((m, c) for m, c in coeffs.items() if not is_zero(c)), key=_mono_key))

    def zero(self):
        return ()

    def one(self):
        return (((), self.base.one()),)

    def scalar(self, c):
        return self._normalize({(): c})

    def gen(self, i: int):
        """Generator e_i (1-based)."""
        if not 1 <= i <= self.generators:
            raise ValueError(f"generator index {i} out of range")
        return (((i,), self.base.one()),)

    def add(self, a, b):
        acc = dict(a)
        add = self.base.add
        for m, c in b:
            acc[m] = add(acc[m], c) if m in acc else c
        return self._normalize(acc)

    def neg(self, a):
        neg = self.base.neg
        return tuple((m, neg(c)) for m, c in a)

    def mul(self, a, b):
        acc: dict = {}
        base = self.base
        for s, c in a:
            for t, d in b:
                prod = grassmann_mul_basis(s, t)
                if prod is None:
                    continue
                sign, m = prod
                term = base.mul(c, d)
                if sign < 0:
                    term = base.neg(term)
                acc[m] = base.add(acc[m], term) if m in acc else term
        return self._normalize(acc)

    def from_int(self, k):
        return self.scalar(self.base.from_int(k))

    def body(self, a):
        """Coefficient of the empty monomial."""
        if a and a[0][0] == ():
            return a[0][1]
        return self.base.zero()

    def try_inverse(self, a):
        b = self.body(a)
        if self.base.is_zero(b):
            raise NotAUnit("Grassmann element with zero body is nilpotent")
        b_inv = self.scalar(self.base.try_inverse(b))
        # a = b (1 + u) with u nilpotent, u**(g+1) == 0
        u = self.sub(self.mul(b_inv, a), self.one())
        minus_u = self.neg(u)
        series, term = self.one(), self.one()
        for _ in range(self.generators):
            term = self.mul(term, minus_u)
            if not term:
                break
            series = self.add(series, term)
        return self.mul(series, b_inv)

    def encode(self, a):
        return [[self.base.encode(c), list(m)] for m, c in a]

    def decode(self, obj):
        acc: dict = {}
        add = self.base.add
        for coeff, mono in obj:
            mono = tuple(int(i) for i in mono)
            if any(not 1 <= i <= self.generators for i in mono):
                raise ValueError(f"generator index out of range in {mono}")
            sign, key = 1, ()
            for i in mono:
                prod = grassmann_mul_basis(key, (i,))
                if prod is None:
                    key = None
                    break
                s, key = prod
                sign *= s
            if key is None:
                continue
            c = self.base.decode(coeff)
            if sign < 0:
                c = self.base.neg(c)
            acc[key] = add(acc[key], c) if key in acc else c
        return self._normalize(acc)

    def to_json(self):
        return {"kind": "grassmann", "generators": self.generators, "base": self.base.to_json()}

    def random(self, rng, density: float = 0.5):
        acc = {}
        for d in range(self.generators + 1):
            for mono in combinations(range(1, self.generators + 1), d):
                if rng.random() < density:
                    acc[mono] = self.base.random(rng)
        return self._normalize(acc)

    def __str__(self):
        return f"Grassmann({self.generators}, {self.base})"


# --------------------------------------------------------------------------
# Jacobson algebra K<x, y | xy = 1>


def jacobson_mul_basis(i: int, j: int, k: int, l: int) -> tuple[int, int]:
    """(y^i x^j)(y^k x^l) rewritten with xy -> 1, as exponents of y and x."""
    return i + max(0, k - j), l + max(0, j - k)


@dataclass(frozen=True)
class Jacobson(Ring):
    """Free algebra on x, y modulo xy = 1, basis {y^i x^j}."""

    base: Ring

    commutative = False
    finite = False

    def __post_init__(self):
        _check_field(self.base, "Jacobson")

    def _normalize(self, coeffs: dict):
        is_zero = self.base.is_zero
        return tuple(sorted((m, c) for m, c in coeffs.items() if not is_zero(c)))

    def zero(self):
        return ()

    def one(self):
        return (((0, 0), self.base.one()),)

    def scalar(self, c):
        return self._normalize({(0, 0): c})

    @property
    def x(self):
        return (((0, 1), self.base.one()),)

    @property
    def y(self):
        return (((1, 0), self.base.one()),)

    def add(self, a, b):
        acc = dict(a)
        add = self.base.add
        for m, c in b:
            acc[m] = add(acc[m], c) if m in acc else c
        return self._normalize(acc)

    def neg(self, a):
        neg = self.base.neg
        return tuple((m, neg(c)) for m, c in a)

    def mul(self, a, b):
        acc: dict = {}
        base = self.base
        for (i, j), c in a:
            for (k, l), d in b:
                m = jacobson_mul_basis(i, j, k, l)
                term = base.mul(c, d)
                acc[m] = base.add(acc[m], term) if m in acc else term
        return self._normalize(acc)

    def from_int(self, k):
        return self.scalar(self.base.from_int(k))

    def try_inverse(self, a):
        # Only nonzero scalars are recognised; other units may exist.
        if len(a) == 1 and a[0][0] == (0, 0):
            return self.scalar(self.base.try_inverse(a[0][1]))
        raise NotAUnit("only nonzero scalars are inverted in the Jacobson algebra")

    def encode(self, a):
        return [[self.base.encode(c), i, j] for (i, j), c in a]

    def decode(self, obj):
        acc: dict = {}
        add = self.base.add
        for coeff, i, j in obj:
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            c = self.base.decode(coeff)
            key = (int(i), int(j))
            acc[key] = add(acc[key], c) if key in acc else c
        return self._normalize(acc)

    def to_json(self):
        return {"kind": "jacobson", "base": self.base.to_json()}

    def random(self, rng, max_degree: int = 2, terms: int = 3):
        acc: dict = {}
        add = self.base.add
        for _ in range(int(rng.integers(0, terms + 1))):
            key = (int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1)))
            c = self.base.random(rng)
            acc[key] = add(acc[key], c) if key in acc else c
        return self._normalize(acc)

    def __str__(self):
        return f"Jacobson({self.base})"


# --------------------------------------------------------------------------
# descriptors


def ring_from_json(doc: dict) -> Ring:
    kind = doc.get("kind")
    if kind in ("integers", "int", "Z"):
        return Integers()
    if kind in ("rationals", "rat", "Q"):
        return Rationals()
    if kind in ("mod", "modular"):
        return Modular(int(doc["modulus"]))
    if kind in ("matrix", "matrix_ring"):
        return MatrixRing(int(doc["size"]), ring_from_json(doc["base"]))
    if kind == "grassmann":
        return Grassmann(int(doc["generators"]), ring_from_json(doc.get("base", {"kind": "rationals"})))
    if kind == "jacobson":
        return Jacobson(ring_from_json(doc.get("base", {"kind": "rationals"})))
    raise ValueError(f"unknown ring kind {kind!r}")


# --------------------------------------------------------------------------
# element wrapper


@dataclass(frozen=True)
class RingElement:
    ring: Ring
    payload: Any

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"cannot combine {self.ring} with {other.ring}")
            return other.payload
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring.add(self.payload, b))

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring.sub(self.payload, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring.sub(b, self.payload))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring.mul(self.payload, b))

    def __rmul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, self.ring.mul(b, self.payload))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.payload))

    def __pow__(self, k: int):
        return RingElement(self.ring, self.ring.pow(self.payload, k))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def is_one(self) -> bool:
        return self.ring.is_one(self.payload)

    def inverse(self) -> RingElement:
        return try_invert_base(self)

    def encode(self):
        return self.ring.encode(self.payload)

    def __repr__(self):
        return f"RingElement({self.ring}, {self.encode()!r})"


_OPS: dict[str, Callable] = {
    "add": lambda r, a, b: r.add(a, b),
    "sub": lambda r, a, b: r.sub(a, b),
    "mul": lambda r, a, b: r.mul(a, b),
    "neg": lambda r, a, b: r.neg(a),
}


def arith(op: str, a: RingElement, b: RingElement | None = None) -> RingElement:
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if b is not None and b.ring != a.ring:
        raise DescriptorMismatch(f"cannot combine {a.ring} with {b.ring}")
    return RingElement(a.ring, _OPS[op](a.ring, a.payload, None if b is None else b.payload))


def try_invert_base(a: RingElement) -> RingElement:
    return RingElement(a.ring, a.ring.try_inverse(a.payload))


# --------------------------------------------------------------------------
# nilradicals


@dataclass(frozen=True)
class NilStructure:
    """How a ring splits over its nilradical N.

    ``project`` maps into ``quotient`` (= ring / N, a field here) and
    ``lift`` re-embeds quotient elements canonically. Every product of
    ``bound`` elements of N is zero.
    """

    ring: Ring
    quotient: Ring
    project: Callable[[Any], Any]
    lift: Callable[[Any], Any]
    bound: int


def nil_structure(ring: Ring) -> NilStructure:
    if isinstance(ring, Grassmann):
        return NilStructure(ring, ring.base, ring.body, ring.scalar, ring.generators + 1)
    if isinstance(ring, Modular):
        pe = _factor_prime_power(ring.modulus)
        if pe is not None:
            p, e = pe
            return NilStructure(ring, Modular(p), lambda a: a % p, lambda r: r, e)
    raise UnsupportedRing(f"no nilradical decomposition implemented for {ring}")


@dataclass(frozen=True)
class NilDecomposition:
    body: RingElement
    soul: RingElement
    nil_index_bound: int


def nil_decompose(a: RingElement) -> NilDecomposition:
    ns = nil_structure(a.ring)
    body = ns.lift(ns.project(a.payload))
    soul = a.ring.sub(a.payload, body)
    return NilDecomposition(RingElement(a.ring, body), RingElement(a.ring, soul), ns.bound)
