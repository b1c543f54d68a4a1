"""Constructive inversion procedures, each returning a verified certificate.

Every routine accepts either a :class:`RingElement` or a :class:`StructMatrix`.
A matrix is handled as an element of ``MatrixRing(n, R)``, so the same code
runs the element and matrix versions of each construction. Coefficients of
polynomials act on matrices as scalar matrices.

Each certificate carries both verification products; a routine never
returns an inverse it has not multiplied back on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Sequence, Union

from .errors import (
    ConstantTermNotUnit,
    InfiniteRing,
    NoMethodApplicable,
    NoncommutativeRing,
    NotAnnihilating,
    NotAUnit,
    NotInvertible,
    NotNilpotent,
    OneSidedInverse,
    PowerLimitExceeded,
    UnsupportedRing,
)
from .preorder import Preorder
from .rings import MatrixRing, Ring, RingElement, nil_structure
from .structmat import (
    MonicPolynomial,
    StructMatrix,
    adjoint_classical,
    adjugate_rows,
    check_structural,
    det_rows,
    determinant,
)

Invertible = Union[RingElement, StructMatrix]

METHODS = ("adjugate", "char_poly", "monic_annihilator", "power_order", "nil_lift_binomial", "nil_geometric")


@dataclass(frozen=True)
class InverseCertificate:
    method: str
    inverse: Invertible
    checks: dict

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        inv = self.inverse
        if isinstance(inv, StructMatrix):
            encoded = inv.to_json()
        else:
            encoded = {"ring": inv.ring.to_json(), "element": inv.encode()}
        return {"method": self.method, "inverse": encoded, "verified": self.verified, "checks": self.checks}


@dataclass(frozen=True)
class _Target:
    """``x`` seen as a payload of ``ring``; ``embed`` turns coefficients into ring payloads."""

    ring: Ring
    x: Any
    embed: Callable[[Any], Any]
    wrap: Callable[[Any], Invertible]
    coeff_ring: Ring


def _target(x: Invertible) -> _Target:
    if isinstance(x, StructMatrix):
        mring = MatrixRing(x.n, x.ring)
        return _Target(mring, x.entries, mring.scalar, lambda p: StructMatrix(x.ring, p), x.ring)
    if isinstance(x, RingElement):
        return _Target(x.ring, x.payload, lambda c: c, lambda p: RingElement(x.ring, p), x.ring)
    raise TypeError(f"cannot invert a {type(x).__name__}")


def _payload(t: _Target, value: Invertible):
    if isinstance(value, StructMatrix):
        return value.entries
    if isinstance(value, RingElement):
        return value.payload
    return t.ring.coerce(value)


def _certify(method: str, t: _Target, inv, extra: dict | None = None) -> InverseCertificate:
    ring = t.ring
    right = ring.is_one(ring.mul(t.x, inv))
    left = ring.is_one(ring.mul(inv, t.x))
    if right and not left:
        raise OneSidedInverse(f"{method}: x * y = 1 but y * x != 1", t.wrap(inv))
    if not (right and left):
        raise NotInvertible(f"{method}: candidate inverse failed verification")
    checks = {"x_times_inverse_is_one": True, "inverse_times_x_is_one": True}
    checks.update(extra or {})
    return InverseCertificate(method, t.wrap(inv), checks)


def inv_adjugate(A: StructMatrix) -> InverseCertificate:
    """det(A)^-1 adj(A) over a commutative ring."""
    if not A.ring.commutative:
        raise NoncommutativeRing(f"adjugate inversion needs a commutative ring, got {A.ring}")
    d = determinant(A)
    try:
        d_inv = A.ring.try_inverse(d.payload)
    except NotAUnit:
        raise NotInvertible(f"det = {d.encode()} is not a unit of {A.ring}") from None
    inv = adjoint_classical(A).scale(d_inv)
    return _certify("adjugate", _target(A), inv.entries)


def _solve_from_annihilator(t: _Target, coeffs: Sequence[Any], method: str) -> InverseCertificate:
    """Given a_0 + a_1 x + ... + a_d x^d = 0 with a_0 a unit,
    x^-1 = -a_0^-1 (a_1 + a_2 x + ... + a_d x^(d-1))."""
    ring, cr = t.ring, t.coeff_ring
    acc = ring.zero()
    for a in reversed(coeffs):
        acc = ring.add(ring.mul(acc, t.x), t.embed(a))
    if not ring.is_zero(acc):
        raise NotAnnihilating("the polynomial does not vanish at x")
    try:
        a0_inv = cr.try_inverse(coeffs[0])
    except NotAUnit:
        raise ConstantTermNotUnit(f"{cr.encode(coeffs[0])} is not a unit of {cr}") from None
    horner = ring.zero()
    for a in reversed(coeffs[1:]):
        horner = ring.add(ring.mul(horner, t.x), t.embed(a))
    inv = ring.mul(t.embed(cr.neg(a0_inv)), horner)
    return _certify(method, t, inv)


def inverse_from_monic_annihilator(
    x: Invertible,
    p: MonicPolynomial,
    *,
    annihilates: str = "x",
    method: str = "monic_annihilator",
) -> InverseCertificate:
    """Invert ``x`` as a polynomial in x.

    ``annihilates="x"``: p(x) = 0 and the constant term of p is a unit.

    ``annihilates="inverse"``: p is an identity satisfied by x^-1 whose
    (integer) leading coefficient is a unit, e.g. a Cayley-Hamilton identity
    for A^-1 with leading coefficient gamma_d. Multiplying through by x^d
    turns it into the reversed polynomial vanishing at x, which is checked,
    and then x^-1 = -gamma_d^-1 (gamma_{d-1} + gamma_{d-2} x + ... + gamma_0 x^(d-1)).
    """
    t = _target(x)
    if p.ring != t.coeff_ring:
        raise UnsupportedRing(f"polynomial over {p.ring}, x over {t.coeff_ring}")
    coeffs = list(p.all_coeffs())
    if annihilates == "inverse":
        coeffs.reverse()
    elif annihilates != "x":
        raise ValueError("annihilates must be 'x' or 'inverse'")
    return _solve_from_annihilator(t, coeffs, method)


def inv_by_power_order(x: Invertible, *, max_steps: int = 200_000) -> InverseCertificate:
    """In a finite ring the powers of x are eventually periodic; x is a unit
    iff x^k = 1 for some k >= 1, and then x^-1 = x^(k-1)."""
    t = _target(x)
    ring = t.ring
    if not ring.finite:
        raise InfiniteRing(f"power iteration needs a finite ring, got {ring}")
    prev, power = ring.one(), t.x
    seen = set()
    for _ in range(max_steps):
        if ring.is_one(power):
            return _certify("power_order", t, prev)
        if power in seen:
            raise NotInvertible("powers cycle without reaching 1")
        seen.add(power)
        prev, power = power, ring.mul(power, t.x)
    raise PowerLimitExceeded(f"no cycle closed within {max_steps} powers")


def lift_inverse_nil_binomial(
    x: Invertible, approximants: Sequence[Invertible], nil_index: int
) -> InverseCertificate:
    """Lift inverses known modulo nil ideals to an inverse of x.

    The approximants s_1..s_t satisfy 1 - x s_i in a nil ideal. Expanding
    (1 - x s_1)...(1 - x s_t) = 1 - x s (recurrence
    s <- s + s_i - s x s_i), and with (1 - x s)^k = 0 for k = ``nil_index``:
    x^-1 = sum_{i=1..k} (-1)^(i+1) C(k, i) s (x s)^(i-1).
    """
    if nil_index < 1:
        raise ValueError("nil_index must be >= 1")
    if not approximants:
        raise ValueError("need at least one approximant")
    t = _target(x)
    ring = t.ring
    s = ring.zero()
    for a in approximants:
        si = _payload(t, a)
        s = ring.sub(ring.add(s, si), ring.mul(ring.mul(s, t.x), si))
    xs = ring.mul(t.x, s)
    defect = ring.sub(ring.one(), xs)
    if not ring.is_zero(ring.pow(defect, nil_index)):
        raise NotNilpotent(f"(1 - x s)^{nil_index} is not zero")
    inv = ring.zero()
    term = s
    for i in range(1, nil_index + 1):
        c = comb(nil_index, i) * (1 if i % 2 else -1)
        inv = ring.add(inv, ring.mul(ring.from_int(c), term))
        term = ring.mul(term, xs)
    return _certify("nil_lift_binomial", t, inv)


def body_inverse_lift(A: StructMatrix) -> StructMatrix:
    """Invert A modulo the nilradical and re-embed the result entrywise.

    Raises NotInvertible when the image of A over the quotient field is
    singular, which is equivalent to A being singular because the kernel is nil.
    """
    ns = nil_structure(A.ring)
    q = ns.quotient
    body = tuple(tuple(ns.project(a) for a in row) for row in A.entries)
    d = det_rows(q, body)
    try:
        d_inv = q.try_inverse(d)
    except NotAUnit:
        raise NotInvertible("the body matrix is singular over the quotient") from None
    adj = adjugate_rows(q, body)
    return StructMatrix(A.ring, tuple(tuple(ns.lift(q.mul(d_inv, a)) for a in row) for row in adj))


def inv_nil_geometric(A: StructMatrix, theta: Preorder | None = None) -> InverseCertificate:
    """Invert over a ring with nilpotent nilradical N (Grassmann, Z/p^e).

    B is the lifted inverse of A mod N, E = I - A B has entries in N so
    E^k = 0 for the ring's nil bound k, and A^-1 = B (I + E + ... + E^(k-1)).
    With ``theta`` the result must come out structural.
    """
    ns = nil_structure(A.ring)
    t = _target(A)
    ring = t.ring
    B = body_inverse_lift(A).entries
    E = ring.sub(ring.one(), ring.mul(t.x, B))
    series, power = ring.one(), ring.one()
    for _ in range(ns.bound):
        power = ring.mul(power, E)
        if ring.is_zero(power):
            break
        series = ring.add(series, power)
    else:
        raise NotNilpotent(f"E^{ns.bound} is not zero")  # would contradict the nil bound
    inv = ring.mul(B, series)
    extra = None
    if theta is not None and check_structural(A, theta):
        extra = {"structural": check_structural(StructMatrix(A.ring, inv), theta)}
    return _certify("nil_geometric", t, inv, extra)


def _nil_supported(ring: Ring) -> bool:
    try:
        nil_structure(ring)
    except UnsupportedRing:
        return False
    return True


def invert(A: StructMatrix, *, method: str | None = None) -> InverseCertificate:
    """Dispatch to the first applicable method: adjugate (commutative),
    nil_geometric (Grassmann / prime-power modulus), power_order (finite).

    ``method`` forces a specific route: adjugate, char_poly, power_order,
    nil_geometric.
    """
    if method is not None:
        if method == "adjugate":
            return inv_adjugate(A)
        if method == "char_poly":
            from .structmat import char_poly

            return inverse_from_monic_annihilator(A, char_poly(A), method="char_poly")
        if method == "power_order":
            return inv_by_power_order(A)
        if method == "nil_geometric":
            return inv_nil_geometric(A, A.pattern)
        raise ValueError(f"method {method!r} cannot be dispatched without extra inputs")
    if A.ring.commutative:
        return inv_adjugate(A)
    if _nil_supported(A.ring):
        return inv_nil_geometric(A, A.pattern)
    if A.ring.finite:
        return inv_by_power_order(A)
    raise NoMethodApplicable(f"no inversion method for matrices over {A.ring}")
