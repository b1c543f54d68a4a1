"""Seeded generators, property-test suites and the one-sided-inverse demo.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence([seed,
trial])``, so every trial is reproducible on its own from the pair
(seed, trial index) and reports replay from the CLI.
"""

from __future__ import annotations

import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Callable

import numpy as np

from .errors import (
    GenerationFailed,
    NoMethodApplicable,
    NotInvertible,
    OneSidedInverse,
    StructRingError,
    UnsupportedCombination,
    UnsupportedRing,
)
from .inverse import (
    body_inverse_lift,
    inv_adjugate,
    inv_by_power_order,
    inv_nil_geometric,
    inverse_from_monic_annihilator,
    invert,
    lift_inverse_nil_binomial,
)
from .preorder import Preorder, Relation, closure, compose_kron, validate
from .rings import (
    Jacobson,
    MatrixRing,
    Modular,
    Rationals,
    Ring,
    RingElement,
    nil_structure,
)
from .structmat import (
    PREADJOINT_MAX_N,
    StructMatrix,
    adjoint_classical,
    char_poly,
    check_block_structural,
    check_structural,
    det_rows,
    determinant,
    evaluate,
    flatten_blocks,
    preadjoint,
    scalar_embed,
    unflatten_blocks,
)

log = logging.getLogger(__name__)

DEFAULT_DENSITY = 0.4
DEFAULT_MAX_TRIES = 1000
SUITE_NAMES = ("closure", "preadjoint", "adjoint", "flatten", "cayley_hamilton", "nil_lift", "dedekind")


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), trial])))


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return trial_rng(int(seed_or_rng))


# --------------------------------------------------------------------------
# generators


def gen_preorder(n: int, density: float, seed) -> Preorder:
    """Include each off-diagonal pair with probability ``density``, then close."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = _as_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density]
    return closure(Relation.from_pairs(n, pairs))


def _random_on(theta: Preorder, ring: Ring, rng) -> StructMatrix:
    zero = ring.zero()
    n = theta.n
    rows = tuple(
        tuple(ring.random(rng) if theta.table[i][j] else zero for j in range(n)) for i in range(n)
    )
    return StructMatrix(ring, rows)


def _nil_supported(ring: Ring) -> bool:
    try:
        nil_structure(ring)
    except UnsupportedRing:
        return False
    return True


def predicted_invertible(A: StructMatrix) -> bool | None:
    """Decide invertibility without inverting: det is a unit (commutative), or
    the body matrix is nonsingular (nilpotent nilradical). None when neither applies."""
    ring = A.ring
    if ring.commutative:
        try:
            ring.try_inverse(determinant(A).payload)
        except StructRingError:
            return False
        return True
    if _nil_supported(ring):
        ns = nil_structure(ring)
        body = tuple(tuple(ns.project(a) for a in row) for row in A.entries)
        return not ns.quotient.is_zero(det_rows(ns.quotient, body))
    return None


def gen_structural_matrix(
    theta: Preorder,
    ring: Ring,
    seed,
    want_invertible: bool = False,
    *,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> StructMatrix:
    """Random entries on theta, exact zeros elsewhere; with ``want_invertible``
    rejection-sample up to ``max_tries`` times."""
    rng = _as_rng(seed)
    if not want_invertible:
        return _random_on(theta, ring, rng)
    for _ in range(max_tries):
        A = _random_on(theta, ring, rng)
        ok = predicted_invertible(A)
        if ok is None:
            try:
                invert(A)
                ok = True
            except NotInvertible:
                ok = False
            except NoMethodApplicable as exc:
                raise GenerationFailed(str(exc)) from exc
        if ok:
            return A
    raise GenerationFailed(f"no invertible matrix over {ring} after {max_tries} tries")


def gen_block_structural(outer: Preorder, inner: Preorder, ring: MatrixRing, rng) -> StructMatrix:
    """Random element of M_n(outer, M_m(inner, R))."""
    base, m, n = ring.base, ring.size, outer.n
    zero_block = ring.zero()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if outer.table[i][j]:
                row.append(_random_on(inner, base, rng).entries)
            else:
                row.append(zero_block)
        rows.append(tuple(row))
    return StructMatrix(ring, tuple(rows))


# --------------------------------------------------------------------------
# scenarios and reports


@dataclass
class Scenario:
    ring: Ring
    n: int
    trials: int = 100
    seed: int = 0
    density: float = DEFAULT_DENSITY
    theta: Preorder | None = None
    max_tries: int = DEFAULT_MAX_TRIES

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.theta is not None and self.theta.n != self.n:
            raise ValueError(f"theta on {self.theta.n} points but n = {self.n}")

    def pick_theta(self, rng) -> Preorder:
        return self.theta if self.theta is not None else gen_preorder(self.n, self.density, rng)


@dataclass
class SuiteReport:
    suite: str
    ring: dict | None
    n: int | None
    seed: int | None
    trials: int
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    density: float | None = None
    checks: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and all((self.checks or {}).values())

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "ring": self.ring,
            "n": self.n,
            "seed": self.seed,
            "density": self.density,
            "trials": self.trials,
            "failure_count": len(self.failures),
            "failures": self.failures,
            "checks": self.checks,
            "notes": self.notes,
            "passed": self.passed,
            "wall_time": round(self.wall_time, 4),
        }


class _Trial:
    """Collects the instance and failed checks of one trial."""

    def __init__(self):
        self.instance: dict[str, Any] = {}
        self.failed: list[str] = []
        self.counters: dict[str, int] = {}

    def record(self, **items):
        for k, v in items.items():
            self.instance[k] = v.to_json() if hasattr(v, "to_json") else v

    def expect(self, name: str, ok: bool):
        if not ok:
            self.failed.append(name)

    def count(self, name: str):
        self.counters[name] = self.counters.get(name, 0) + 1


# --------------------------------------------------------------------------
# suites


def _closure_trial(sc: Scenario, rng, tr: _Trial):
    theta = sc.pick_theta(rng)
    tr.record(theta=theta)
    raw = _random_on(theta, sc.ring, rng)
    predicted = predicted_invertible(raw)
    try:
        invert(raw)
        got = True
    except NotInvertible:
        got = False
    if predicted is not None:
        tr.record(raw=raw)
        tr.expect("method_succeeds_iff_invertible", predicted == got)
    A = gen_structural_matrix(theta, sc.ring, rng, True, max_tries=sc.max_tries)
    tr.record(A=A)
    cert = invert(A)
    tr.record(inverse=cert.inverse, method=cert.method)
    tr.count(cert.method)
    tr.expect("verified", cert.verified)
    tr.expect("inverse_structural", check_structural(cert.inverse, theta))


def _preadjoint_trial(sc: Scenario, rng, tr: _Trial):
    theta = sc.pick_theta(rng)
    A = _random_on(theta, sc.ring, rng)
    tr.record(theta=theta, A=A)
    P = preadjoint(A)
    tr.record(preadjoint=P)
    tr.expect("preadjoint_structural", check_structural(P, theta))
    if sc.ring.commutative:
        adj = adjoint_classical(A)
        tr.expect("preadjoint_is_factorial_times_adjugate", P == adj.scale(factorial(A.n - 1)))


def _adjoint_trial(sc: Scenario, rng, tr: _Trial):
    theta = sc.pick_theta(rng)
    A = _random_on(theta, sc.ring, rng)
    tr.record(theta=theta, A=A)
    adj = adjoint_classical(A)
    tr.record(adjugate=adj)
    dI = scalar_embed(determinant(A), A.n)
    tr.expect("adjugate_structural", check_structural(adj, theta))
    tr.expect("A_adj_is_det_I", A @ adj == dI)
    tr.expect("adj_A_is_det_I", adj @ A == dI)


def _flatten_trial(sc: Scenario, rng, tr: _Trial):
    ring = sc.ring
    m, n = ring.size, sc.n
    outer = sc.pick_theta(rng)
    inner = gen_preorder(m, sc.density, rng)
    bar = compose_kron(outer, inner)
    variant = int(rng.integers(0, 3))
    if variant == 1:
        X = StructMatrix(ring, MatrixRing(n, ring).random(rng))
    else:
        X = gen_block_structural(outer, inner, ring, rng)
        if variant == 2:
            I, J = int(rng.integers(0, n * m)), int(rng.integers(0, n * m))
            F = [list(r) for r in flatten_blocks(X).entries]
            F[I][J] = ring.base.add(F[I][J], ring.base.random(rng))
            X = unflatten_blocks(StructMatrix(ring.base, tuple(map(tuple, F))), m)
    Y = gen_block_structural(outer, inner, ring, rng)
    tr.record(outer=outer, inner=inner, X=X, Y=Y)
    fX, fY = flatten_blocks(X), flatten_blocks(Y)
    tr.expect("multiplicative", flatten_blocks(X @ Y) == fX @ fY)
    tr.expect("additive", flatten_blocks(X + Y) == fX + fY)
    tr.expect("unit_preserving", flatten_blocks(StructMatrix.identity(ring, n)).is_identity())
    tr.expect("injective", unflatten_blocks(fX, m) == X)
    tr.expect(
        "structural_iff_flattened_structural",
        check_block_structural(X, outer, inner) == check_structural(fX, bar),
    )
    tr.expect("closed_under_product", check_structural(fX @ fY, bar) or not check_block_structural(X, outer, inner))


def _cayley_hamilton_trial(sc: Scenario, rng, tr: _Trial):
    theta = sc.pick_theta(rng)
    A = _random_on(theta, sc.ring, rng)
    tr.record(theta=theta, A=A)
    p = char_poly(A)
    tr.record(char_poly=p)
    tr.expect("chi_A_of_A_is_zero", evaluate(p, A).is_zero())
    ring = sc.ring
    det = determinant(A).payload
    tr.expect("constant_term_is_signed_det", p.coeffs[0] == (det if A.n % 2 == 0 else ring.neg(det)))
    try:
        U = gen_structural_matrix(theta, ring, rng, True, max_tries=min(sc.max_tries, 50))
    except GenerationFailed:
        tr.count("no_invertible_sample")
        return
    tr.count("invertible")
    tr.record(U=U)
    q = char_poly(U)
    tr.expect("chi_U_of_U_is_zero", evaluate(q, U).is_zero())
    via_adj = inv_adjugate(U).inverse
    via_poly = inverse_from_monic_annihilator(U, q, method="char_poly").inverse
    tr.record(inverse=via_adj)
    tr.expect("annihilator_inverse_equals_adjugate", via_poly == via_adj)
    tr.expect("adjugate_inverse_structural", check_structural(via_adj, theta))
    if ring.finite and U.n <= 3:
        tr.expect("power_order_agrees", inv_by_power_order(U).inverse == via_adj)


def _nil_lift_trial(sc: Scenario, rng, tr: _Trial):
    ring = sc.ring
    ns = nil_structure(ring)
    q = ns.quotient
    for _ in range(sc.max_tries):
        x = ring.random(rng)
        if not q.is_zero(ns.project(x)):
            break
    else:
        raise GenerationFailed("no element with invertible body")
    s = ns.lift(q.try_inverse(ns.project(x)))
    x_el, s_el = RingElement(ring, x), RingElement(ring, s)
    tr.record(x=x_el.encode(), s=s_el.encode(), k=ns.bound)
    lifted = lift_inverse_nil_binomial(x_el, [s_el], ns.bound).inverse
    tr.expect("element_lift_matches_direct_inverse", lifted == x_el.inverse())

    theta = sc.pick_theta(rng)
    A = gen_structural_matrix(theta, ring, rng, True, max_tries=sc.max_tries)
    B = body_inverse_lift(A)
    tr.record(theta=theta, A=A, B=B)
    binom = lift_inverse_nil_binomial(A, [B], ns.bound).inverse
    geo = inv_nil_geometric(A, theta)
    tr.record(inverse=geo.inverse)
    tr.expect("matrix_lift_matches_geometric", binom == geo.inverse)
    tr.expect("inverse_structural", check_structural(geo.inverse, theta))
    tr.expect("geometric_verified", geo.verified)
    if ring.commutative:
        tr.expect("geometric_matches_adjugate", geo.inverse == inv_adjugate(A).inverse)


def _flat_base(ring: Ring) -> tuple[Modular, int]:
    if isinstance(ring, Modular):
        return ring, 1
    if isinstance(ring, MatrixRing) and isinstance(ring.base, Modular):
        return ring.base, ring.size
    raise UnsupportedCombination(f"dedekind suite needs Modular or MatrixRing over Modular, got {ring}")


def right_inverses(A: StructMatrix, *, limit: int = 200_000) -> list[StructMatrix]:
    """Every B with A B = I, by brute-force enumeration of columns over Z/m.

    Independent of all inversion routines: each column of the flattened B is
    searched over the whole of (Z/m)^N.
    """
    base, k = _flat_base(A.ring)
    F = flatten_blocks(A) if k > 1 else A
    N, m = F.n, base.modulus
    if m**N > limit:
        raise UnsupportedCombination(f"(Z/{m})^{N} too large to enumerate")
    cols = []
    vectors = list(itertools.product(range(m), repeat=N))
    for j in range(N):
        sols = [
            v for v in vectors
            if all(sum(F.entries[i][c] * v[c] for c in range(N)) % m == (1 if i == j else 0) for i in range(N))
        ]
        if not sols:
            return []
        cols.append(sols)
    out = []
    for choice in itertools.product(*cols):
        rows = tuple(tuple(choice[j][i] for j in range(N)) for i in range(N))
        B = StructMatrix(base, rows)
        out.append(unflatten_blocks(B, k) if k > 1 else B)
    return out


def _dedekind_trial(sc: Scenario, rng, tr: _Trial):
    ring = sc.ring
    for _ in range(sc.max_tries):
        A = StructMatrix(ring, MatrixRing(sc.n, ring).random(rng))
        found = right_inverses(A)
        if found:
            break
    else:
        raise GenerationFailed("no matrix with a right inverse found")
    tr.record(A=A)
    tr.count("pairs")
    mring = MatrixRing(sc.n, ring)
    theta = Preorder.from_pairs(2, [(0, 0), (0, 1), (1, 1)])
    for B in found:
        tr.expect("AB_is_I", (A @ B).is_identity())
        ba = (B @ A).is_identity()
        tr.expect("BA_is_I", ba)
        if not ba:
            tr.record(B=B)
        # the 2x2 triangular construction over M_n(R) with x = A, y = B
        x, y = A.entries, B.entries
        one = mring.one()
        e = mring.sub(one, mring.mul(y, x))
        T = StructMatrix(mring, ((y, e), (mring.zero(), x)))
        Tinv = StructMatrix(mring, ((x, mring.zero()), (e, y)))
        tr.expect("triangular_inverse", (T @ Tinv).is_identity() and (Tinv @ T).is_identity())
        tr.expect("triangular_inverse_structural", check_structural(Tinv, theta) == ba)


_SUITES: dict[str, Callable] = {
    "closure": _closure_trial,
    "preadjoint": _preadjoint_trial,
    "adjoint": _adjoint_trial,
    "flatten": _flatten_trial,
    "cayley_hamilton": _cayley_hamilton_trial,
    "nil_lift": _nil_lift_trial,
    "dedekind": _dedekind_trial,
}


def _check_combination(name: str, sc: Scenario):
    ring = sc.ring
    if name not in _SUITES:
        raise UnsupportedCombination(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    if name == "closure" and not (ring.commutative or _nil_supported(ring) or ring.finite):
        raise UnsupportedCombination(f"no inversion method over {ring}")
    if name in ("adjoint", "cayley_hamilton") and not ring.commutative:
        raise UnsupportedCombination(f"{name} needs a commutative ring, got {ring}")
    if name == "preadjoint" and sc.n > PREADJOINT_MAX_N:
        raise UnsupportedCombination(f"preadjoint limited to n <= {PREADJOINT_MAX_N}")
    if name == "flatten" and not isinstance(ring, MatrixRing):
        raise UnsupportedCombination("flatten needs a MatrixRing descriptor")
    if name == "nil_lift" and not _nil_supported(ring):
        raise UnsupportedCombination(f"no nilradical decomposition for {ring}")
    if name == "dedekind":
        _flat_base(ring)


def replay_command(name: str, sc: Scenario, trial: int) -> str:
    ring = json.dumps(sc.ring.to_json(), separators=(",", ":"))
    cmd = (
        f"structring proptest --suite {name} --ring '{ring}' --n {sc.n} "
        f"--seed {sc.seed} --trials 1 --start {trial} --density {sc.density}"
    )
    if sc.theta is not None:
        cmd += " --theta <theta.json>"
    return cmd


def run_suite(name: str, scenario: Scenario, *, start: int = 0) -> SuiteReport:
    """Run ``scenario.trials`` independent trials, trial t seeded by (seed, t)."""
    _check_combination(name, scenario)
    log.info(
        "suite=%s ring=%s n=%d trials=%d seed=%d density=%s max_tries=%d",
        name, scenario.ring, scenario.n, scenario.trials, scenario.seed,
        scenario.density, scenario.max_tries,
    )
    trial_fn = _SUITES[name]
    report = SuiteReport(
        name, scenario.ring.to_json(), scenario.n, scenario.seed, 0, density=scenario.density
    )
    t0 = time.perf_counter()
    for t in range(start, start + scenario.trials):
        tr = _Trial()
        try:
            trial_fn(scenario, trial_rng(scenario.seed, t), tr)
        except StructRingError as exc:
            tr.failed.append(f"error: {type(exc).__name__}: {exc}")
        report.trials += 1
        for k, v in tr.counters.items():
            report.notes[k] = report.notes.get(k, 0) + v
        if tr.failed:
            report.failures.append(
                {
                    "trial": t,
                    "seed": scenario.seed,
                    "failed": tr.failed,
                    "instance": tr.instance,
                    "replay": replay_command(name, scenario, t),
                }
            )
    report.wall_time = time.perf_counter() - t0
    return report


# --------------------------------------------------------------------------
# exhaustive oracle


def all_preorders(n: int) -> list[Preorder]:
    """Every preorder on n points, by filtering all 2^(n^2 - n) relations."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in itertools.product((False, True), repeat=len(off)):
        pairs = [(i, i) for i in range(n)] + [p for p, b in zip(off, bits) if b]
        rel = Relation.from_pairs(n, pairs)
        if validate(rel):
            out.append(Preorder(rel.n, rel.table))
    return out


def exhaustive_closure(ring: Modular, n: int) -> SuiteReport:
    """For every preorder and every structural matrix over a small Z/m, find all
    two-sided inverses by brute force over the full matrix ring and check each
    is structural and matches :func:`invert`."""
    if not isinstance(ring, Modular):
        raise UnsupportedCombination("exhaustive closure enumerates Z/m only")
    t0 = time.perf_counter()
    mring = MatrixRing(n, ring)
    values = range(ring.modulus)
    every = [
        tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))
        for v in itertools.product(values, repeat=n * n)
    ]
    report = SuiteReport("exhaustive_closure", ring.to_json(), n, None, 0)
    preorders = all_preorders(n)
    for theta in preorders:
        for M in every:
            A = StructMatrix(ring, M)
            if not check_structural(A, theta):
                continue
            inverses = [B for B in every if mring.is_one(mring.mul(M, B)) and mring.is_one(mring.mul(B, M))]
            failed = []
            try:
                cert = invert(A)
            except NotInvertible:
                cert = None
            if (cert is None) != (not inverses):
                failed.append("invert_agrees_with_enumeration")
            if inverses:
                report.trials += 1
                if len(inverses) != 1:
                    failed.append("inverse_unique")
                if not all(check_structural(StructMatrix(ring, B), theta) for B in inverses):
                    failed.append("inverse_structural")
                if cert is not None and cert.inverse.entries != inverses[0]:
                    failed.append("invert_matches_enumeration")
            if failed:
                report.failures.append({"theta": theta.to_json(), "A": A.to_json(), "failed": failed})
    report.notes["preorders"] = len(preorders)
    report.wall_time = time.perf_counter() - t0
    return report


# --------------------------------------------------------------------------
# demo


def jacobson_example(base: Ring | None = None):
    """The triangular matrix over K<x, y | xy = 1>, its lower-triangular inverse, and theta."""
    J = Jacobson(base or Rationals())
    x, y = RingElement(J, J.x), RingElement(J, J.y)
    theta = Preorder.from_pairs(2, [(1, 1), (1, 2), (2, 2)], one_based=True)
    A = StructMatrix.of(J, [[y, 1 - y * x], [0, x]])
    A_inv = StructMatrix.of(J, [[x, 0], [1 - y * x, y]])
    return J, x, y, A, A_inv, theta


def demo_jacobson(base: Ring | None = None) -> SuiteReport:
    t0 = time.perf_counter()
    J, x, y, A, A_inv, theta = jacobson_example(base)
    e = 1 - y * x
    checks = {
        "xy_is_one": (x * y).is_one(),
        "yx_is_not_one": not (y * x).is_one(),
        "idempotent_1_minus_yx": e * e == e,
        "x_kills_1_minus_yx": (x * e).is_zero(),
        "1_minus_yx_kills_y": (e * y).is_zero(),
        "A_times_A_inv_is_I": (A @ A_inv).is_identity(),
        "A_inv_times_A_is_I": (A_inv @ A).is_identity(),
        "A_structural": check_structural(A, theta),
        "A_inv_not_structural": not check_structural(A_inv, theta),
        "preadjoint_structural": check_structural(preadjoint(A), theta),
    }
    try:
        invert(A)
        checks["dispatcher_reports_no_method"] = False
    except NoMethodApplicable:
        checks["dispatcher_reports_no_method"] = True
    try:
        lift_inverse_nil_binomial(x, [y], 1)
        checks["x_has_only_one_sided_inverse"] = False
    except OneSidedInverse:
        checks["x_has_only_one_sided_inverse"] = True
    report = SuiteReport("demo_jacobson", J.to_json(), 2, None, 1, checks=checks)
    report.notes = {
        "theta": theta.to_json(),
        "A": A.to_json(),
        "A_inv": A_inv.to_json(),
        "preadjoint": preadjoint(A).to_json(),
    }
    report.wall_time = time.perf_counter() - t0
    return report
