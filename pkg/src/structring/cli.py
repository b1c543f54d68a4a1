"""Command-line entry point. All inputs and outputs are the package's JSON formats."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness, inverse, preorder, structmat
from .errors import StructRingError
from .rings import ring_from_json

METHOD_ALIASES = {
    "adjugate": "adjugate",
    "charpoly": "char_poly",
    "annihilator": "monic_annihilator",
    "power": "power_order",
    "nilgeom": "nil_geometric",
}


def _load(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    return json.loads(Path(path).read_text())


def _load_inline(text: str) -> dict:
    """JSON given inline, or ``@file`` / a path to a JSON file."""
    if text.startswith("@"):
        return _load(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return _load(text)


def _emit(doc, out: str | None):
    text = json.dumps(doc, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _cmd_preorder(args) -> int:
    rel = preorder.relation_from_json(_load(args.input))
    if args.action == "validate":
        ok = preorder.validate(rel)
        _emit({"valid": ok, "reflexive": rel.is_reflexive(), "transitive": rel.is_transitive()}, args.out)
        return 0 if ok else 1
    if args.action == "close":
        _emit(preorder.closure(rel).to_json(), args.out)
        return 0
    if not args.in2:
        raise SystemExit("preorder compose needs --in2")
    outer = preorder.as_preorder(rel, close=args.close_theta)
    inner = preorder.preorder_from_json(_load(args.in2), close=args.close_theta)
    _emit(preorder.compose_kron(outer, inner).to_json(), args.out)
    return 0


def _cmd_matrix(args) -> int:
    A = structmat.matrix_from_json(_load(args.input), close_theta=args.close_theta)
    if args.action == "det":
        d = structmat.determinant(A)
        doc = {"ring": A.ring.to_json(), "det": d.encode()}
    elif args.action == "adj":
        doc = structmat.adjoint_classical(A).to_json()
    elif args.action == "preadj":
        doc = structmat.preadjoint(A).to_json()
    elif args.action == "charpoly":
        doc = structmat.char_poly(A).to_json()
    else:
        method = METHOD_ALIASES[args.method] if args.method else None
        if method == "monic_annihilator":
            if not args.poly:
                raise SystemExit("--method annihilator needs --poly")
            p = structmat.polynomial_from_json(_load(args.poly))
            cert = inverse.inverse_from_monic_annihilator(A, p, annihilates=args.annihilates)
        else:
            cert = inverse.invert(A, method=method)
        doc = cert.to_json()
    _emit(doc, args.out)
    return 0


def _cmd_check(args) -> int:
    A = structmat.matrix_from_json(_load(args.matrix))
    theta = preorder.preorder_from_json(_load(args.theta), close=args.close_theta)
    ok = structmat.check_structural(A, theta)
    _emit({"structural": ok}, None)
    return 0 if ok else 1


def _cmd_demo(args) -> int:
    report = harness.demo_jacobson()
    _emit(report.to_json(), None)
    return 0 if report.passed else 1


def _cmd_proptest(args) -> int:
    ring = ring_from_json(_load_inline(args.ring))
    if args.suite == "exhaustive":
        report = harness.exhaustive_closure(ring, args.n)
    else:
        theta = None
        if args.theta:
            theta = preorder.preorder_from_json(_load(args.theta), close=args.close_theta)
        scenario = harness.Scenario(
            ring, args.n, trials=args.trials, seed=args.seed, density=args.density,
            theta=theta, max_tries=args.max_tries,
        )
        report = harness.run_suite(args.suite, scenario, start=args.start)
    _emit(report.to_json(), None)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="structring", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log suite configuration to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("preorder", help="validate, close or compose relations")
    pp.add_argument("action", choices=["validate", "close", "compose"])
    pp.add_argument("--in", dest="input", required=True)
    pp.add_argument("--in2")
    pp.add_argument("--out")
    pp.add_argument("--close-theta", action="store_true", help="close non-preorder inputs instead of rejecting them")
    pp.set_defaults(func=_cmd_preorder)

    pm = sub.add_parser("matrix", help="determinant, adjoints, characteristic polynomial, inverse")
    pm.add_argument("action", choices=["det", "adj", "preadj", "charpoly", "inv"])
    pm.add_argument("--in", dest="input", required=True)
    pm.add_argument("--method", choices=sorted(METHOD_ALIASES))
    pm.add_argument("--poly", help="polynomial document for --method annihilator")
    pm.add_argument("--annihilates", choices=["x", "inverse"], default="x")
    pm.add_argument("--out")
    pm.add_argument("--close-theta", action="store_true")
    pm.set_defaults(func=_cmd_matrix)

    pc = sub.add_parser("check", help="structural membership test (exit 0 = structural)")
    pc.add_argument("what", choices=["structural"])
    pc.add_argument("--matrix", required=True)
    pc.add_argument("--theta", required=True)
    pc.add_argument("--close-theta", action="store_true")
    pc.set_defaults(func=_cmd_check)

    pd = sub.add_parser("demo", help="one-sided inverse demonstration")
    pd.add_argument("which", choices=["jacobson"])
    pd.set_defaults(func=_cmd_demo)

    pt = sub.add_parser("proptest", help="run a seeded property suite")
    pt.add_argument("--suite", required=True, choices=[*harness.SUITE_NAMES, "exhaustive"])
    pt.add_argument("--ring", required=True, help="descriptor JSON, or @file")
    pt.add_argument("--n", type=int, required=True)
    pt.add_argument("--trials", type=int, default=100)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--density", type=float, default=harness.DEFAULT_DENSITY)
    pt.add_argument("--theta", help="fixed preorder file instead of random ones")
    pt.add_argument("--close-theta", action="store_true")
    pt.add_argument("--start", type=int, default=0, help="index of the first trial (for replay)")
    pt.add_argument("--max-tries", type=int, default=harness.DEFAULT_MAX_TRIES)
    pt.set_defaults(func=_cmd_proptest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (StructRingError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
