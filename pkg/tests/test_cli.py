import json

import pytest

from structring.cli import main

MOD5 = {"kind": "mod", "modulus": 5}
UPPER = {"n": 2, "pairs": [[1, 1], [1, 2], [2, 2]]}


@pytest.fixture
def put(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


class TestPreorder:
    def test_validate(self, put, capsys):
        code, doc, _ = run(capsys, "preorder", "validate", "--in", put("t.json", UPPER))
        assert code == 0 and doc["valid"]
        code, doc, _ = run(capsys, "preorder", "validate", "--in", put("r.json", {"n": 2, "pairs": [[1, 2]]}))
        assert code == 1 and not doc["reflexive"]

    def test_close_to_file(self, put, tmp_path, capsys):
        out = tmp_path / "closed.json"
        code, _, _ = run(capsys, "preorder", "close", "--in", put("r.json", {"n": 3, "pairs": [[1, 2], [2, 3]]}), "--out", str(out))
        assert code == 0
        pairs = {tuple(p) for p in json.loads(out.read_text())["pairs"]}
        assert (1, 3) in pairs and (3, 3) in pairs

    def test_compose(self, put, capsys):
        a = put("a.json", UPPER)
        code, doc, _ = run(capsys, "preorder", "compose", "--in", a, "--in2", a)
        assert code == 0 and doc["n"] == 4 and [2, 3] not in doc["pairs"] and [1, 4] in doc["pairs"]

    def test_compose_rejects_non_preorder(self, put, capsys):
        bad = put("b.json", {"n": 2, "pairs": [[1, 2]]})
        code, _, err = run(capsys, "preorder", "compose", "--in", bad, "--in2", bad)
        assert code == 2 and "NotAPreorder" in err
        code, doc, _ = run(capsys, "preorder", "compose", "--in", bad, "--in2", bad, "--close-theta")
        assert code == 0 and doc["n"] == 4


class TestMatrix:
    def doc(self, rows, ring=MOD5, **extra):
        return {"ring": ring, "n": len(rows), "entries": rows, **extra}

    def test_det_adj_preadj(self, put, capsys):
        f = put("a.json", self.doc([[1, 2], [3, 4]], {"kind": "integers"}))
        assert run(capsys, "matrix", "det", "--in", f)[1]["det"] == "-2"
        assert run(capsys, "matrix", "adj", "--in", f)[1]["entries"] == [["4", "-2"], ["-3", "1"]]
        assert run(capsys, "matrix", "preadj", "--in", f)[1]["entries"] == [["4", "-2"], ["-3", "1"]]

    def test_charpoly(self, put, capsys):
        f = put("a.json", self.doc([[1, 2], [3, 4]]))
        assert run(capsys, "matrix", "charpoly", "--in", f)[1]["coeffs"] == [3, 0, 1]

    @pytest.mark.parametrize("method", [None, "adjugate", "charpoly", "power", "nilgeom"])
    def test_inv_methods(self, put, capsys, method):
        f = put("a.json", self.doc([[2, 1], [0, 3]], theta=UPPER))
        argv = ["matrix", "inv", "--in", f] + (["--method", method] if method else [])
        code, doc, _ = run(capsys, *argv)
        assert code == 0 and doc["verified"] and doc["inverse"]["entries"] == [[3, 4], [0, 2]]

    def test_inv_annihilator(self, put, capsys):
        f = put("a.json", self.doc([[1, 2], [3, 4]]))
        p = put("p.json", {"ring": MOD5, "coeffs": [3, 0, 1]})
        code, doc, _ = run(capsys, "matrix", "inv", "--in", f, "--method", "annihilator", "--poly", p)
        assert code == 0 and doc["inverse"]["entries"] == [[3, 1], [4, 2]]

    def test_inv_singular(self, put, capsys):
        f = put("a.json", self.doc([[1, 2], [3, 4]], {"kind": "integers"}))
        code, doc, err = run(capsys, "matrix", "inv", "--in", f)
        assert code == 2 and doc is None and "NotInvertible" in err

    def test_nonstructural_input_rejected(self, put, capsys):
        f = put("a.json", self.doc([[1, 0], [1, 1]], theta=UPPER))
        code, _, err = run(capsys, "matrix", "det", "--in", f)
        assert code == 2 and "NotStructural" in err


class TestCheck:
    def test_exit_codes(self, put, capsys):
        theta = put("t.json", UPPER)
        good = put("g.json", {"ring": MOD5, "n": 2, "entries": [[1, 1], [0, 1]]})
        bad = put("b.json", {"ring": MOD5, "n": 2, "entries": [[1, 0], [1, 1]]})
        assert run(capsys, "check", "structural", "--matrix", good, "--theta", theta)[:2] == (0, {"structural": True})
        assert run(capsys, "check", "structural", "--matrix", bad, "--theta", theta)[:2] == (1, {"structural": False})


def test_demo(capsys):
    code, doc, _ = run(capsys, "demo", "jacobson")
    assert code == 0 and doc["passed"] and all(doc["checks"].values())


class TestProptest:
    def test_closure(self, capsys):
        code, doc, _ = run(capsys, "proptest", "--suite", "closure", "--ring", json.dumps(MOD5), "--n", "3", "--trials", "10", "--seed", "4")
        assert code == 0 and doc["trials"] == 10 and doc["failure_count"] == 0 and doc["seed"] == 4

    def test_ring_from_file_and_theta(self, put, capsys):
        ring = put("ring.json", {"kind": "grassmann", "generators": 2, "base": {"kind": "rationals"}})
        theta = put("t.json", {"n": 2, "pairs": [[1, 2]]})
        argv = ["proptest", "--suite", "preadjoint", "--ring", "@" + ring, "--n", "2", "--trials", "5", "--theta", theta, "--close-theta"]
        code, doc, _ = run(capsys, *argv)
        assert code == 0 and doc["passed"]

    def test_exhaustive(self, capsys):
        code, doc, _ = run(capsys, "proptest", "--suite", "exhaustive", "--ring", '{"kind":"mod","modulus":2}', "--n", "2")
        assert code == 0 and doc["trials"] == 11

    def test_unsupported(self, capsys):
        code, _, err = run(capsys, "proptest", "--suite", "flatten", "--ring", json.dumps(MOD5), "--n", "2")
        assert code == 2 and "UnsupportedCombination" in err

    def test_replay_start(self, capsys):
        base = ["proptest", "--suite", "closure", "--ring", json.dumps(MOD5), "--n", "2", "--seed", "8"]
        code, doc, _ = run(capsys, *base, "--trials", "1", "--start", "7")
        assert code == 0 and doc["trials"] == 1
