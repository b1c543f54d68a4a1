from math import factorial

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from structring.errors import NoncommutativeRing, NotStructural, PreadjointTooLarge, SizeMismatch, UnsupportedRing
from structring.harness import gen_block_structural, gen_preorder, gen_structural_matrix, jacobson_example
from structring.preorder import Preorder, compose_kron
from structring.rings import Grassmann, Integers, Jacobson, MatrixRing, Modular, Rationals, RingElement
from structring.structmat import (
    MonicPolynomial,
    StructMatrix,
    adjoint_classical,
    char_poly,
    check_block_structural,
    check_structural,
    determinant,
    evaluate,
    flatten_blocks,
    matmul,
    matrix_from_json,
    polynomial_from_json,
    preadjoint,
    scalar_embed,
    unflatten_blocks,
)

from oracles import cofactor_adjugate, laplace_det

Z, M5, M6 = Integers(), Modular(5), Modular(6)
UPPER = Preorder.from_pairs(2, [(1, 1), (1, 2), (2, 2)], one_based=True)
LOWER = Preorder.from_pairs(2, [(1, 1), (2, 1), (2, 2)], one_based=True)
seeds = st.integers(0, 2**32)


def mat(ring, rows):
    return StructMatrix.of(ring, rows)


def random_matrix(ring, n, seed, density=0.6):
    theta = gen_preorder(n, density, seed)
    return theta, gen_structural_matrix(theta, ring, seed + 1)


class TestStructural:
    def test_identity_any_theta(self):
        for d in (0.0, 0.5, 1.0):
            theta = gen_preorder(3, d, 5)
            assert check_structural(StructMatrix.identity(M5, 3), theta)

    def test_jacobson_example(self):
        _, _, _, A, A_inv, theta = jacobson_example()
        assert check_structural(A, theta)
        assert not check_structural(A_inv, theta)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            check_structural(StructMatrix.identity(Z, 3), UPPER)

    def test_pattern_enforced_on_construction(self):
        with pytest.raises(NotStructural):
            StructMatrix.of(Z, [[1, 0], [1, 1]], UPPER)
        assert StructMatrix.of(Z, [[1, 1], [0, 1]], UPPER).pattern == UPPER


class TestMatmul:
    def test_identity(self):
        A = mat(Z, [[1, 2], [3, 4]])
        assert A @ StructMatrix.identity(Z, 2) == A

    def test_jacobson_inverse_pair(self):
        _, _, _, A, A_inv, _ = jacobson_example()
        assert matmul(A, A_inv).is_identity() and matmul(A_inv, A).is_identity()

    def test_mod5(self):
        assert (mat(M5, [[2, 1], [0, 3]]) @ mat(M5, [[3, 4], [0, 2]])).is_identity()

    def test_mismatch(self):
        with pytest.raises(SizeMismatch):
            mat(Z, [[1]]) @ mat(M5, [[1]])

    def test_product_has_no_pattern(self):
        A = StructMatrix.of(Z, [[1, 1], [0, 1]], UPPER)
        assert (A @ A).pattern is None


class TestScalarEmbed:
    def test_examples(self):
        assert scalar_embed(Z.element(1), 3).is_identity()
        assert scalar_embed(Z.element(0), 3).is_zero()
        G = Grassmann(2, Rationals())
        e1 = G.element(G.gen(1))
        D = scalar_embed(e1, 2)
        assert D.entry(0, 0) == e1 and D.entry(1, 1) == e1 and D.entry(0, 1).is_zero()


class TestDeterminant:
    def test_examples(self):
        assert determinant(StructMatrix.identity(Z, 3)).payload == 1
        assert determinant(mat(Z, [[1, 2], [3, 4]])).payload == -2
        assert determinant(mat(M5, [[2, 1], [0, 3]])).payload == 1

    def test_noncommutative(self):
        with pytest.raises(NoncommutativeRing):
            determinant(StructMatrix.identity(Grassmann(2, Rationals()), 2))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_matches_laplace(self, n, seed):
        for ring in (Z, M6):
            _, A = random_matrix(ring, n, seed, 1.0)
            assert determinant(A).payload == laplace_det(ring, [list(r) for r in A.entries])


class TestAdjoint:
    def test_examples(self):
        assert adjoint_classical(StructMatrix.identity(Z, 3)).is_identity()
        assert adjoint_classical(mat(Z, [[1, 2], [3, 4]])) == mat(Z, [[4, -2], [-3, 1]])
        assert adjoint_classical(mat(Z, [[2, 1], [0, 3]])) == mat(Z, [[3, -1], [0, 2]])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_cofactor_oracle_and_identity(self, n, seed):
        for ring in (Z, M6):
            theta, A = random_matrix(ring, n, seed)
            adj = adjoint_classical(A)
            assert adj.entries == cofactor_adjugate(ring, [list(r) for r in A.entries])
            dI = scalar_embed(determinant(A), n)
            assert A @ adj == dI == adj @ A
            assert check_structural(adj, theta)


class TestPreadjoint:
    def test_n1(self):
        assert preadjoint(mat(Z, [[7]])).is_identity()
        G = Grassmann(2, Rationals())
        assert preadjoint(StructMatrix(G, ((G.gen(1),),))).is_identity()

    def test_two_by_two(self):
        assert preadjoint(mat(Z, [[1, 2], [3, 4]])) == mat(Z, [[4, -2], [-3, 1]])

    def test_jacobson(self):
        J, x, y, A, _, theta = jacobson_example()
        P = preadjoint(A)
        assert P == StructMatrix.of(J, [[x, -(1 - y * x)], [0, y]])
        assert check_structural(P, theta)

    def test_cap(self):
        with pytest.raises(PreadjointTooLarge):
            preadjoint(StructMatrix.identity(Z, 6))
        assert preadjoint(StructMatrix.identity(Z, 2), max_n=2).is_identity()

    def test_factor_order_noncommutative(self):
        # entry (1,1) for diag(1, x, y): both orderings of a22 a33, i.e. xy + yx
        J = Jacobson(Rationals())
        x, y = J.element(J.x), J.element(J.y)
        A = StructMatrix.of(J, [[1, 0, 0], [0, x, 0], [0, 0, y]])
        assert preadjoint(A).entry(0, 0) == 1 + y * x
        assert preadjoint(A).entry(1, 1) == 2 * y
        assert preadjoint(A).entry(2, 2) == 2 * x

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_factorial_adjugate(self, n, seed):
        for ring in (Z, M6):
            _, A = random_matrix(ring, n, seed)
            assert preadjoint(A) == adjoint_classical(A).scale(factorial(n - 1))

    @pytest.mark.parametrize(
        "ring", [Grassmann(3, Rationals()), MatrixRing(2, Modular(4)), Jacobson(Rationals())], ids=str
    )
    @settings(max_examples=15, deadline=None)
    @given(n=st.integers(2, 3), seed=seeds)
    def test_structural_closure_any_ring(self, ring, n, seed):
        theta, A = random_matrix(ring, n, seed, 0.5)
        assert check_structural(preadjoint(A), theta)


class TestCharPoly:
    def test_examples(self):
        p = char_poly(StructMatrix.identity(Z, 2))
        assert p.all_coeffs() == (1, -2, 1)
        assert char_poly(mat(Z, [[1, 2], [3, 4]])).all_coeffs() == (-2, -5, 1)
        assert char_poly(mat(Z, [[2, 0], [0, 3]])).all_coeffs() == (6, -5, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_against_sympy_and_cayley_hamilton(self, n, seed):
        _, A = random_matrix(Z, n, seed, 1.0)
        p = char_poly(A)
        expected = sympy.Matrix([list(r) for r in A.entries]).charpoly().all_coeffs()[::-1]
        assert list(p.all_coeffs()) == [int(c) for c in expected]
        assert evaluate(p, A).is_zero()
        B = StructMatrix(M6, tuple(tuple(a % 6 for a in r) for r in A.entries))
        assert char_poly(B).all_coeffs() == tuple(int(c) % 6 for c in expected)
        assert evaluate(char_poly(B), B).is_zero()

    def test_noncommutative(self):
        with pytest.raises(NoncommutativeRing):
            char_poly(StructMatrix.identity(Jacobson(Rationals()), 2))

    def test_json(self):
        p = char_poly(mat(M5, [[1, 2], [3, 4]]))
        assert p.to_json()["coeffs"] == [3, 0, 1]
        assert polynomial_from_json(p.to_json()) == p
        q = polynomial_from_json({"ring": {"kind": "mod", "modulus": 5}, "coeffs": [4, 0, 1]})
        assert q == MonicPolynomial(M5, (4, 0), 1)


class TestFlatten:
    R = MatrixRing(2, M5)

    def test_block_identity(self):
        assert flatten_blocks(StructMatrix.identity(self.R, 2)) == StructMatrix.identity(M5, 4)

    def test_single_block(self):
        block = ((1, 2), (3, 4))
        assert flatten_blocks(StructMatrix(self.R, ((block,),))) == StructMatrix(M5, block)

    def test_wrong_descriptor(self):
        with pytest.raises(UnsupportedRing):
            flatten_blocks(StructMatrix.identity(M5, 2))

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_homomorphism(self, seed):
        rng = np.random.default_rng(seed)
        X = StructMatrix(self.R, MatrixRing(2, self.R).random(rng))
        Y = StructMatrix(self.R, MatrixRing(2, self.R).random(rng))
        assert flatten_blocks(X @ Y) == flatten_blocks(X) @ flatten_blocks(Y)
        assert flatten_blocks(X + Y) == flatten_blocks(X) + flatten_blocks(Y)
        assert unflatten_blocks(flatten_blocks(X), 2) == X

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), seeds)
    def test_structural_iff(self, n, m, seed):
        rng = np.random.default_rng(seed)
        ring = MatrixRing(m, Modular(3))
        outer, inner = gen_preorder(n, 0.4, rng), gen_preorder(m, 0.4, rng)
        bar = compose_kron(outer, inner)
        X = gen_block_structural(outer, inner, ring, rng)
        assert check_block_structural(X, outer, inner)
        assert check_structural(flatten_blocks(X), bar)
        Y = StructMatrix(ring, MatrixRing(n, ring).random(rng))
        assert check_block_structural(Y, outer, inner) == check_structural(flatten_blocks(Y), bar)


def test_matrix_json_round_trip():
    G = Grassmann(2, Modular(5))
    A = StructMatrix.of(G, [[1, G.gen(1)], [0, 1]], UPPER)
    doc = A.to_json()
    assert doc["ring"] == {"kind": "grassmann", "generators": 2, "base": {"kind": "mod", "modulus": 5}}
    assert doc["entries"][0][1] == [[1, [1]]]
    assert doc["theta"] == UPPER.to_json()
    B = matrix_from_json(doc)
    assert B == A and B.pattern == UPPER
