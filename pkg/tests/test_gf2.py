from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlrc import gf2
from qlrc.gf2 import BitMatrix, DimensionMismatch, NotSelfOrthogonal, SubspaceBasis

from conftest import bit_matrices, span


def brute_rank(M: BitMatrix) -> int:
    return int(math.log2(len(span(M.data))))


def brute_kernel(M: BitMatrix) -> set[int]:
    return {x for x in range(1 << M.cols) if all(gf2.popcount(r & x) % 2 == 0 for r in M.data)}


class TestBitMatrix:
    def test_shape_and_entries(self):
        M = BitMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
        assert M.shape == (2, 3)
        assert M[0, 2] == 1 and M[1, 0] == 0
        assert M.to_lists() == [[1, 0, 1], [0, 1, 1]]
        assert str(M) == "101\n011"

    def test_rejects_out_of_range_bits(self):
        with pytest.raises(ValueError):
            BitMatrix(1, 2, (0b100,))
        with pytest.raises(ValueError):
            BitMatrix.from_rows([[1, 0], [1]])

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            BitMatrix.zeros(2, 2)[2, 0]

    @given(bit_matrices())
    def test_transpose_involution(self, M):
        assert M.T.T == M
        assert all(M[i, j] == M.T[j, i] for i in range(M.rows) for j in range(M.cols))

    @given(bit_matrices(max_cols=5), st.data())
    def test_matmul_matches_definition(self, A, data):
        B_cols = data.draw(st.integers(0, 5))
        B = BitMatrix(A.cols, B_cols, tuple(data.draw(st.integers(0, (1 << B_cols) - 1)) for _ in range(A.cols)))
        C = A @ B
        for i in range(A.rows):
            for j in range(B_cols):
                assert C[i, j] == sum(A[i, k] * B[k, j] for k in range(A.cols)) % 2

    def test_matmul_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            BitMatrix.zeros(2, 3) @ BitMatrix.zeros(2, 3)

    def test_flip(self):
        M = BitMatrix.zeros(2, 2).flip(1, 0)
        assert M.to_lists() == [[0, 0], [1, 0]]


class TestRank:
    def test_hamming(self, hamming):
        assert gf2.rank(hamming) == 3

    @pytest.mark.parametrize("shape", [(0, 0), (3, 5), (5, 2)])
    def test_zero_matrix(self, shape):
        assert gf2.rank(BitMatrix.zeros(*shape)) == 0

    @given(bit_matrices())
    def test_matches_span_size(self, M):
        assert gf2.rank(M) == brute_rank(M) <= min(M.rows, M.cols)

    @given(bit_matrices())
    def test_rank_of_transpose(self, M):
        assert gf2.rank(M) == gf2.rank(M.T)

    def test_row_space_size_on_random_matrices(self):
        rng = random.Random(7)
        for _ in range(200):
            rows, cols = rng.randint(0, 10), rng.randint(0, 12)
            M = BitMatrix(rows, cols, tuple(rng.getrandbits(cols) if cols else 0 for _ in range(rows)))
            assert gf2.rank(M) == gf2.row_space_basis(M).dim

    def test_rref_pivots_are_leftmost(self):
        rows, pivots = gf2.rref(BitMatrix.from_rows([[0, 1, 1], [0, 1, 0], [0, 0, 0]]))
        assert pivots == [1, 2]
        assert rows == [0b010, 0b100]


class TestKernel:
    def test_hamming(self, hamming):
        assert gf2.kernel_basis(hamming).dim == 4

    def test_identity(self):
        assert gf2.kernel_basis(BitMatrix.identity(5)).dim == 0

    @given(bit_matrices())
    def test_kernel_is_exact(self, M):
        K = gf2.kernel_basis(M)
        assert K.dim == M.cols - gf2.rank(M)
        assert all(M.matvec(v) == 0 for v in K)
        assert span(K.vectors) == brute_kernel(M)

    @given(bit_matrices())
    def test_row_space_round_trip(self, M):
        R = gf2.row_space_basis(M)
        assert R.contains_all(M.data)
        assert span(R.vectors) == span(M.data)


class TestSelfOrthogonal:
    def test_hamming(self, hamming):
        assert gf2.is_self_orthogonal(hamming)

    def test_single_one(self):
        assert not gf2.is_self_orthogonal(BitMatrix.from_rows([[1]]))

    @given(bit_matrices())
    def test_matches_gram_matrix(self, M):
        assert gf2.is_self_orthogonal(M) == all(r == 0 for r in (M @ M.T).data)

    @given(bit_matrices())
    def test_even_weights_and_overlaps(self, M):
        if gf2.is_self_orthogonal(M):
            assert all(gf2.popcount(r) % 2 == 0 for r in M.data)
            assert all(gf2.popcount(a & b) % 2 == 0 for a in M.data for b in M.data)


class TestComplement:
    def test_hamming(self, hamming):
        U = gf2.complement_in_kernel(hamming)
        assert U.dim == 1

    def test_zero_matrix(self):
        assert gf2.complement_in_kernel(BitMatrix.zeros(4, 4)).dim == 4

    def test_rejects_non_self_orthogonal(self):
        with pytest.raises(NotSelfOrthogonal):
            gf2.complement_in_kernel(BitMatrix.from_rows([[1, 0]]))

    @given(bit_matrices())
    def test_direct_sum(self, M):
        if not gf2.is_self_orthogonal(M):
            return
        U = gf2.complement_in_kernel(M)
        rk = gf2.rank(M)
        assert U.dim + 2 * rk == M.cols
        stacked = SubspaceBasis(M.cols, U.vectors + gf2.row_space_basis(M).vectors)
        assert stacked.dim == gf2.kernel_basis(M).dim
        assert all(M.matvec(u) == 0 for u in U)

    def test_deterministic(self, hamming):
        assert gf2.complement_in_kernel(hamming) == gf2.complement_in_kernel(hamming)


class TestTensor:
    def test_basis_vectors(self):
        assert gf2.tensor_vector((1, 0), (0, 1)) == (0, 1, 0, 0)

    def test_zero_factor(self):
        assert gf2.tensor_vector((1, 1, 0), (0, 0)) == (0,) * 6

    @given(st.lists(st.integers(0, 1), max_size=6), st.lists(st.integers(0, 1), max_size=6))
    def test_entries_and_weight(self, u, v):
        w = gf2.tensor_vector(u, v)
        assert len(w) == len(u) * len(v)
        assert all(w[i * len(v) + j] == u[i] * v[j] for i in range(len(u)) for j in range(len(v)))
        assert sum(w) == sum(u) * sum(v)


class TestIntersection:
    def test_self(self):
        A = SubspaceBasis(4, (0b0011, 0b0101))
        assert gf2.intersection_dim(A, A) == 2

    def test_disjoint_coordinates(self):
        assert gf2.intersection_dim(SubspaceBasis(4, (1, 2)), SubspaceBasis(4, (4, 8))) == 0

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            gf2.intersection_dim(SubspaceBasis(3, ()), SubspaceBasis(4, ()))

    @given(bit_matrices(max_rows=4, max_cols=6), st.data())
    def test_matches_brute_force(self, M, data):
        other = tuple(data.draw(st.integers(0, (1 << M.cols) - 1)) for _ in range(data.draw(st.integers(0, 4))))
        A = gf2.row_space_basis(M)
        B = gf2.row_space_basis(BitMatrix(len(other), M.cols, other))
        common = span(A.vectors) & span(B.vectors)
        assert 2 ** gf2.intersection_dim(A, B) == len(common)
        assert gf2.intersection_dim(A, B) + gf2.span_union_rank(A, B) == A.dim + B.dim


class TestRestrict:
    @settings(max_examples=60)
    @given(bit_matrices(max_rows=5, max_cols=7), st.integers(0, 127))
    def test_matches_brute_force(self, M, mask):
        mask &= (1 << M.cols) - 1
        B = gf2.row_space_basis(M)
        R = gf2.restrict_to_support(B, mask)
        assert span(R.vectors) == {v for v in span(B.vectors) if v & ~mask == 0}
