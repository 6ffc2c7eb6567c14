from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gnarsil import gf2
from gnarsil.constructions import paper_catalog

H10 = paper_catalog("H10_5")


def bit_matrices(max_rows=8, max_cols=8):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(1, max_cols))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def brute_rank(M):
    """Rank by counting the distinct vectors in the row span."""
    span = {bytes(len(M[0]))} if len(M) else {b""}
    for row in M:
        span |= {bytes(a ^ b for a, b in zip(v, row.tobytes())) for v in span}
    return int(np.log2(len(span)))


class TestRank:
    def test_h10_columns_have_weight_two(self):
        # every column is hit twice, so the five rows sum to zero
        assert (H10.sum(axis=0) == 2).all()
        assert not np.bitwise_xor.reduce(H10, axis=0).any()
        assert gf2.rank(H10) == 4 == brute_rank(H10)

    def test_zero_and_identity(self):
        assert gf2.rank(np.zeros((3, 5), np.uint8)) == 0
        assert gf2.rank(gf2.identity(7)) == 7
        assert gf2.rank(np.zeros((0, 4), np.uint8)) == 0

    def test_wide_rows_cross_word_boundary(self):
        M = np.zeros((3, 130), np.uint8)
        M[0, [0, 129]] = 1
        M[1, [64, 129]] = 1
        M[2, [0, 64]] = 1
        assert gf2.rank(M) == 2

    @settings(max_examples=200)
    @given(bit_matrices())
    def test_matches_span_count(self, M):
        assert gf2.rank(M) == brute_rank(M)


class TestRref:
    def test_identity(self):
        R, piv = gf2.rref(gf2.identity(4))
        assert np.array_equal(R, gf2.identity(4)) and piv == [0, 1, 2, 3]

    def test_duplicate_rows(self):
        R, piv = gf2.rref([[1, 1], [1, 1]])
        assert R.tolist() == [[1, 1], [0, 0]] and piv == [0]

    def test_h10_pivots(self):
        assert len(gf2.rref(H10)[1]) == 4

    @settings(max_examples=200)
    @given(bit_matrices())
    def test_idempotent_and_transform(self, M):
        R, piv = gf2.rref(M)
        assert piv == sorted(set(piv))
        R2, piv2 = gf2.rref(R)
        assert np.array_equal(R, R2) and piv == piv2
        _, _, T = gf2.rref_with_transform(M)
        assert np.array_equal(gf2.matmul(T, M), R)
        assert gf2.rank(R) == gf2.rank(M)
        for i, p in enumerate(piv):
            assert R[i, p] == 1 and R[:, p].sum() == 1


class TestKernel:
    def test_h10(self):
        K = gf2.kernel(H10)
        assert K.shape == (6, 10)
        assert not gf2.matmul(H10, K.T).any()

    def test_identity_and_zero(self):
        assert gf2.kernel(gf2.identity(4)).shape == (0, 4)
        assert gf2.kernel(np.zeros((2, 5), np.uint8)).shape == (5, 5)

    def test_hamming_generator_weights(self):
        K = gf2.kernel(paper_catalog("H_hamming"))
        assert K.shape == (4, 7)
        assert min(K.sum(axis=1)) == 3

    @settings(max_examples=300)
    @given(bit_matrices())
    def test_dimension_identity(self, M):
        K = gf2.kernel(M)
        assert not gf2.matmul(M, K.T).any()
        assert gf2.rank(K) == len(K) == M.shape[1] - gf2.rank(M)


class TestSolveInverse:
    def test_solve_vector(self):
        A = np.array([[1, 1, 0], [0, 1, 1]], np.uint8)
        x = gf2.solve(A, [1, 0])
        assert gf2.matmul(A, x).tolist() == [1, 0]
        assert gf2.solve(np.array([[1, 1], [1, 1]], np.uint8), [1, 0]) is None

    def test_solve_matrix(self):
        A = gf2.identity(3)
        X, ok = gf2.solve(A, gf2.identity(3))
        assert ok.all() and np.array_equal(X, gf2.identity(3))

    def test_inverse(self):
        M = np.array([[1, 1], [0, 1]], np.uint8)
        assert np.array_equal(gf2.matmul(gf2.inverse(M), M), gf2.identity(2))
        with pytest.raises(np.linalg.LinAlgError):
            gf2.inverse(np.ones((2, 2), np.uint8))

    @settings(max_examples=200)
    @given(bit_matrices(), st.data())
    def test_solve_random(self, A, data):
        x = data.draw(arrays(np.uint8, A.shape[1], elements=st.integers(0, 1)))
        b = gf2.matmul(A, x)
        y = gf2.solve(A, b)
        assert y is not None and np.array_equal(gf2.matmul(A, y), b)


class TestSpan:
    def test_in_row_space(self):
        assert gf2.in_row_space(H10, np.zeros(10, np.uint8))
        assert gf2.in_row_space(gf2.identity(4), [1, 0, 1, 1])
        assert gf2.in_row_space(H10, H10[0] ^ H10[1])
        assert not gf2.in_row_space(H10, np.eye(10, dtype=np.uint8)[0])

    @settings(max_examples=200)
    @given(bit_matrices(), st.data())
    def test_in_row_space_matches_rank(self, M, data):
        v = data.draw(arrays(np.uint8, M.shape[1], elements=st.integers(0, 1)))
        expect = gf2.rank(np.vstack([M, v])) == gf2.rank(M)
        assert gf2.in_row_space(M, v) == expect
        basis = gf2.SpanBasis(M.shape[1], M)
        assert basis.contains(v) == expect
        assert basis.rank == gf2.rank(M)

    def test_span_basis_reduce(self):
        basis = gf2.SpanBasis(4)
        assert basis.add([1, 1, 0, 0]) and basis.add([0, 1, 1, 0])
        assert not basis.add([1, 0, 1, 0])
        assert basis.reduce([1, 0, 1, 0]).tolist() == [0, 0, 0, 0]
        assert basis.rank == 2 and basis.matrix().shape == (2, 4)

    def test_independent_rows(self):
        M = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1]], np.uint8)
        assert gf2.independent_rows(M) == [0, 2]


class TestKron:
    def test_examples(self):
        assert np.array_equal(gf2.kron(gf2.identity(2), gf2.identity(3)), gf2.identity(6))
        assert gf2.kron(H10, gf2.identity(10)).shape == (50, 100)
        B = np.array([[1, 0, 1]], np.uint8)
        assert np.array_equal(gf2.kron([[1]], B), B)

    @settings(max_examples=100)
    @given(st.data())
    def test_mixed_product(self, data):
        dims = data.draw(st.lists(st.integers(1, 3), min_size=6, max_size=6))
        a, b, c, d, e, f = dims
        mats = [data.draw(arrays(np.uint8, s, elements=st.integers(0, 1))) for s in [(a, b), (d, e), (b, c), (e, f)]]
        A, B, C, D = mats
        left = gf2.matmul(gf2.kron(A, B), gf2.kron(C, D))
        assert np.array_equal(left, gf2.kron(gf2.matmul(A, C), gf2.matmul(B, D)))


class TestEnumeration:
    def test_order(self):
        got = ["".join(map(str, v)) for v in gf2.enumerate_weight_w(3, 2)]
        assert got == ["110", "101", "011"]

    def test_counts(self):
        assert [v.tolist() for v in gf2.enumerate_weight_w(4, 0)] == [[0, 0, 0, 0]]
        vs = list(gf2.enumerate_weight_w(10, 4))
        assert len(vs) == 210 == len({v.tobytes() for v in vs})
        with pytest.raises(ValueError):
            list(gf2.enumerate_weight_w(3, 4))

    @pytest.mark.parametrize("n,w,chunk", [(7, 3, 4), (10, 4, 1000), (6, 6, 1), (5, 1, 2)])
    def test_support_chunks(self, n, w, chunk):
        rows = np.vstack(list(gf2.support_chunks(n, w, chunk)))
        assert len(rows) == comb(n, w)
        ref = [np.flatnonzero(v).tolist() for v in gf2.enumerate_weight_w(n, w)]
        assert rows.tolist() == ref

    def test_combinations(self):
        assert list(gf2.combinations("abc", 2)) == [("a", "b"), ("a", "c"), ("b", "c")]
        assert list(gf2.combinations([1, 2], 0)) == [()]
        assert len(list(gf2.combinations(range(8), 2))) == 28

    def test_hamming_weight(self):
        assert gf2.hamming_weight([1, 1, 0, 0, 0, 0]) == 2
        assert gf2.hamming_weight(np.zeros(5)) == 0
        assert gf2.hamming_weight(np.ones(9)) == 9


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "h.txt"
        gf2.write_matrix(p, H10)
        assert np.array_equal(gf2.read_matrix(p), H10)

    @pytest.mark.parametrize(
        "text,line",
        [("", 1), ("2 3\n101\n", 1), ("2 3\n101\n1x1\n", 3), ("two 3\n", 1), ("1 3\n10\n", 2)],
    )
    def test_malformed(self, text, line):
        with pytest.raises(gf2.MatrixFormatError) as exc:
            gf2.parse_matrix(text)
        if text:
            assert exc.value.line >= 1

    def test_strings(self):
        assert gf2.strings_to_rows(gf2.rows_to_strings(H10), 10).tolist() == H10.tolist()
