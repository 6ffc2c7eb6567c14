import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gnarsil import gf2
from gnarsil.constructions import (
    CATALOG_CONVENTIONS,
    CATALOG_NAMES,
    ClassicalCode,
    RingElement,
    RingError,
    RingMatrix,
    RingOrthogonalityError,
    conjugate_transpose,
    format_ring_matrix,
    generator_from_parity,
    lift,
    lp,
    paper_catalog,
    parse_qc_exponents,
    parse_ring_matrix,
    ring_matmul,
    shp,
    slp,
)
from gnarsil.gf2 import MatrixFormatError
from gnarsil.pauli import symplectic_gram


def el(text, L):
    return RingElement.parse(text, L)


def ring_matrices(L, max_dim=3, shape=None):
    dims = st.just(shape) if shape else st.tuples(st.integers(1, max_dim), st.integers(1, max_dim))
    return dims.flatmap(lambda s: arrays(np.uint8, (*s, L), elements=st.integers(0, 1))).map(RingMatrix)


class TestRing:
    @pytest.mark.parametrize(
        "a,b,L,expect",
        [("x", "x", 2, "1"), ("x", "x^2", 3, "1"), ("1+x", "1+x", 3, "1+x^2"), ("1+x", "1+x", 2, "0")],
    )
    def test_products(self, a, b, L, expect):
        assert str(el(a, L) * el(b, L)) == expect

    def test_conj(self):
        assert str(el("x", 31).conj()) == "x^30"
        assert str(el("1+x^3", 5).conj()) == "1+x^2"
        assert el("1", 4).conj() == el("1", 4)

    def test_parse(self):
        assert str(el("x^{33}", 31)) == "x^2"
        assert str(el("x+x", 4)) == "0"
        with pytest.raises(RingError):
            el("y^2", 4)
        with pytest.raises(RingError):
            el("x", 3) + el("x", 4)

    @settings(max_examples=200)
    @given(st.integers(1, 7).flatmap(lambda L: st.tuples(*[arrays(np.uint8, L, elements=st.integers(0, 1))] * 3)))
    def test_ring_axioms(self, abc):
        a, b, c = (RingElement.from_array(v) for v in abc)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).conj() == a.conj() * b.conj()
        assert a.conj().conj() == a


class TestLift:
    def test_monomial(self):
        assert lift(RingMatrix.from_strings([["x"]], 2)).tolist() == [[0, 1], [1, 0]]
        P = lift(RingMatrix.from_strings([["x"]], 4))
        assert P[0].tolist() == [0, 1, 0, 0] and P[3].tolist() == [1, 0, 0, 0]

    def test_b31_shape(self):
        B = paper_catalog("B_31")
        assert B.lift().shape == (93, 155)
        assert str(B[0, 0]) == "x"

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6).flatmap(lambda L: st.tuples(st.just(L), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))).flatmap(
        lambda d: st.tuples(ring_matrices(d[0], shape=(d[1], d[2])), ring_matrices(d[0], shape=(d[2], d[3])),
                            ring_matrices(d[0], shape=(d[1], d[2])))))
    def test_homomorphism(self, mats):
        A, B, C = mats
        assert np.array_equal(lift(A @ B), gf2.matmul(lift(A), lift(B)))
        assert np.array_equal(lift(A + C), lift(A) ^ lift(C))
        assert np.array_equal(lift(A.conj_t()), lift(A).T)
        assert conjugate_transpose(conjugate_transpose(A)) == A

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda L: st.tuples(ring_matrices(L, 2), ring_matrices(L, 2))))
    def test_kron_lift(self, mats):
        A, B = mats
        K = A.kron(B)
        assert K.shape == (A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
        if A.L == 1:
            assert np.array_equal(lift(K), gf2.kron(lift(A), lift(B)))

    def test_matmul_shape_check(self):
        with pytest.raises(RingError):
            ring_matmul(RingMatrix.identity(2, 3), RingMatrix.identity(3, 3))


class TestCatalog:
    def test_names(self):
        assert {"H10_5", "H_hamming", "A_27", "GA_27", "B_31", "GB_31"} <= set(CATALOG_NAMES)
        with pytest.raises(KeyError):
            paper_catalog("nope")

    def test_h10(self):
        H = paper_catalog("H10_5")
        assert H.shape == (5, 10) and (H.sum(axis=1) == 4).all()
        assert generator_from_parity(H).k == 6

    def test_gb31_all_ones_rows(self):
        G = paper_catalog("GB_31")
        assert G.shape == (6, 5)
        assert G.coeffs[2, 0].all() and G.coeffs[2, 1].all() and not G.coeffs[2, 2].any()

    @pytest.mark.parametrize("a,g", [("B_L2", "GB_L2"), ("A_27", "GA_27"), ("B_31", "GB_31")])
    def test_pairs_orthogonal(self, a, g):
        A, G = paper_catalog(a), paper_catalog(g)
        if CATALOG_CONVENTIONS.get(g) == "transpose":
            assert (A @ G.conj_t()).is_zero() is False
            G = RingMatrix(np.roll(G.coeffs[:, :, ::-1], 1, axis=2))
        assert (A @ G.conj_t()).is_zero()


class TestClassical:
    def test_validation(self):
        H = paper_catalog("H_hamming")
        with pytest.raises(ValueError):
            ClassicalCode(H, np.ones((1, 7), np.uint8))
        with pytest.raises(ValueError):
            ClassicalCode(H, gf2.kernel(H)[:2])
        assert ClassicalCode(H, gf2.kernel(H)).k == 4


class TestProducts:
    def test_shp_hamming(self):
        spec = shp(generator_from_parity(paper_catalog("H_hamming")))
        assert spec.n == 49 and spec.check() == []
        assert spec.params().k == 16
        assert spec.stabilizer_weights() == {"X": [12, 16], "Z": [12, 16]}

    def test_shp_commutation(self):
        spec = shp(generator_from_parity(paper_catalog("H10_5")))
        G = spec.gauge_group()
        S = spec.stabilizer_candidates()
        assert not symplectic_gram(S, G).any()
        assert spec.gauge_weights() == {"X": [4], "Z": [4]}

    def test_slp_at_l1_is_shp(self):
        H = paper_catalog("H_hamming")
        code = generator_from_parity(H)
        a = shp(code)
        b = slp(RingMatrix.from_binary(code.H), RingMatrix.from_binary(code.G))
        for name in ("gx", "gz", "lx", "lz", "sx", "sz"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_slp_27(self):
        spec = slp(paper_catalog("A_27"), paper_catalog("GA_27"))
        assert spec.n == 27 and spec.params().k == 12
        assert max(spec.stabilizer_weights()["X"]) == 18
        assert spec.gauge_weights() == {"X": [6], "Z": [6]}

    def test_slp_rejects_non_orthogonal(self):
        with pytest.raises(RingOrthogonalityError, match="row 1"):
            slp(paper_catalog("B_31"), paper_catalog("GB_31"))
        with pytest.raises(RingError):
            slp(paper_catalog("A_27"), paper_catalog("GB_L2"))
        with pytest.raises(ValueError):
            slp(paper_catalog("A_27"), paper_catalog("GA_27"), convention="sideways")

    def test_seed_matches_spec(self):
        spec = slp(paper_catalog("A_27"), paper_catalog("GA_27"))
        T, rows = spec.seed()
        assert T.n == 27 and rows
        assert not symplectic_gram(T.logical_x, spec.gauge_group()).any()
        assert not symplectic_gram(T.logical_z, spec.gauge_group()).any()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda L: ring_matrices(L, 2)))
    def test_lp_is_valid_css(self, A):
        code = lp(A)
        m, n = A.shape
        assert code.n == A.L * (m * m + n * n)
        assert not gf2.matmul(code.hx, code.hz.T).any()


class TestFormats:
    def test_ring_round_trip(self):
        G = paper_catalog("GA_27")
        assert parse_ring_matrix(format_ring_matrix(G)) == G

    def test_ring_errors(self):
        with pytest.raises(MatrixFormatError):
            parse_ring_matrix("2 2")
        with pytest.raises(MatrixFormatError):
            parse_ring_matrix("1 2 3\n1")

    def test_qc_exponents(self):
        A = parse_qc_exponents("1 3 31\n1 -1 30\n")
        assert A.to_strings() == [["x", "0", "x^30"]]
        assert parse_qc_exponents("0 32", L=31).to_strings() == [["1", "x"]]
        with pytest.raises(MatrixFormatError):
            parse_qc_exponents("1 2\n")
