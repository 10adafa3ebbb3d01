import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cofactor_det
from maxdet.linalg import (
    BinMatrix,
    MatrixFormatError,
    PreconditionError,
    SignMatrix,
    beta_inverse,
    beta_map,
    complementary_split,
    det_exact,
    excess,
    format_matrix,
    is_hadamard,
    nonsingular_complement,
    parse_matrix,
)


def sign_matrices(min_order=1, max_order=6):
    return st.integers(min_order, max_order).flatmap(
        lambda n: st.lists(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n), min_size=n, max_size=n)
    ).map(SignMatrix)


def bin_matrices(min_order=1, max_order=5):
    return st.integers(min_order, max_order).flatmap(
        lambda n: st.lists(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n), min_size=n, max_size=n)
    ).map(BinMatrix)


class TestTypes:
    def test_rejects_bad_entries(self):
        with pytest.raises(PreconditionError):
            SignMatrix([[1, 0], [1, 1]])
        with pytest.raises(PreconditionError):
            BinMatrix([[2]])

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            SignMatrix([[1, 1]])
        with pytest.raises(PreconditionError):
            SignMatrix(np.ones((0, 0)))

    def test_entries_are_read_only(self, syl4):
        with pytest.raises(ValueError):
            syl4.entries[0, 0] = -1


class TestDet:
    def test_examples(self, syl4):
        assert det_exact(SignMatrix([[1]])) == 1
        assert det_exact(SignMatrix([[1, 1], [1, -1]])) == -2
        assert abs(det_exact(syl4)) == 16

    def test_singular(self):
        assert det_exact(SignMatrix(np.ones((3, 3)))) == 0

    def test_needs_row_swap(self):
        assert det_exact(BinMatrix([[0, 1], [1, 0]])) == -1
        assert det_exact(BinMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])) == 1

    @settings(max_examples=200, deadline=None)
    @given(sign_matrices(max_order=5))
    def test_matches_cofactor_expansion(self, A):
        rows = A.entries.astype(int).tolist()
        assert det_exact(A) == cofactor_det(rows)

    @settings(max_examples=100, deadline=None)
    @given(bin_matrices())
    def test_matches_cofactor_expansion_binary(self, B):
        assert det_exact(B) == cofactor_det(B.entries.astype(int).tolist())

    @settings(max_examples=100, deadline=None)
    @given(sign_matrices(max_order=7))
    def test_divisible_by_power_of_two(self, A):
        assert det_exact(A) % 2 ** (A.order - 1) == 0

    def test_large_exact(self):
        from maxdet.constructions import sylvester
        H = sylvester(6)
        assert det_exact(H) ** 2 == 64 ** 64


class TestHadamard:
    def test_examples(self, syl4):
        assert is_hadamard(SignMatrix([[1]]))
        assert is_hadamard(syl4)
        assert not is_hadamard(SignMatrix(np.ones((3, 3))))

    def test_gram_by_hand(self, syl4):
        E = syl4.entries.astype(int)
        for i, j in itertools.product(range(4), repeat=2):
            assert sum(E[i, k] * E[j, k] for k in range(4)) == (4 if i == j else 0)


class TestBeta:
    def test_order_two(self):
        B = beta_map(SignMatrix([[1, 1], [1, -1]]))
        assert B == BinMatrix([[1]])

    def test_sylvester(self, syl4):
        B = beta_map(syl4)
        assert B.order == 3
        assert abs(det_exact(B)) == 2

    def test_equal_rows_singular(self):
        A = SignMatrix([[1, -1, 1], [1, -1, 1], [-1, 1, 1]])
        assert det_exact(beta_map(A)) == 0

    def test_needs_order_two(self):
        with pytest.raises(PreconditionError):
            beta_map(SignMatrix([[1]]))

    @settings(max_examples=200, deadline=None)
    @given(sign_matrices(min_order=2, max_order=7))
    def test_determinant_identity(self, A):
        assert abs(det_exact(A)) == 2 ** (A.order - 1) * abs(det_exact(beta_map(A)))

    def test_inverse_examples(self):
        assert abs(det_exact(beta_inverse(BinMatrix([[1]])))) == 2
        assert abs(det_exact(beta_inverse(BinMatrix(np.eye(3, dtype=int))))) == 8
        assert det_exact(beta_inverse(BinMatrix(np.zeros((2, 2), dtype=int)))) == 0

    @settings(max_examples=100, deadline=None)
    @given(bin_matrices())
    def test_round_trip(self, B):
        A = beta_inverse(B)
        assert abs(det_exact(A)) == 2 ** B.order * abs(det_exact(B))
        assert abs(det_exact(beta_map(A))) == abs(det_exact(B))


class TestExcess:
    def test_examples(self):
        assert excess(SignMatrix(np.ones((2, 2)))) == 4
        assert excess(SignMatrix([[1, 1], [1, -1]])) == 2

    def test_sylvester_switching_max(self, syl4):
        E = syl4.entries.astype(int)
        best = max(
            excess(SignMatrix(np.array(r)[:, None] * E * np.array(c)[None, :]))
            for r in itertools.product((1, -1), repeat=4)
            for c in itertools.product((1, -1), repeat=4)
        )
        assert best == 8


class TestSplit:
    def test_order_two(self):
        H = SignMatrix([[1, 1], [1, -1]])
        m, c = complementary_split(H, [0], [0])
        assert m == SignMatrix([[1]]) and c == SignMatrix([[-1]])

    def test_corner(self, syl4):
        m, c = complementary_split(syl4, [3], [3])
        assert m.order == 1 and c.order == 3
        assert abs(det_exact(c)) == 4

    def test_two_by_two_blocks_equal(self, syl4):
        m, c = complementary_split(syl4, [0, 1], [0, 1])
        assert abs(det_exact(m)) == abs(det_exact(c))

    def test_preserves_order(self, syl8):
        m, c = complementary_split(syl8, [5, 1], [2, 7])
        E = syl8.entries
        assert m == SignMatrix(E[np.ix_([1, 5], [2, 7])])
        assert c == SignMatrix(E[np.ix_([0, 2, 3, 4, 6, 7], [0, 1, 3, 4, 5, 6])])

    @pytest.mark.parametrize("rows,cols", [([0], [0, 1]), ([0, 0], [1, 2]), ([4], [0]), ([], []), ([0, 1, 2, 3], [0, 1, 2, 3])])
    def test_invalid(self, syl4, rows, cols):
        with pytest.raises(PreconditionError):
            complementary_split(syl4, rows, cols)


class TestNonsingularComplement:
    def test_d1(self, syl8):
        assert nonsingular_complement(syl8, 1) == ([0], [0])

    def test_d2_sylvester(self, syl4):
        rows, cols = nonsingular_complement(syl4, 2)
        m, _ = complementary_split(syl4, rows, cols)
        assert abs(det_exact(m)) == 2
        # every nonsingular 2x2 minor has |det| 2
        for r in itertools.combinations(range(4), 2):
            for c in itertools.combinations(range(4), 2):
                d = abs(det_exact(complementary_split(syl4, r, c)[0]))
                assert d in (0, 2)

    def test_d3_sylvester(self, syl4):
        rows, cols = nonsingular_complement(syl4, 3)
        assert abs(det_exact(complementary_split(syl4, rows, cols)[0])) == 4

    def test_all_sizes_nonsingular(self):
        from maxdet.constructions import paley_one
        H = paley_one(19)
        for d in range(1, 20):
            rows, cols = nonsingular_complement(H, d)
            assert det_exact(complementary_split(H, rows, cols)[0]) != 0

    def test_singular_rejected(self):
        with pytest.raises(PreconditionError):
            nonsingular_complement(SignMatrix(np.ones((4, 4))), 2)

    def test_bad_d(self, syl4):
        with pytest.raises(PreconditionError):
            nonsingular_complement(syl4, 4)


class TestTextFormat:
    def test_round_trip(self, syl8):
        assert parse_matrix(format_matrix(syl8)) == syl8
        B = BinMatrix(np.eye(3, dtype=int))
        assert parse_matrix(format_matrix(B)) == B

    def test_layout(self):
        assert format_matrix(SignMatrix([[1, 1], [1, -1]])) == "2\n++\n+-\n"

    @pytest.mark.parametrize("text", [
        "2\n++\n+\n",
        "2\n++\n",
        "x\n+\n",
        "2\n++\n+-\n++\n",
        "1\n*\n",
        "2\n+1\n-0\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(MatrixFormatError):
            parse_matrix(text)
