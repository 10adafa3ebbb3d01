import numpy as np
import pytest

from conftest import brute_force_switching_excess
from maxdet.bounds import conditional_bound, unconditional_bound
from maxdet.constructions import paley_one, paley_two, sylvester
from maxdet.linalg import PreconditionError, SignMatrix, det_exact, excess, is_hadamard
from maxdet.orders import build_registry
from maxdet.witnesses import (
    NoWitness,
    best_witness,
    excess_floor,
    maximize_excess,
    verify_block_identity,
    witness_double_border,
    witness_excess_border,
    witness_major,
    witness_minor,
)


class TestMinor:
    def test_h4(self, syl4):
        c = witness_minor(syl4, 3)
        assert c.det_abs == 4 and c.verified

    def test_h12(self):
        c = witness_minor(paley_one(11), 11)
        assert c.det_abs == 248832 and c.verified
        assert c.details["complement_det_abs"] == "1"

    def test_h8_d4(self, syl8):
        c = witness_minor(syl8, 4)
        assert c.verified and c.det_abs >= 8 and c.det_abs % 8 == 0

    def test_identity_holds_for_split(self):
        H = paley_two(5)
        c = witness_minor(H, 9)
        assert verify_block_identity(H, c.details["rows"], c.details["cols"])

    def test_pre(self, syl4):
        with pytest.raises(PreconditionError):
            witness_minor(syl4, 4)


class TestMajor:
    def test_examples(self):
        assert witness_major(sylvester(1), 3).det_abs == 4
        c = witness_major(sylvester(2), 6)
        assert c.det_abs == 64 and c.verified
        assert witness_major(SignMatrix([[1]]), 2).det_abs == 2

    @pytest.mark.parametrize("h,n", [(8, 9), (8, 11), (12, 14), (12, 20)])
    def test_exact_equality(self, h, n):
        H = build_registry(h).matrix(h)
        c = witness_major(H, n)
        assert c.verified
        assert c.det_abs ** 2 == 4 ** (n - h) * h ** h


class TestExcess:
    def test_exhaustive_oracle(self, syl4, syl8):
        assert brute_force_switching_excess(syl4) == 8
        assert brute_force_switching_excess(syl8) == 20
        assert excess(maximize_excess(syl4)) == 8
        assert excess(maximize_excess(syl8)) == 20

    def test_local_search_alone_h8(self, syl8):
        got = excess(maximize_excess(syl8, exhaustive_limit=0))
        assert got <= 20

    def test_paley12_exhaustive(self):
        H = paley_one(11)
        best = brute_force_switching_excess(H)
        assert excess(maximize_excess(H)) == best == 36

    def test_idempotent(self, syl8):
        S = maximize_excess(syl8)
        assert excess(maximize_excess(S)) == excess(S)

    @pytest.mark.parametrize("h", [12, 16, 20, 24, 28, 32, 48, 64])
    def test_preserves_hadamard_and_floor(self, h):
        H = build_registry(h).matrix(h)
        S = maximize_excess(H, seed=3)
        assert is_hadamard(S)
        assert excess(S) >= excess(H)
        assert excess(S) >= excess_floor(h)

    def test_deterministic(self):
        H = paley_one(19)
        a = maximize_excess(H, restarts=5, seed=7)
        b = maximize_excess(H, restarts=5, seed=7)
        assert a == b


class TestBorders:
    def test_order5(self, syl4):
        c = witness_excess_border(syl4)
        assert c.det_abs == 48 and c.verified and c.details["sigma_achieved"] == 8

    def test_order9(self, syl8):
        c = witness_excess_border(syl8)
        assert c.det_abs == 14336 and c.verified

    @pytest.mark.parametrize("h", [4, 8, 12, 20, 28])
    def test_rational_identity(self, h):
        H = build_registry(h).matrix(h)
        c = witness_excess_border(H)
        sigma = c.details["sigma_achieved"]
        assert c.det_abs ** 2 * h ** 2 == h ** h * (h + sigma) ** 2

    def test_double(self, syl4, syl8):
        assert witness_double_border(syl4).det_abs == 96
        c = witness_double_border(syl8)
        assert c.det_abs == 28672 and c.verified

    @pytest.mark.parametrize("h", [4, 12, 20])
    def test_double_is_twice(self, h):
        H = build_registry(h).matrix(h)
        assert witness_double_border(H).det_abs == 2 * witness_excess_border(H).det_abs

    def test_pre(self):
        with pytest.raises(PreconditionError):
            witness_excess_border(sylvester(1))


class TestBlockIdentity:
    def test_h4_corner(self, syl4):
        assert verify_block_identity(syl4, [0], [0])

    def test_h4_singular_pair(self, syl4):
        # rows {0,1} x cols {0,2} of Sylvester-4 is [[1,1],[1,1]]
        from maxdet.linalg import complementary_split
        D, A = complementary_split(syl4, [0, 1], [0, 2])
        assert det_exact(D) == 0 and det_exact(A) == 0
        assert verify_block_identity(syl4, [0, 1], [0, 2])

    def test_h12_random(self):
        rng = np.random.default_rng(1)
        H = paley_one(11)
        for _ in range(50):
            rows = rng.choice(12, 3, replace=False)
            cols = rng.choice(12, 3, replace=False)
            assert verify_block_identity(H, rows, cols)

    def test_non_hadamard_rejected(self):
        with pytest.raises(PreconditionError):
            verify_block_identity(SignMatrix(np.ones((4, 4))), [0], [0])


class TestBestWitness:
    def test_examples(self, registry64):
        assert best_witness(5, registry64).det_abs == 48
        assert best_witness(3, registry64).det_abs == 4
        c = best_witness(12, registry64)
        assert c.construction == "hadamard" and c.ln_R == pytest.approx(0, abs=1e-12)

    def test_beats_unconditional_constructive(self):
        reg = build_registry(208, "constructive")
        for n in range(1, 101):
            c = best_witness(n, reg, restarts=8)
            assert c.verified
            assert c.ln_det >= unconditional_bound(n, reg).ln_D - 1e-9

    def test_beats_conditional_when_excess_meets_floor(self, registry64):
        for n in range(3, 65):
            c = best_witness(n, registry64)
            cond = conditional_bound(n)
            if registry64.has_matrix(cond.extra["h"]):
                assert c.ln_det >= cond.ln_D - 1e-9, n

    def test_no_matrix(self):
        reg = build_registry(16, "constructive", exact_cap=0)
        with pytest.raises(NoWitness):
            best_witness(5, reg)

    def test_far_major_when_matrices_are_capped(self):
        reg = build_registry(700, "known-orders", exact_cap=8)
        c = best_witness(20, reg)
        assert c.construction.startswith("major") and c.verified

    def test_certificate_json(self, registry64):
        import json
        d = json.loads(best_witness(11, registry64).to_json())
        assert d["det_abs"] == "248832" and d["verified"] is True
        assert d["construction"] == "minor(h=12)"
