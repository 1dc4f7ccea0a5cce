from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlrc import bounds, tanner
from qlrc.bounds import BoundKind, BoundParams, ExactConditionViolated, InapplicableParams

from conftest import local_exact_sets

HAMMING = BoundParams(n=7, d=3, r=3, t=4, s=1)


def first_in_some_set(sets, order) -> bool:
    rank = {x: i for i, x in enumerate(order)}
    return any(all(rank[i] > rank[0] for i in g if i != 0) for g in sets)


class TestUnionSizes:
    def test_hamming_unions_brute_force(self, hamming_graph):
        F = tanner.recovery_family(hamming_graph)
        for j in range(7):
            for L in range(1, 5):
                for chosen in combinations(F.gamma[j], L):
                    assert len(frozenset().union(*chosen)) == bounds.n_exact(3, L, 1)
        assert bounds.n_exact(3, 4, 1) == 7

    @pytest.mark.parametrize("r,s", [(1, 1), (3, 1), (5, 2), (7, 3)])
    def test_single_set(self, r, s):
        assert bounds.union_size_bounds(r, 1, s) == (r + 1, r + 1, r + 1)

    def test_two_sets(self):
        assert bounds.union_size_bounds(3, 2, 1) == (6, 6, 7)

    def test_lower_needs_positive_s(self):
        with pytest.raises(ZeroDivisionError):
            bounds.n_lower(3, 2, 0)

    @pytest.mark.parametrize("r,t,s", [(3, 4, 1), (4, 3, 2), (6, 3, 3), (5, 2, 0)])
    def test_exact_union_of_synthetic_family(self, r, t, s):
        sets = local_exact_sets(r, t, s)
        for L in range(1, t + 1):
            assert len(frozenset().union(*sets[:L])) == bounds.n_exact(r, L, s)

    @given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
    def test_ordering(self, r, L, s):
        lo, _, hi = bounds.union_size_bounds(r, L, s)
        assert lo <= hi
        if r >= s * (L - 1):
            assert lo <= bounds.n_exact(r, L, s) <= hi


class TestProbabilities:
    def test_p1_values(self):
        assert bounds.p1(3, 1) == Fraction(1, 4)
        assert bounds.p1(3, 4) == Fraction(212, 455)

    def test_p1_nondecreasing_in_t(self):
        for r in range(1, 21):
            vals = [bounds.p1(r, t) for t in range(1, 21)]
            assert vals == sorted(vals)

    def test_p2_values(self):
        assert bounds.p2(3, 2, 1) == Fraction(1, 3)
        for r in range(1, 51):
            assert bounds.p2(r, 1, 1) == bounds.p1(r, 1) == Fraction(1, r + 1)

    def test_p2_best_prefix_dominates(self):
        for r in range(1, 8):
            for t in range(1, 8):
                for s in range(1, 4):
                    assert bounds.p2(r, t, s, best_prefix=True) >= bounds.p2(r, t, s)

    def test_pe_values(self):
        assert bounds.pe(3, 4, 1) == Fraction(1) - 1 + Fraction(4, 7) - Fraction(1, 7) == Fraction(3, 7)
        for r in range(1, 10):
            assert bounds.pe(r, 1, 0) == Fraction(1, r + 1)

    def test_pe_rejects_inexact_parameters(self):
        with pytest.raises(ExactConditionViolated):
            bounds.pe(2, 4, 1)

    def test_grid_properties(self):
        for r in range(1, 13):
            for t in range(1, 13):
                for s in range(0, 13):
                    if r >= s * (t - 1):
                        v = bounds.pe(r, t, s)
                        assert Fraction(1, r + 1) <= v <= 1
                    if s >= 1:
                        assert 0 < bounds.p2(r, t, s, best_prefix=True) <= 1
                assert 0 < bounds.p1(r, t) <= 1

    @pytest.mark.parametrize("r,t,s", [(3, 4, 1), (2, 3, 1), (4, 2, 2), (3, 3, 1), (4, 3, 2), (3, 2, 0)])
    def test_pe_matches_enumeration(self, r, t, s):
        sets = local_exact_sets(r, t, s)
        points = sorted(frozenset().union(*sets))
        hits = total = 0
        for order in permutations(points):
            total += 1
            hits += first_in_some_set(sets, order)
        assert Fraction(hits, total) == bounds.pe(r, t, s)

    def test_p2_is_a_lower_bound_on_general_families(self):
        """Sets with pairwise overlaps s+1 but a larger triple overlap stay above p2."""
        sets = [frozenset({0, 1, 2, 3}), frozenset({0, 1, 4, 5}), frozenset({0, 1, 6, 7})]
        points = sorted(frozenset().union(*sets))
        hits = sum(first_in_some_set(sets, o) for o in permutations(points))
        assert Fraction(hits, math.factorial(len(points))) >= bounds.p2(3, 3, 1)


class TestFTilde:
    def test_reduces_to_pe(self):
        assert bounds.f_tilde(7, 0, 3, 4, 1) == bounds.pe(3, 4, 1)

    def test_zero_availability(self):
        assert bounds.f_tilde(10, 2, 3, 0, 1) == 0

    def test_monte_carlo(self):
        n, d = 14, 2
        sets = local_exact_sets(3, 4, 1)
        rng = random.Random(5)
        trials = 200_000
        hits = 0
        for _ in range(trials):
            order = list(range(n))
            rng.shuffle(order)
            rank = {x: i for i, x in enumerate(order)}
            hits += any(
                all(rank[i] >= d for i in g) and all(rank[i] > rank[0] for i in g if i != 0) for g in sets
            )
        p = hits / trials
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(p - float(bounds.f_tilde(n, d, 3, 4, 1))) <= 3 * se


class TestN1:
    @pytest.mark.parametrize(
        "args,expected", [((12, 3, 3, 3), 2), ((7, 3, 3, 3), 1), ((4, 3, 3, 2), 0), ((7, 3, 3, 4), 1)]
    )
    def test_examples(self, args, expected):
        assert bounds.n1(*args) == expected

    def test_below_precondition(self):
        assert bounds.n1(3, 3, 2, 5) == 0

    def test_small_M_has_no_quadratic_term(self):
        assert bounds.n1(10, 3, 1, 1) == 1
        assert bounds.n1(10, 3, 1, 0) == 0

    def test_oracle_by_definition(self):
        for n in range(1, 25):
            for r in range(1, 5):
                for d in range(1, 6):
                    for M in range(0, n + 1):
                        if n < max(r + 1, d - 1):
                            expected = 0
                        else:
                            ok = [
                                N
                                for N in range(M + 1)
                                if N * (r + 1) * M * max(M - 1, 1)
                                - (N * (N - 1) * (M * (r + 1) - n) if M >= 2 else 0)
                                <= (n - (d - 1)) * M * max(M - 1, 1)
                            ]
                            expected = max(ok, default=0)
                        assert bounds.n1(n, r, d, M) == expected

    def test_floor_guarantee(self):
        for n in range(4, 40):
            for r in range(1, 5):
                for d in range(1, 5):
                    if n < max(r + 1, d - 1):
                        continue
                    for M in range(math.ceil(n / (r + 1)), n + 1):
                        assert bounds.n1(n, r, d, M) >= (n - (d - 1)) // (r + 1)


class TestCalN1:
    def test_single_set_reduces(self):
        for r in range(1, 5):
            for m in range(r + 1, 20):
                assert bounds.cal_n1(m, 0, r, 1, 0) == math.ceil(Fraction(m, r + 1))

    def test_hamming_oracle(self):
        best = 0
        for T in range(0, 5):
            if T == 0 or bounds.n_exact(3, T, 1) > 7:
                continue
            best = max(best, math.ceil(7 * bounds.f_tilde(7, 2, 3, T, 1)))
        assert bounds.cal_n1(7, 2, 3, 4, 1) == best

    def test_monotone_in_m(self):
        for r, t, s in [(3, 4, 1), (2, 2, 1), (5, 2, 2)]:
            for dm1 in range(0, 3):
                vals = [bounds.cal_n1(m, dm1, r, t, s) for m in range(1, 60)]
                assert vals == sorted(vals)

    def test_fewer_positions_than_grace(self):
        assert bounds.cal_n1(2, 3, 3, 4, 1) == 0


class TestEvaluate:
    @pytest.mark.parametrize(
        "kind,expected",
        [
            # 7 - 4 - floor(5/4) - floor((7 - 4 - 1)/4)
            ("gg23", 2),
            # pe = 3/7; 7 - ceil(3) - ceil(4 * 3/7)
            ("thm_pe", 2),
            # M1 = 2 + n1(7,3,3,3) = 3, M2 = 2 + n1(4,3,3,2) = 2
            ("thm_m1m2", 2),
            # ceil(7 * 212/455) = 4 and n1(7,3,3,4) = 1; 7 - 2 - 1
            ("thm_classical", 4),
            ("ghsy", 4),
            ("q_singleton", 3),
        ],
    )
    def test_hamming_values(self, kind, expected):
        assert bounds.evaluate_bound(kind, HAMMING) == expected

    def test_pe_bound_is_sound_for_quantum_hamming(self):
        assert bounds.evaluate_bound(BoundKind.THM_PE, HAMMING) >= 1

    def test_inapplicable(self):
        with pytest.raises(InapplicableParams):
            bounds.evaluate_bound("thm_pe", BoundParams(n=7, r=2, t=4, s=1))
        with pytest.raises(InapplicableParams):
            bounds.evaluate_bound("gg23", BoundParams(n=7, r=3))
        with pytest.raises(InapplicableParams):
            bounds.evaluate_bound("thm_classical", BoundParams(n=3, d=2, r=3, t=2))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            bounds.BoundKind.parse("nope")

    def test_floored_at_zero(self):
        assert bounds.evaluate_bound("q_singleton", BoundParams(n=3, d=5)) == 0

    @pytest.mark.parametrize("kind", ["ghsy", "btv"])
    def test_inversion_is_maximal(self, kind):
        for n in range(5, 40):
            for d in range(1, 6):
                for r in range(1, 4):
                    p = BoundParams(n=n, d=d, r=r, t=2)
                    k = bounds.evaluate_bound(kind, p)
                    if kind == "ghsy":
                        holds = lambda k: d <= n - k - math.ceil(k / r) + 2
                    else:
                        holds = lambda k: d <= n - sum((k - 1) // r**i for i in range(3))
                    assert holds(k)
                    assert k == n or not any(holds(x) for x in range(k + 1, n + 1))

    def test_m1m2_never_above_gg23(self):
        for d in range(1, 6):
            for n in range(8, 120):
                p = BoundParams(n=n, d=d, r=3, t=4, s=1)
                assert bounds.evaluate_bound("thm_m1m2", p) <= bounds.evaluate_bound("gg23", p)

    def test_m1m2_sizes_at_hamming(self):
        assert bounds.m1m2_sizes(7, 3, 3, 4, 1) == (3, 2)


class TestSweep:
    def test_rows_and_dominance(self):
        table = bounds.sweep(["thm_m1m2", "gg23"], BoundParams(n=8, d=3, r=3, t=4, s=1), "n", range(8, 101))
        assert len(table.rows) == 93
        assert all(a <= b for a, b in zip(table.column("thm_m1m2"), table.column("gg23")))

    def test_empty_kinds(self):
        table = bounds.sweep([], BoundParams(n=8), "n", range(8, 11))
        assert [cells for _, cells in table.rows] == [{}, {}, {}]
        assert table.to_csv() == "n\n8\n9\n10\n"

    def test_classical_dominates(self):
        table = bounds.sweep(["thm_classical", "ghsy", "btv"], BoundParams(n=10, d=5, r=3, t=3), "n", range(10, 201))
        for a, b, c in zip(*(table.column(k) for k in ("thm_classical", "ghsy", "btv"))):
            assert a <= min(b, c)

    def test_inapplicable_cells(self):
        table = bounds.sweep(["thm_pe", "gg23"], BoundParams(n=20, d=3, r=3, t=4, s=1), "r", range(1, 5))
        assert table.column("thm_pe")[:2] == [None, None]
        assert "NA" in table.to_csv()

    def test_csv_format(self):
        table = bounds.sweep(["gg23"], BoundParams(n=8, d=3, r=3), "n", [8, 9])
        assert table.to_csv() == "n,gg23\n8,3\n9,3\n"

    def test_errors(self):
        with pytest.raises(ValueError):
            bounds.sweep(["gg23"], BoundParams(n=8, d=3, r=3), "q", [1])
        with pytest.raises(ValueError):
            bounds.sweep(["gg23"], BoundParams(n=8, d=3, r=3), "n", [])

    def test_order_independent(self):
        p = BoundParams(n=8, d=3, r=3, t=4, s=1)
        forward = bounds.sweep(["thm_rts2"], p, "n", range(8, 40)).column("thm_rts2")
        backward = bounds.sweep(["thm_rts2"], p, "n", range(39, 7, -1)).column("thm_rts2")
        assert forward == backward[::-1]
