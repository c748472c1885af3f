"""Acceptance criteria, one test each; the summary prints a PASS/FAIL line per test."""

import random
import time

from knowops.dynamics import verify_learning_claims
from knowops.enumeration import (
    default_space,
    enumerate_filtered_tables,
    enumerate_tm_operators,
    expected_tm_count,
    sampled_check,
    universal_check,
)
from knowops.fixtures import three_state_learning
from knowops.formula import parse_expr, format_expr
from knowops.operator import Axiom, Claim, constant, trivial, check_axiom

import oracles
from astgen import height, random_expr
from test_dynamics import assert_learn_is_least_refinement


def test_c1_empty_introspection_holds_for_every_truthful_monotone_operator():
    for n, count in [(2, 9), (3, 216), (4, 160_000)]:
        assert expected_tm_count(n) == count
        start = time.perf_counter()
        stats = universal_check(n, Claim.EMPTY_INTROSPECTION)
        elapsed = time.perf_counter() - start
        tally = stats.results[Claim.EMPTY_INTROSPECTION]
        assert stats.operators == count
        assert (tally.passed, tally.failed, tally.not_applicable) == (count, 0, 0)
        assert tally.counterexamples == []
        assert elapsed < {2: 1, 3: 1, 4: 60}[n], (n, elapsed)


def test_c2_lack_inside_only_at_omega_for_n_up_to_4():
    for n in range(1, 5):
        stats = universal_check(n, Claim.LACK_INSIDE_ONLY_OMEGA)
        tally = stats.results[Claim.LACK_INSIDE_ONLY_OMEGA]
        assert stats.operators == expected_tm_count(n)
        assert tally.failed == 0 and tally.passed == stats.operators


def test_c3_refinement_chains_for_every_proper_event_n_up_to_3():
    for n in range(1, 4):
        stats = universal_check(n, Claim.REFINEMENT_CHAINS)
        tally = stats.results[Claim.REFINEMENT_CHAINS]
        assert tally.failed == 0 and tally.passed == expected_tm_count(n)
        # same five relations through the frozenset oracle
        omega = frozenset(default_space(n).names)
        for k in enumerate_tm_operators(n):
            K = oracles.as_dict(k)
            for e in K:
                if e == omega:
                    continue
                ne, nke = omega - e, omega - K[e]
                assert K[ne] <= ne
                assert ne <= nke
                assert not nke <= e
                assert K[ne] <= K[nke]
                assert K[nke] <= nke


def test_c4_dropping_an_axiom_breaks_empty_introspection():
    stats = universal_check(2, Claim.EMPTY_INTROSPECTION, "truth", cap=100)
    tally = stats.results[Claim.EMPTY_INTROSPECTION]
    assert stats.operators == 16
    assert tally.forced_failures >= 1
    rec = next(r for r in tally.counterexamples if r.operator.table == (0, 0, 2, 1))
    assert rec.trace["K ~K Omega"].labels == ["b"]

    stats = universal_check(2, Claim.EMPTY_INTROSPECTION, "mono", cap=100)
    space = default_space(2)
    rec = next(
        r for r in stats.results[Claim.EMPTY_INTROSPECTION].counterexamples
        if r.operator == constant(space, space.omega)
    )
    assert rec.trace["K ~K Omega"] == space.omega


def test_c5_trivial_operator_lacks_necessitation():
    for n in range(1, 11):
        k = trivial(default_space(n))
        assert check_axiom(k, Axiom.TRUTH).holds
        assert check_axiom(k, Axiom.MONOTONICITY).holds
        assert not check_axiom(k, Axiom.NECESSITATION).holds


SIDE_CLAIMS = [
    Claim.KNOWLEDGE_BOUND,
    Claim.MINIMAL_IGNORANCE,
    Axiom.WEAK_ADDITIVITY,
    Claim.KK_REFINES,
    Claim.OMEGA_COMPLEMENT,
]


def test_c6_side_claims_exhaustive_and_sampled():
    for n in range(1, 4):
        stats = universal_check(n, SIDE_CLAIMS)
        for check in SIDE_CLAIMS:
            t = stats.results[check]
            assert t.failed == 0 and t.passed == expected_tm_count(n), check
    stats = sampled_check(8, SIDE_CLAIMS + [Claim.EMPTY_INTROSPECTION], 1000, seed=0)
    assert stats.operators == 1000
    for check, t in stats.results.items():
        assert t.passed == 1000 and t.failed == 0, check
    assert stats == sampled_check(8, SIDE_CLAIMS + [Claim.EMPTY_INTROSPECTION], 1000, seed=0)


def test_c7_learning_fixture_and_least_refinement():
    k0, k1 = three_state_learning().stages
    space = k0.space
    report = verify_learning_claims(k0, k1, space.event(["a"]))
    assert report.applicable and report.holds
    assert report.trace["K1 ~K0 Omega"] == space.event(["a"])
    assert report.trace["K1 ~K1 Omega"] == space.empty
    assert {c.name: c.holds for c in report.checks}["K1 ~K0 Omega <= K1 Omega & ~K0 Omega"]
    for n in (2, 3):
        assert_learn_is_least_refinement(n)


def test_c8_parser_precedence_and_round_trip():
    assert parse_expr(r"K E | ~F \ E") == parse_expr(r"(K E) | ((~F) \ E)")
    rng = random.Random(20240)
    deepest = 0
    for _ in range(10_000):
        tree = random_expr(rng, 6)
        deepest = max(deepest, height(tree))
        assert height(tree) <= 6
        assert parse_expr(format_expr(tree)) == tree
    assert deepest == 6


def test_c9_neighborhood_enumeration_equals_table_filter():
    for n, override in [(2, False), (3, True)]:
        enumerated = {k.table for k in enumerate_tm_operators(n)}
        filtered = {k.table for k in enumerate_filtered_tables(n, "truth,mono", override=override)}
        assert enumerated == filtered
        assert len(enumerated) == expected_tm_count(n)
