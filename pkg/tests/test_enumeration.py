from itertools import product

import numpy as np
import pytest

from knowops.enumeration import (
    DEDEKIND,
    _axiom_mask,
    _table_digits,
    antichains,
    count_operators,
    default_space,
    enumerate_filtered_tables,
    enumerate_tm_operators,
    expected_tm_count,
    monotone_families,
    parse_check,
    sample_neighborhoods,
    sample_tm_operator,
    sampled_check,
    universal_check,
)
from knowops.errors import TooManyStates
from knowops.operator import Axiom, Claim, KnowledgeOperator, check_axiom, constant

import oracles


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_monotone_family_counts_match_brute_force(k):
    base = (1 << k) - 1
    ours = {frozenset(f) for f in monotone_families(base)}
    assert len(ours) == DEDEKIND[k]
    states = range(k)
    brute = {
        frozenset(sum(1 << i for i in s) for s in fam)
        for fam in oracles.upward_closed_families(states)
    }
    assert ours == brute


def test_antichains_are_antichains():
    for ac in antichains(0b1111):
        for x in ac:
            for y in ac:
                assert x == y or (x & ~y and y & ~x)
    assert sum(1 for _ in antichains(0b1111)) == DEDEKIND[4]


@pytest.mark.parametrize("n, count", [(1, 2), (2, 9), (3, 216)])
def test_operator_counts(n, count):
    assert expected_tm_count(n) == count
    assert count_operators(n) == count


def test_operator_count_four_states():
    assert expected_tm_count(4) == 160_000
    assert count_operators(4) == 160_000


def test_enumeration_has_no_duplicates_and_only_valid_operators():
    ops = list(enumerate_tm_operators(3))
    assert len({k.table for k in ops}) == 216
    assert all(k.is_truthful and k.is_monotone for k in ops)


def _dict_to_table(op, space):
    return tuple(
        sum(1 << space.index(s) for s in op[frozenset(space.from_mask(m).labels)])
        for m in range(1 << space.n)
    )


@pytest.mark.parametrize("n", [2, 3])
def test_enumeration_matches_family_oracle(n):
    space = default_space(n)
    brute = {_dict_to_table(op, space) for op in oracles.tm_operators(space.names)}
    assert {k.table for k in enumerate_tm_operators(n)} == brute


def test_table_filter_matches_enumeration_two_states():
    filtered = {k.table for k in enumerate_filtered_tables(2, "truth,mono")}
    assert filtered == {k.table for k in enumerate_tm_operators(2)}
    assert len(filtered) == 9


@pytest.mark.slow
def test_table_filter_matches_enumeration_three_states():
    filtered = {k.table for k in enumerate_filtered_tables(3, "truth,mono", override=True)}
    assert filtered == {k.table for k in enumerate_tm_operators(3)}


def test_table_filter_counts():
    assert sum(1 for _ in enumerate_filtered_tables(1)) == 4
    assert sum(1 for _ in enumerate_filtered_tables(2)) == 256
    assert sum(1 for _ in enumerate_filtered_tables(2, "truth")) == 16
    assert sum(1 for _ in enumerate_filtered_tables(2, "mono")) == 36
    with pytest.raises(TooManyStates):
        next(enumerate_filtered_tables(3, "truth"))
    with pytest.raises(TooManyStates):
        next(enumerate_filtered_tables(4, "truth", override=True))


@pytest.mark.parametrize("axiom", list(Axiom))
def test_vectorized_prefilter_agrees_with_checker(axiom):
    space = default_space(2)
    digits = _table_digits(2, 0, 256)
    assert digits.shape == (256, 4)
    assert len({tuple(r) for r in digits.tolist()}) == 256
    keep = _axiom_mask(digits, 2, axiom)
    for row, kept in zip(digits.tolist(), keep.tolist()):
        assert kept == check_axiom(KnowledgeOperator(space, tuple(row)), axiom).holds


def test_too_many_states():
    with pytest.raises(TooManyStates):
        next(enumerate_tm_operators(5))
    with pytest.raises(TooManyStates):
        universal_check(5, "thm3")


def test_sampling_is_deterministic():
    assert sample_neighborhoods(8, 7) == sample_neighborhoods(8, 7)
    assert sample_tm_operator(8, 7) == sample_tm_operator(8, 7)
    tables = {sample_tm_operator(8, s).table for s in range(50)}
    assert len(tables) > 40
    a = sampled_check(6, ["thm3", "kbound"], 30, seed=5)
    b = sampled_check(6, ["thm3", "kbound"], 30, seed=5)
    assert a == b


def test_sampled_operators_are_truthful_and_monotone():
    for seed in range(100):
        k = sample_tm_operator(6, seed)
        assert check_axiom(k, Axiom.TRUTH).holds
        assert check_axiom(k, Axiom.MONOTONICITY).holds


def test_parse_check():
    assert parse_check("thm3") is Claim.EMPTY_INTROSPECTION
    assert parse_check("weakadd") is Axiom.WEAK_ADDITIVITY
    with pytest.raises(ValueError):
        parse_check("bogus")


def test_universal_check_three_states():
    stats = universal_check(3, ["thm2", "thm3", "eq1", "nec"])
    assert stats.operators == 216
    assert stats.source == "neighborhoods"
    assert stats.results[Claim.EMPTY_INTROSPECTION].passed == 216
    assert stats.results[Claim.REFINEMENT_CHAINS].passed == 216
    nec = stats.results[Axiom.NECESSITATION]
    assert nec.failed > 0 and nec.passed + nec.failed == 216


def test_truth_only_counterexamples():
    stats = universal_check(2, "thm3", "truth")
    tally = stats.results[Claim.EMPTY_INTROSPECTION]
    assert stats.operators == 16 and stats.source == "tables"
    assert (tally.passed, tally.failed, tally.not_applicable, tally.forced_failures) == (9, 0, 7, 4)
    assert not tally.universal
    tables = [r.operator.table for r in tally.counterexamples]
    assert (0, 0, 2, 1) in tables


def test_monotone_only_constant_omega():
    stats = universal_check(2, "thm3", "mono", cap=100)
    tally = stats.results[Claim.EMPTY_INTROSPECTION]
    assert stats.operators == 36
    space = default_space(2)
    rec = next(r for r in tally.counterexamples if r.operator == constant(space, space.omega))
    assert rec.trace["K ~K Omega"] == space.omega
    assert not rec.applicable


def test_extra_axioms_narrow_the_space():
    stats = universal_check(3, "thm3", "truth,mono,nec")
    assert stats.operators == sum(
        1 for k in enumerate_tm_operators(3) if k.table[-1] == 7
    )
    assert stats.results[Claim.EMPTY_INTROSPECTION].universal


def test_workers_give_same_tallies():
    one = universal_check(3, ["thm3", "nec"], cap=0)
    two = universal_check(3, ["thm3", "nec"], cap=0, workers=2)
    for check in one.results:
        a, b = one.results[check], two.results[check]
        assert (a.passed, a.failed, a.not_applicable) == (b.passed, b.failed, b.not_applicable)
    assert one.operators == two.operators


def test_digits_cover_every_table_once_at_one_state():
    digits = _table_digits(1, 0, 4)
    assert sorted(map(tuple, digits.tolist())) == list(product(range(2), repeat=2))
    assert digits.dtype.kind in "iu" and isinstance(digits, np.ndarray)
