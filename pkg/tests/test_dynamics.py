import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowops.dynamics import (
    LearningFact,
    LearningScenario,
    learn,
    validate_refinement,
    verify_learning_claims,
)
from knowops.enumeration import default_space, sample_tm_operator
from knowops.errors import AxiomViolation, InvalidFact, TooFewStages
from knowops.events import Event, make_space
from knowops.fixtures import (
    ten_state_learning,
    three_state_learning,
    truthful_not_monotone,
)
from knowops.operator import Axiom, check_axiom, from_table, identity, trivial

import oracles

ABC = make_space(["a", "b", "c"])


def ev(*labels, space=ABC):
    return space.event(labels)


def test_learning_fixture_tables():
    k0, k1 = three_state_learning().stages
    # hand expansion: K1 F = {a} exactly when a is in F
    for m in range(8):
        f = ABC.from_mask(m)
        assert k1(f) == (ev("a") if "a" in f else ABC.empty)


def test_learning_fixture_claims():
    k0, k1 = three_state_learning().stages
    report = verify_learning_claims(k0, k1, ev("a"))
    assert report.applicable and report.holds
    assert report.trace["~K0 Omega"] == ABC.omega
    assert report.trace["K1 ~K0 Omega"] == ev("a")
    assert report.trace["K1 ~K1 Omega"] == ABC.empty
    assert report.trace["~K1 Omega"] == ev("b", "c")
    names = {c.name for c in report.checks}
    assert "K1 ~K0 Omega <= K1 Omega & ~K0 Omega" in names
    assert "empty(K1 ~K1 Omega)" in names


def test_ten_state_fixture():
    scenario = ten_state_learning()
    space = scenario.space
    k0, k1 = scenario.stages
    assert k1 == learn(k0, scenario.facts[0])
    report = verify_learning_claims(k0, k1, scenario.facts[0][0].event)
    assert report.holds
    assert report.trace["K1 ~K0 Omega"] == space.event(["s6", "s7", "s8"])
    assert report.trace["K0 Omega"] == space.event([f"s{i}" for i in range(1, 6)])


def test_not_applicable_cases():
    k0, k1 = three_state_learning().stages
    report = verify_learning_claims(k0, k1, ev("b"))
    assert not report.applicable and report.holds is None
    assert "K1 E is empty" in report.reason
    report = verify_learning_claims(identity(ABC), identity(ABC), ev("a"))
    assert not report.applicable and "K0 Omega" in report.reason
    k = truthful_not_monotone()
    report = verify_learning_claims(k, k, k.space.event(["a"]))
    assert not report.applicable


def test_learn_on_identity_changes_nothing():
    k = identity(ABC)
    assert learn(k, [LearningFact.whole(ev("a", "b"))]) == k
    assert learn(k, []) == k


def test_invalid_facts():
    with pytest.raises(InvalidFact):
        LearningFact(ev("a"), ABC.empty)
    with pytest.raises(InvalidFact):
        LearningFact(ev("a"), ev("a", "b"))
    with pytest.raises(AxiomViolation):
        k = truthful_not_monotone()
        learn(k, [LearningFact.whole(k.space.event(["a"]))])


def test_scenario_and_refinement():
    first = three_state_learning()
    scenario = LearningScenario.build(first.stages[0], [first.facts[0], [LearningFact.whole(ev("b", "c"))]])
    assert len(scenario.stages) == 3
    assert validate_refinement(scenario).valid
    backwards = validate_refinement([identity(ABC), trivial(ABC)])
    assert not backwards.valid
    s, e, lost = backwards.witnesses[0]
    assert s == 0 and e == ev("a") and lost == ev("a")
    with pytest.raises(TooFewStages):
        validate_refinement([identity(ABC)])


@st.composite
def learning_cases(draw):
    n = draw(st.integers(1, 6))
    k0 = sample_tm_operator(n, draw(st.integers(0, 10**6)))
    facts = []
    for _ in range(draw(st.integers(0, 3))):
        e = draw(st.integers(1, (1 << n) - 1))
        a = draw(st.integers(1, (1 << n) - 1)) & e or e
        facts.append(LearningFact(Event(k0.space, e), Event(k0.space, a)))
    return k0, facts


@settings(max_examples=500, deadline=None)
@given(learning_cases())
def test_learn_output_properties(case):
    k0, facts = case
    k1 = learn(k0, facts)
    assert check_axiom(k1, Axiom.TRUTH).holds
    assert check_axiom(k1, Axiom.MONOTONICITY).holds
    assert validate_refinement([k0, k1]).valid
    for fact in facts:
        assert fact.knowledge <= k1(fact.event)
    assert learn(k1, facts) == k1
    full = k1.space.full_mask
    assert k1.table[full & ~k1.table[full]] == 0


def _least_refinement_by_search(k0_dict, facts, candidates):
    """Among candidate operators above K0 that know each fact, the pointwise least (if one exists)."""
    above = [
        op for op in candidates
        if all(k0_dict[e] <= op[e] for e in op) and all(a <= op[e] for e, a in facts)
    ]
    least = [op for op in above if all(all(op[e] <= other[e] for e in op) for other in above)]
    return above, least


def assert_learn_is_least_refinement(n):
    """Compare ``learn`` with a search over every Truth+Monotone operator on ``n`` states."""
    space = default_space(n)
    states = space.names
    candidates = list(oracles.tm_operators(states))
    events = [e for e in oracles.powerset(states) if e]
    checked = 0
    for k0_dict in candidates:
        table = [0] * (1 << n)
        for e, ke in k0_dict.items():
            table[sum(1 << space.index(s) for s in e)] = sum(1 << space.index(s) for s in ke)
        k0 = from_table(space, table)
        for e in events:
            for a in (x for x in oracles.powerset(e) if x):
                facts = [(e, a)]
                above, least = _least_refinement_by_search(k0_dict, facts, candidates)
                k1 = oracles.as_dict(learn(k0, [LearningFact(space.event(sorted(e)), space.event(sorted(a)))]))
                assert k1 in above
                assert least == [k1]
                checked += 1
    assert checked > 0


@pytest.mark.parametrize("n", [2, 3])
def test_learn_is_the_least_refinement(n):
    assert_learn_is_least_refinement(n)
