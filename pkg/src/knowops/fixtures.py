"""Small hand-built operators and learning instances used in tests and docs."""

from __future__ import annotations

from .dynamics import LearningFact, LearningScenario, learn
from .events import StateSpace
from .operator import (
    KnowledgeOperator,
    NeighborhoodSystem,
    constant,
    from_neighborhoods,
    from_table,
    trivial,
)


def two_states() -> StateSpace:
    return StateSpace(("a", "b"))


def half_knowing() -> KnowledgeOperator:
    """On ``{a, b}``: ``a`` has neighborhood ``{a}``, ``b`` has none, so ``K Omega = {a}``."""
    space = two_states()
    return from_neighborhoods(NeighborhoodSystem.from_mapping(space, {"a": [["a"]], "b": []}))


def truthful_not_monotone() -> KnowledgeOperator:
    """``∅->∅, {a}->∅, {b}->{b}, Omega->{a}``: Truth holds, Monotonicity fails at ``({b}, Omega)``.

    ``K ~K Omega = K{b} = {b}``, so emptiness of self-ignorance needs Monotonicity.
    """
    space = two_states()
    return from_table(space, [space.empty, space.empty, space.event(["b"]), space.event(["a"])])


def always_omega(space: StateSpace | None = None) -> KnowledgeOperator:
    """Monotone but not truthful: ``KE = Omega`` for every ``E``."""
    space = space or two_states()
    return constant(space, space.omega)


def three_state_learning() -> LearningScenario:
    """Stage 0 knows nothing on ``{a, b, c}``; the agent then learns ``{a}``."""
    space = StateSpace(("a", "b", "c"))
    k0 = trivial(space)
    fact = LearningFact(space.event(["a"]), space.event(["a"]))
    return LearningScenario.build(k0, [[fact]])


def ten_state_learning() -> LearningScenario:
    """A concrete instance of the two-stage picture, built here for illustration.

    States ``s1..s10``. Stage 0 knows each of ``s1..s5`` exactly, so
    ``K0 Omega = {s1..s5}``. The agent then learns the event ``{s6,s7,s8}``,
    which lies inside ``~K0 Omega``. Afterwards ``K1 Omega = {s1..s8}``,
    ``K1 ~K0 Omega = {s6,s7,s8}`` and ``~K1 Omega = {s9,s10}`` is still
    nonempty, while ``K1 ~K1 Omega`` is empty.
    """
    names = tuple(f"s{i}" for i in range(1, 11))
    space = StateSpace(names)
    k0 = from_neighborhoods(
        NeighborhoodSystem.from_mapping(space, {f"s{i}": [[f"s{i}"]] for i in range(1, 6)})
    )
    learned = space.event(["s6", "s7", "s8"])
    fact = LearningFact(learned, learned)
    return LearningScenario(space, (k0, learn(k0, [fact])), ((fact,),))
