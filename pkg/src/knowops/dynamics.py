"""Staged learning: operators ``K0, K1, ...`` that only ever gain knowledge.

:func:`learn` builds the next stage as the smallest truthful, monotone
operator above ``K0`` that knows each learned fact. Every such operator
contains it pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import AxiomViolation, InvalidFact, SpaceMismatch, TooFewStages
from .events import Event, StateSpace
from .operator import Axiom, KnowledgeOperator, check_axiom


@dataclass(frozen=True)
class LearningFact:
    """The agent comes to know ``knowledge`` (a nonempty part of ``event``) given ``event``."""

    event: Event
    knowledge: Event

    def __post_init__(self):
        if self.event.space != self.knowledge.space:
            raise SpaceMismatch("fact event and knowledge are in different spaces")
        if self.knowledge.is_empty():
            raise InvalidFact(f"learned knowledge for {self.event} is empty")
        if not self.knowledge <= self.event:
            raise InvalidFact(f"learned knowledge {self.knowledge} is not inside {self.event}")

    @classmethod
    def whole(cls, event: Event) -> LearningFact:
        """Learn the event in full."""
        return cls(event, event)


def learn(k0: KnowledgeOperator, facts: Iterable[LearningFact]) -> KnowledgeOperator:
    """``K1 F = K0 F ∪ ⋃ {A : (E, A) a fact with E ⊆ F}``."""
    for axiom in (Axiom.TRUTH, Axiom.MONOTONICITY):
        report = check_axiom(k0, axiom)
        if not report.holds:
            raise AxiomViolation(f"stage operator violates {axiom.value}", report)
    pairs = []
    for fact in facts:
        if fact.event.space != k0.space:
            raise SpaceMismatch("fact is not in the operator's state space")
        pairs.append((fact.event.mask, fact.knowledge.mask))
    table = list(k0.table)
    for f in range(len(table)):
        for e, a in pairs:
            if e & ~f == 0:
                table[f] |= a
    return KnowledgeOperator(k0.space, tuple(table))


@dataclass(frozen=True)
class LearningScenario:
    """Stages ``K0, K1, ...`` with the facts learned between consecutive stages.

    Refinement between stages is not enforced here; see
    :func:`validate_refinement`.
    """

    space: StateSpace
    stages: tuple[KnowledgeOperator, ...]
    facts: tuple[tuple[LearningFact, ...], ...] = ()

    def __post_init__(self):
        for k in self.stages:
            if k.space != self.space:
                raise SpaceMismatch("stage operator belongs to another state space")

    @classmethod
    def build(
        cls, k0: KnowledgeOperator, transitions: Sequence[Sequence[LearningFact]]
    ) -> LearningScenario:
        """Fold :func:`learn` over one list of facts per transition."""
        stages = [k0]
        for facts in transitions:
            stages.append(learn(stages[-1], facts))
        return cls(k0.space, tuple(stages), tuple(tuple(f) for f in transitions))


@dataclass(frozen=True)
class RefinementReport:
    valid: bool
    # (stage s, event E, states in K_s E \ K_{s+1} E)
    witnesses: tuple[tuple[int, Event, Event], ...] = ()


def validate_refinement(
    scenario: LearningScenario | Sequence[KnowledgeOperator], cap: int = 10
) -> RefinementReport:
    stages = scenario.stages if isinstance(scenario, LearningScenario) else tuple(scenario)
    if len(stages) < 2:
        raise TooFewStages(len(stages))
    witnesses = []
    valid = True
    for s, (before, after) in enumerate(zip(stages, stages[1:])):
        if before.space != after.space:
            raise SpaceMismatch("stages belong to different state spaces")
        for e, (kb, ka) in enumerate(zip(before.table, after.table)):
            lost = kb & ~ka
            if lost:
                valid = False
                if len(witnesses) < cap:
                    space = before.space
                    witnesses.append((s, Event(space, e), Event(space, lost)))
    return RefinementReport(valid, tuple(witnesses))


@dataclass(frozen=True)
class SubClaim:
    name: str
    holds: bool


@dataclass(frozen=True)
class LearningReport:
    """Verdicts on the learning argument for one event and one pair of stages.

    The argument applies when ``E`` lies outside ``K0 Omega`` (so ``K0 E`` is
    empty) and ``K1 E`` is nonempty; otherwise ``applicable`` is false and
    only the traced events are filled in.
    """

    event: Event
    applicable: bool
    reason: str
    checks: tuple[SubClaim, ...]
    trace: dict[str, Event] = field(default_factory=dict)

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return all(c.holds for c in self.checks)


def verify_learning_claims(
    k0: KnowledgeOperator, k1: KnowledgeOperator, event: Event
) -> LearningReport:
    if k0.space != k1.space or event.space != k0.space:
        raise SpaceMismatch("stages and event must share a state space")
    space = k0.space
    t0, t1, full, e = k0.table, k1.table, space.full_mask, event.mask
    k0_omega = t0[full]
    not_k0_omega = full & ~k0_omega
    k1_omega = t1[full]
    not_k1_omega = full & ~k1_omega
    k1_not_k0_omega = t1[not_k0_omega]
    k1_not_k1_omega = t1[not_k1_omega]
    ev = lambda m: Event(space, m)  # noqa: E731
    trace = {
        "E": event,
        "K0 E": ev(t0[e]),
        "K1 E": ev(t1[e]),
        "E & K0 Omega": ev(e & k0_omega),
        "K0 Omega": ev(k0_omega),
        "~K0 Omega": ev(not_k0_omega),
        "K1 ~K0 Omega": ev(k1_not_k0_omega),
        "K1 Omega": ev(k1_omega),
        "~K1 Omega": ev(not_k1_omega),
        "K1 ~K1 Omega": ev(k1_not_k1_omega),
    }

    axioms_ok = all(
        k.satisfies(a) for k in (k0, k1) for a in (Axiom.TRUTH, Axiom.MONOTONICITY)
    )
    if not axioms_ok:
        return LearningReport(event, False, "a stage lacks Truth or Monotonicity", (), trace)
    if e & k0_omega:
        return LearningReport(event, False, "E meets K0 Omega, so E was not unknown at stage 0", (), trace)
    if not t1[e]:
        return LearningReport(event, False, "K1 E is empty: nothing about E was learned", (), trace)

    sub = lambda a, b: a & ~b == 0  # noqa: E731
    checks = (
        SubClaim("K0 E <= E", sub(t0[e], e)),
        SubClaim("K0 E <= K0 Omega", sub(t0[e], k0_omega)),
        SubClaim("K0 E <= E & K0 Omega", sub(t0[e], e & k0_omega)),
        SubClaim("empty(K0 E)", t0[e] == 0),
        SubClaim("~K0 E == Omega", full & ~t0[e] == full),
        SubClaim("~K0 E == ~E | ~K0 Omega", full & ~t0[e] == (full & ~e) | not_k0_omega),
        SubClaim("E <= ~K0 Omega", sub(e, not_k0_omega)),
        SubClaim("K0 E <= K1 E", sub(t0[e], t1[e])),
        SubClaim("K1 E <= K1 ~K0 Omega", sub(t1[e], k1_not_k0_omega)),
        SubClaim("nonempty(K1 ~K0 Omega)", k1_not_k0_omega != 0),
        SubClaim("K1 ~K0 Omega <= K1 Omega", sub(k1_not_k0_omega, k1_omega)),
        SubClaim("K1 ~K0 Omega <= K1 Omega & ~K0 Omega", sub(k1_not_k0_omega, k1_omega & not_k0_omega)),
        SubClaim("K1 K1 Omega <= K1 Omega", sub(t1[k1_omega], k1_omega)),
        SubClaim("empty(K1 ~K1 Omega)", k1_not_k1_omega == 0),
        SubClaim("K1 (K1 Omega | ~K1 Omega) == K1 Omega", t1[k1_omega | not_k1_omega] == k1_omega),
    )
    return LearningReport(event, True, "", checks, trace)
