"""Knowledge operators, their axioms, and the claims they are checked against.

A :class:`KnowledgeOperator` is a total map from the events of a state space
to events, stored as a table of masks in canonical event order. No axiom is
assumed: every property is checked, so operators without Truth or
Monotonicity can be built and studied as counterexamples.

Claim verification is conditional. A claim whose hypotheses fail on an
operator is reported with ``applicable=False`` and left unevaluated, unless
``force=True`` asks for the conclusion to be computed anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import islice
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    BadWord,
    EIsOmega,
    InvariantViolation,
    MissingParameter,
    NotMonotone,
    NotTruthful,
    SpaceMismatch,
    WrongArity,
)
from .events import MAX_ENUMERATED_STATES, Event, StateSpace, iter_submasks

DEFAULT_CAP = 10


class Axiom(str, Enum):
    TRUTH = "truth"
    MONOTONICITY = "mono"
    NECESSITATION = "nec"
    POSITIVE_INTROSPECTION = "posintro"
    NEGATIVE_INTROSPECTION = "negintro"
    WEAK_ADDITIVITY = "weakadd"

    @classmethod
    def parse(cls, text: str) -> Axiom:
        key = text.strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        try:
            return _AXIOM_ALIASES[key]
        except KeyError:
            names = ", ".join(a.value for a in cls)
            raise ValueError(f"unknown axiom {text!r} (known: {names})") from None


_AXIOM_ALIASES = {
    "truth": Axiom.TRUTH,
    "t": Axiom.TRUTH,
    "mono": Axiom.MONOTONICITY,
    "monotonicity": Axiom.MONOTONICITY,
    "monotone": Axiom.MONOTONICITY,
    "m": Axiom.MONOTONICITY,
    "nec": Axiom.NECESSITATION,
    "necessitation": Axiom.NECESSITATION,
    "posintro": Axiom.POSITIVE_INTROSPECTION,
    "positiveintrospection": Axiom.POSITIVE_INTROSPECTION,
    "pi": Axiom.POSITIVE_INTROSPECTION,
    "negintro": Axiom.NEGATIVE_INTROSPECTION,
    "negativeintrospection": Axiom.NEGATIVE_INTROSPECTION,
    "ni": Axiom.NEGATIVE_INTROSPECTION,
    "weakadd": Axiom.WEAK_ADDITIVITY,
    "weakadditivity": Axiom.WEAK_ADDITIVITY,
    "wa": Axiom.WEAK_ADDITIVITY,
}

AxiomSet = frozenset  # of Axiom

TRUTH_AND_MONOTONICITY: frozenset = frozenset({Axiom.TRUTH, Axiom.MONOTONICITY})


def axiom_set(spec: str | Iterable[Axiom | str] = ()) -> frozenset:
    """Build a set of axioms from ``"truth,mono"`` or an iterable of names."""
    if isinstance(spec, str):
        spec = [part for part in spec.split(",") if part.strip()]
    return frozenset(a if isinstance(a, Axiom) else Axiom.parse(a) for a in spec)


@dataclass(frozen=True)
class KnowledgeOperator:
    """A total map ``E -> KE`` over all events of ``space``.

    ``table[m]`` is the mask of ``K`` applied to the event with mask ``m``.
    """

    space: StateSpace
    table: tuple[int, ...]

    def __post_init__(self):
        expected = 1 << self.space.n
        if len(self.table) != expected:
            raise WrongArity(expected, len(self.table))

    def __call__(self, event: Event) -> Event:
        return apply(self, event)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def k_omega(self) -> Event:
        return Event(self.space, self.table[self.space.full_mask])

    @cached_property
    def is_truthful(self) -> bool:
        return next(_truth_violations(self), None) is None

    @cached_property
    def is_monotone(self) -> bool:
        return next(_monotonicity_violations(self), None) is None

    def satisfies(self, axiom: Axiom) -> bool:
        if axiom is Axiom.TRUTH:
            return self.is_truthful
        if axiom is Axiom.MONOTONICITY:
            return self.is_monotone
        return next(_VIOLATIONS[axiom](self), None) is None

    def satisfies_all(self, axioms: Iterable[Axiom]) -> bool:
        return all(self.satisfies(a) for a in axioms)

    def images(self) -> list[Event]:
        return [Event(self.space, m) for m in self.table]

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{Event(self.space, e)}->{Event(self.space, k)}"
            for e, k in enumerate(self.table[:16])
        )
        more = ", ..." if len(self.table) > 16 else ""
        return f"KnowledgeOperator({pairs}{more})"


def apply(k: KnowledgeOperator, event: Event) -> Event:
    if event.space != k.space:
        raise SpaceMismatch("event is not in the operator's state space")
    return Event(k.space, k.table[event.mask])


def from_table(space: StateSpace, images: Sequence[Event | int]) -> KnowledgeOperator:
    """Operator whose image of the ``i``-th event (canonical order) is ``images[i]``."""
    if space.n > MAX_ENUMERATED_STATES:
        raise InvariantViolation(
            f"tables are limited to {MAX_ENUMERATED_STATES} states, got {space.n}"
        )
    expected = 1 << space.n
    if len(images) != expected:
        raise WrongArity(expected, len(images))
    table = []
    for image in images:
        if isinstance(image, Event):
            if image.space != space:
                raise SpaceMismatch("operator image belongs to another state space")
            table.append(image.mask)
        else:
            table.append(space.from_mask(int(image)).mask)
    return KnowledgeOperator(space, tuple(table))


def identity(space: StateSpace) -> KnowledgeOperator:
    return KnowledgeOperator(space, tuple(range(1 << space.n)))


def trivial(space: StateSpace) -> KnowledgeOperator:
    """The operator that knows nothing: ``KE = ∅`` for every ``E``."""
    return KnowledgeOperator(space, (0,) * (1 << space.n))


def constant(space: StateSpace, event: Event) -> KnowledgeOperator:
    return KnowledgeOperator(space, (event.mask,) * (1 << space.n))


# -- neighborhood systems ----------------------------------------------------


@dataclass(frozen=True)
class NeighborhoodSystem:
    """Per-state antichains of minimal neighborhoods.

    ``neighborhoods[i]`` lists the minimal events known at state ``i``;
    each contains state ``i`` and none contains another. Entries are kept in
    canonical event order so equal systems compare equal.
    """

    space: StateSpace
    neighborhoods: tuple[tuple[Event, ...], ...]

    def __post_init__(self):
        space = self.space
        if len(self.neighborhoods) != space.n:
            raise InvariantViolation(
                f"need a neighborhood list for each of {space.n} states, "
                f"got {len(self.neighborhoods)}"
            )
        normalized = []
        for i, nbhds in enumerate(self.neighborhoods):
            label = space.names[i]
            nbhds = tuple(sorted(nbhds, key=lambda e: e.mask))
            for e in nbhds:
                if e.space != space:
                    raise SpaceMismatch(f"neighborhood of {label!r} is in another space")
                if not e.mask >> i & 1:
                    raise InvariantViolation(
                        f"neighborhood {e} of state {label!r} does not contain it",
                        state=label,
                        event=e,
                    )
            for a, e in enumerate(nbhds):
                for f in nbhds[a + 1:]:
                    if e.mask & ~f.mask == 0 or f.mask & ~e.mask == 0:
                        raise InvariantViolation(
                            f"neighborhoods {e} and {f} of state {label!r} are nested",
                            state=label,
                            event=f,
                        )
            normalized.append(nbhds)
        object.__setattr__(self, "neighborhoods", tuple(normalized))

    @classmethod
    def from_mapping(
        cls, space: StateSpace, mapping: Mapping[str, Iterable[Event | Iterable[str]]]
    ) -> NeighborhoodSystem:
        """Build from ``{label: [event, ...]}``; missing labels get no neighborhoods."""
        for label in mapping:
            space.index(label)
        lists = []
        for label in space.names:
            events = []
            for e in mapping.get(label, ()):
                events.append(e if isinstance(e, Event) else space.event(e))
            lists.append(tuple(events))
        return cls(space, tuple(lists))

    def __getitem__(self, label: str) -> tuple[Event, ...]:
        return self.neighborhoods[self.space.index(label)]

    def as_mapping(self) -> dict[str, list[Event]]:
        return {label: list(n) for label, n in zip(self.space.names, self.neighborhoods)}


def from_neighborhoods(ns: NeighborhoodSystem) -> KnowledgeOperator:
    """``KE`` is the set of states having some neighborhood inside ``E``."""
    n = ns.space.n
    if n > MAX_ENUMERATED_STATES:
        raise InvariantViolation(
            f"tables are limited to {MAX_ENUMERATED_STATES} states, got {n}"
        )
    masks = np.arange(1 << n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=np.int64)
    for i, nbhds in enumerate(ns.neighborhoods):
        if not nbhds:
            continue
        hit = np.zeros(1 << n, dtype=bool)
        for e in nbhds:
            hit |= (masks & e.mask) == e.mask
        table |= hit.astype(np.int64) << i
    return KnowledgeOperator(ns.space, tuple(table.tolist()))


def to_neighborhoods(k: KnowledgeOperator) -> NeighborhoodSystem:
    """Minimal events known at each state; inverse of :func:`from_neighborhoods`."""
    if not k.is_truthful:
        raise NotTruthful("operator violates Truth", check_axiom(k, Axiom.TRUTH))
    if not k.is_monotone:
        raise NotMonotone("operator violates Monotonicity", check_axiom(k, Axiom.MONOTONICITY))
    space, table = k.space, k.table
    lists = []
    for i in range(space.n):
        bit = 1 << i
        known = [e for e in range(len(table)) if table[e] & bit]
        # upward closed, so E is minimal iff dropping any one other state loses it
        minimal = [
            e for e in known
            if all(not table[e & ~(1 << j)] & bit for j in range(space.n) if e >> j & 1 and j != i)
        ]
        lists.append(tuple(Event(space, e) for e in minimal))
    return NeighborhoodSystem(space, tuple(lists))


# -- axioms --------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    """Events at which a condition breaks, and the states where it does."""

    events: tuple[Event, ...]
    violation: Event
    note: str = ""

    def __str__(self) -> str:
        args = ", ".join(str(e) for e in self.events)
        note = f" [{self.note}]" if self.note else ""
        return f"({args}): {self.violation}{note}"


@dataclass(frozen=True)
class AxiomReport:
    axiom: Axiom
    holds: bool
    counterexamples: tuple[Counterexample, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


# Each generator yields (event masks, violating-state mask) lazily, in
# canonical order, so callers can stop at the first hit or at the cap.

def _truth_violations(k: KnowledgeOperator):
    for e, ke in enumerate(k.table):
        bad = ke & ~e
        if bad:
            yield (e,), bad


def _monotonicity_violations(k: KnowledgeOperator):
    """Covering pairs ``(E, E ∪ {ω})`` only.

    Any pair ``E ⊆ F`` is joined by a chain of covering steps, and subset
    inclusion of the images along the chain is transitive, so checking the
    ``n·2^(n-1)`` covering pairs is equivalent to checking all pairs.
    """
    table, n = k.table, k.space.n
    for e, ke in enumerate(table):
        for i in range(n):
            bit = 1 << i
            if e & bit:
                continue
            bad = ke & ~table[e | bit]
            if bad:
                yield (e, e | bit), bad


def _monotonicity_violations_naive(k: KnowledgeOperator):
    table = k.table
    for f, kf in enumerate(table):
        for e in iter_submasks(f):
            bad = table[e] & ~kf
            if bad:
                yield (e, f), bad


def _necessitation_violations(k: KnowledgeOperator):
    full = k.space.full_mask
    bad = full & ~k.table[full]
    if bad:
        yield (full,), bad


def _positive_introspection_violations(k: KnowledgeOperator):
    table = k.table
    for e, ke in enumerate(table):
        bad = ke & ~table[ke]
        if bad:
            yield (e,), bad


def _negative_introspection_violations(k: KnowledgeOperator):
    table, full = k.table, k.space.full_mask
    for e, ke in enumerate(table):
        not_ke = full & ~ke
        bad = not_ke & ~table[not_ke]
        if bad:
            yield (e,), bad


def _weak_additivity_violations(k: KnowledgeOperator):
    t = np.asarray(k.table, dtype=np.int64)
    idx = np.arange(len(t), dtype=np.int64)
    for e in range(len(t)):
        bad = (t[e] | t) & ~t[e | idx]
        for f in np.flatnonzero(bad).tolist():
            yield (e, f), int(bad[f])


_VIOLATIONS: dict[Axiom, Callable] = {
    Axiom.TRUTH: _truth_violations,
    Axiom.MONOTONICITY: _monotonicity_violations,
    Axiom.NECESSITATION: _necessitation_violations,
    Axiom.POSITIVE_INTROSPECTION: _positive_introspection_violations,
    Axiom.NEGATIVE_INTROSPECTION: _negative_introspection_violations,
    Axiom.WEAK_ADDITIVITY: _weak_additivity_violations,
}

_AXIOM_NOTES = {
    Axiom.TRUTH: "KE \\ E",
    Axiom.MONOTONICITY: "KE \\ KF with E ⊆ F",
    Axiom.NECESSITATION: "Omega \\ K Omega",
    Axiom.POSITIVE_INTROSPECTION: "KE \\ KKE",
    Axiom.NEGATIVE_INTROSPECTION: "~KE \\ K~KE",
    Axiom.WEAK_ADDITIVITY: "(KE | KF) \\ K(E | F)",
}


def _collect(k: KnowledgeOperator, hits, cap: int, note: str) -> tuple[Counterexample, ...]:
    cap = max(cap, 1)
    out = []
    for masks, bad in hits:
        out.append(
            Counterexample(
                tuple(Event(k.space, m) for m in masks), Event(k.space, bad), note
            )
        )
        if len(out) >= cap:
            break
    return tuple(out)


def check_axiom(k: KnowledgeOperator, axiom: Axiom | str, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Check one axiom over every event (or pair of events).

    ``counterexamples`` holds at most ``cap`` witnesses; the verdict itself
    always comes from the full scan.
    """
    axiom = axiom if isinstance(axiom, Axiom) else Axiom.parse(axiom)
    found = _collect(k, _VIOLATIONS[axiom](k), cap, _AXIOM_NOTES[axiom])
    return AxiomReport(axiom, not found, found)


def check_monotonicity_naive(k: KnowledgeOperator, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Monotonicity over all ``E ⊆ F`` pairs; the oracle for the covering-pair check."""
    found = _collect(
        k, _monotonicity_violations_naive(k), cap, _AXIOM_NOTES[Axiom.MONOTONICITY]
    )
    return AxiomReport(Axiom.MONOTONICITY, not found, found)


def check_axioms(
    k: KnowledgeOperator, axioms: Iterable[Axiom] = tuple(Axiom), cap: int = DEFAULT_CAP
) -> dict[Axiom, AxiomReport]:
    return {a: check_axiom(k, a, cap) for a in axioms}


# -- claims --------------------------------------------------------------------


class Claim(str, Enum):
    """Statements about a knowledge operator, checked event by event.

    OMEGA_COMPLEMENT
        ``~K Omega = Omega \\ K Omega``.
    LACK_INSIDE_ONLY_OMEGA
        ``~KE ⊆ E`` only for ``E = Omega`` (needs Truth).
    EMPTY_INTROSPECTION
        ``K ~K Omega = ∅`` (needs Truth and Monotonicity).
    REFINEMENT_CHAINS
        For ``E ≠ Omega``: ``K~E ⊆ ~E ⊆ ~KE``, ``~KE ⊄ E``,
        ``K~E ⊆ K~KE ⊆ ~KE`` (needs Truth and Monotonicity).
    KNOWLEDGE_BOUND
        ``KE ⊆ E ∩ K Omega`` (needs Truth and Monotonicity).
    MINIMAL_IGNORANCE
        ``~K Omega ⊆ ~KE`` (needs Monotonicity).
    INTROSPECTION_SAME
        ``K(K Omega ∪ ~K Omega) = K Omega``.
    KK_REFINES
        ``KK Omega ⊆ K Omega`` (needs Truth).
    """

    OMEGA_COMPLEMENT = "omega-complement"
    LACK_INSIDE_ONLY_OMEGA = "lack-inside-only-omega"
    EMPTY_INTROSPECTION = "empty-introspection"
    REFINEMENT_CHAINS = "refinement-chains"
    KNOWLEDGE_BOUND = "knowledge-bound"
    MINIMAL_IGNORANCE = "minimal-ignorance"
    INTROSPECTION_SAME = "introspection-same"
    KK_REFINES = "kk-refines"

    @classmethod
    def parse(cls, text: str) -> Claim:
        key = text.strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            pass
        try:
            return _CLAIM_ALIASES[key.replace("-", "")]
        except KeyError:
            names = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown claim {text!r} (known: {names})") from None

    @property
    def requires(self) -> frozenset:
        return _CLAIM_REQUIRES[self]


_CLAIM_ALIASES = {
    "remark1": Claim.OMEGA_COMPLEMENT,
    "thm2": Claim.LACK_INSIDE_ONLY_OMEGA,
    "thm3": Claim.EMPTY_INTROSPECTION,
    "eq1": Claim.REFINEMENT_CHAINS,
    "kbound": Claim.KNOWLEDGE_BOUND,
    "negkomegamin": Claim.MINIMAL_IGNORANCE,
    "negkomega": Claim.MINIMAL_IGNORANCE,
    "introspectionsame": Claim.INTROSPECTION_SAME,
    "kkrefines": Claim.KK_REFINES,
}

_CLAIM_REQUIRES = {
    Claim.OMEGA_COMPLEMENT: frozenset(),
    Claim.LACK_INSIDE_ONLY_OMEGA: frozenset({Axiom.TRUTH}),
    Claim.EMPTY_INTROSPECTION: TRUTH_AND_MONOTONICITY,
    Claim.REFINEMENT_CHAINS: TRUTH_AND_MONOTONICITY,
    Claim.KNOWLEDGE_BOUND: TRUTH_AND_MONOTONICITY,
    Claim.MINIMAL_IGNORANCE: frozenset({Axiom.MONOTONICITY}),
    Claim.INTROSPECTION_SAME: frozenset(),
    Claim.KK_REFINES: frozenset({Axiom.TRUTH}),
}


@dataclass(frozen=True)
class ClaimReport:
    """Outcome of checking one claim on one operator.

    ``holds`` is ``None`` when the claim's hypotheses fail and evaluation
    was not forced. ``trace`` maps formula text (``"K ~K Omega"``) to the
    intermediate events computed along the way.
    """

    claim: Claim
    applicable: bool
    holds: bool | None
    witnesses: tuple[Counterexample, ...] = ()
    trace: dict[str, Event] = field(default_factory=dict)
    missing: tuple[Axiom, ...] = ()
    forced: bool = False


def _omega_complement_hits(table, full, e):
    k_omega = table[full]
    neg = full & ~k_omega
    # ~KE = ~E | (E \ KE), taken at E = Omega where ~E is empty
    rel = 0 | (full & ~k_omega)
    if neg != rel:
        yield (full,), neg ^ rel, "~K Omega != Omega \\ K Omega"


def _lack_inside_hits(table, full, e):
    events = range(len(table)) if e is None else (e,)
    for ev in events:
        not_ke = full & ~table[ev]
        if not_ke & ~ev == 0 and ev != full:
            yield (ev,), full & ~ev, "~KE ⊆ E but E != Omega"


def _empty_introspection_hits(table, full, e):
    k_omega = table[full]
    kk = table[full & ~k_omega]
    if kk:
        yield (full & ~k_omega,), kk, "K ~K Omega != {}"


def _chain_hits(table, full, e):
    not_e = full & ~e
    ke = table[e]
    not_ke = full & ~ke
    k_not_e = table[not_e]
    k_not_ke = table[not_ke]
    if k_not_e & ~not_e:
        yield (e,), k_not_e & ~not_e, "K~E ⊆ ~E"
    if not_e & ~not_ke:
        yield (e,), not_e & ~not_ke, "~E ⊆ ~KE"
    if not_ke & ~e == 0:
        yield (e,), not_ke, "~KE ⊄ E"
    if k_not_e & ~k_not_ke:
        yield (e,), k_not_e & ~k_not_ke, "K~E ⊆ K~KE"
    if k_not_ke & ~not_ke:
        yield (e,), k_not_ke & ~not_ke, "K~KE ⊆ ~KE"


def _refinement_chain_hits(table, full, e):
    events = range(full) if e is None else (e,)
    for ev in events:
        yield from _chain_hits(table, full, ev)


def _knowledge_bound_hits(table, full, e):
    k_omega = table[full]
    events = range(len(table)) if e is None else (e,)
    for ev in events:
        bad = table[ev] & ~(ev & k_omega)
        if bad:
            yield (ev,), bad, "KE ⊆ E & K Omega"


def _minimal_ignorance_hits(table, full, e):
    not_k_omega = full & ~table[full]
    events = range(len(table)) if e is None else (e,)
    for ev in events:
        bad = not_k_omega & table[ev]
        if bad:
            yield (ev,), bad, "~K Omega ⊆ ~KE"


def _introspection_same_hits(table, full, e):
    k_omega = table[full]
    union = k_omega | (full & ~k_omega)
    diff = table[union] ^ k_omega
    if diff:
        yield (union,), diff, "K(K Omega | ~K Omega) = K Omega"


def _kk_refines_hits(table, full, e):
    k_omega = table[full]
    bad = table[k_omega] & ~k_omega
    if bad:
        yield (k_omega,), bad, "KK Omega ⊆ K Omega"


_CLAIM_HITS = {
    Claim.OMEGA_COMPLEMENT: _omega_complement_hits,
    Claim.LACK_INSIDE_ONLY_OMEGA: _lack_inside_hits,
    Claim.EMPTY_INTROSPECTION: _empty_introspection_hits,
    Claim.REFINEMENT_CHAINS: _refinement_chain_hits,
    Claim.KNOWLEDGE_BOUND: _knowledge_bound_hits,
    Claim.MINIMAL_IGNORANCE: _minimal_ignorance_hits,
    Claim.INTROSPECTION_SAME: _introspection_same_hits,
    Claim.KK_REFINES: _kk_refines_hits,
}


def claim_holds(k: KnowledgeOperator, claim: Claim, event: int | None = None) -> bool:
    """Evaluate a claim's conclusion on raw masks, ignoring its hypotheses."""
    return next(_CLAIM_HITS[claim](k.table, k.space.full_mask, event), None) is None


def _trace(k: KnowledgeOperator, claim: Claim, e: int | None) -> dict[str, Event]:
    space, table, full = k.space, k.table, k.space.full_mask
    ev = lambda m: Event(space, m)  # noqa: E731
    k_omega = table[full]
    trace = {"K Omega": ev(k_omega), "~K Omega": ev(full & ~k_omega)}
    if claim is Claim.OMEGA_COMPLEMENT:
        trace["Omega \\ K Omega"] = ev(full & ~k_omega)
    elif claim is Claim.EMPTY_INTROSPECTION:
        trace["K ~K Omega"] = ev(table[full & ~k_omega])
    elif claim is Claim.INTROSPECTION_SAME:
        trace["K Omega | ~K Omega"] = ev(full)
        trace["K (K Omega | ~K Omega)"] = ev(table[full])
    elif claim is Claim.KK_REFINES:
        trace["K K Omega"] = ev(table[k_omega])
    if e is not None:
        not_e, ke = full & ~e, table[e]
        trace["E"] = ev(e)
        trace["K E"] = ev(ke)
        trace["~K E"] = ev(full & ~ke)
        if claim is Claim.REFINEMENT_CHAINS:
            trace["~E"] = ev(not_e)
            trace["K ~E"] = ev(table[not_e])
            trace["K ~K E"] = ev(table[full & ~ke])
            trace["E \\ K E"] = ev(e & ~ke)
        elif claim is Claim.KNOWLEDGE_BOUND:
            trace["E & K Omega"] = ev(e & k_omega)
    return trace


def verify_claim(
    k: KnowledgeOperator,
    claim: Claim | str,
    event: Event | None = None,
    *,
    force: bool = False,
    cap: int = DEFAULT_CAP,
) -> ClaimReport:
    """Check ``claim`` on ``k``.

    Claims quantified over events check every event unless ``event`` is
    given. The chain claim needs an event other than Omega.
    """
    claim = claim if isinstance(claim, Claim) else Claim.parse(claim)
    e = None
    if event is not None:
        if event.space != k.space:
            raise SpaceMismatch("event is not in the operator's state space")
        e = event.mask
    if claim is Claim.REFINEMENT_CHAINS:
        if e is None:
            raise MissingParameter("E", claim.value)
        if e == k.space.full_mask:
            raise EIsOmega(claim.value)

    missing = tuple(a for a in sorted(claim.requires, key=lambda a: a.value) if not k.satisfies(a))
    applicable = not missing
    trace = _trace(k, claim, e)
    if not applicable and not force:
        return ClaimReport(claim, False, None, (), trace, missing, False)

    found = tuple(islice(iter_counterexamples(k, claim, event), max(cap, 1)))
    return ClaimReport(claim, applicable, not found, tuple(found), trace, missing, force)


def introspect(k: KnowledgeOperator, event: Event, word: str) -> Event:
    """Apply a word over ``K`` and ``~`` to ``event``, rightmost letter first.

    ``introspect(k, E, "K~K")`` is ``K(~(K E))``.
    """
    for pos, ch in enumerate(word):
        if ch not in "K~":
            raise BadWord(word, pos)
    if event.space != k.space:
        raise SpaceMismatch("event is not in the operator's state space")
    mask, full = event.mask, k.space.full_mask
    for ch in reversed(word):
        mask = k.table[mask] if ch == "K" else full & ~mask
    return Event(k.space, mask)


def iter_counterexamples(
    k: KnowledgeOperator, claim: Claim, event: Event | None = None
) -> Iterator[Counterexample]:
    e = None if event is None else event.mask
    for masks, bad, note in _CLAIM_HITS[claim](k.table, k.space.full_mask, e):
        yield Counterexample(tuple(Event(k.space, m) for m in masks), Event(k.space, bad), note)
