"""Finite state spaces and the Boolean algebra of their events.

An :class:`Event` is a subset of a :class:`StateSpace`, stored as an integer
bit mask with state ``i`` at bit ``i``. The algebra is always the full
powerset of the space; a coarser algebra on a finite space is the powerset of
its atoms, so nothing is lost by fixing it.

The canonical order of events is the order of their masks: ``enumerate_events``
lists ``∅`` first and ``Ω`` last, and operator tables are indexed the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple

from .errors import (
    DuplicateLabel,
    EmptyLabelList,
    SpaceMismatch,
    TooManyStates,
    UnknownLabel,
)

MAX_STATES = 24
MAX_ENUMERATED_STATES = 20


@dataclass(frozen=True)
class StateSpace:
    """An ordered, finite set of named states."""

    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise EmptyLabelList()
        if len(names) > MAX_STATES:
            raise TooManyStates(len(names), MAX_STATES)
        index = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise EmptyLabelList(f"state label at position {i} is empty or not text")
            if name in index:
                raise DuplicateLabel(name)
            index[name] = i
        object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    @property
    def omega(self) -> Event:
        return Event(self, self.full_mask)

    @property
    def empty(self) -> Event:
        return Event(self, 0)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def event(self, labels: Iterable[str] = ()) -> Event:
        return event_from_names(self, labels)

    def from_mask(self, mask: int) -> Event:
        if mask < 0 or mask > self.full_mask:
            raise ValueError(f"mask {mask} out of range for {self.n} states")
        return Event(self, mask)

    def labels_of(self, mask: int) -> list[str]:
        return [name for i, name in enumerate(self.names) if mask >> i & 1]

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"StateSpace({list(self.names)!r})"


@dataclass(frozen=True)
class Event:
    """An immutable subset of a state space.

    Set operators follow Python's ``set``: ``|`` union, ``&`` intersection,
    ``-`` relative difference, ``~`` complement in Ω, ``<=`` subset.
    """

    space: StateSpace
    mask: int

    def _same(self, other: Event) -> None:
        if not isinstance(other, Event):
            raise TypeError(f"expected Event, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise SpaceMismatch()

    @property
    def labels(self) -> list[str]:
        return self.space.labels_of(self.mask)

    @property
    def indices(self) -> list[int]:
        return [i for i in range(self.space.n) if self.mask >> i & 1]

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_omega(self) -> bool:
        return self.mask == self.space.full_mask

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.space.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask | other.mask)

    def __and__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask & other.mask)

    def __sub__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask & ~other.mask)

    def __invert__(self) -> Event:
        return Event(self.space, self.space.full_mask & ~self.mask)

    def __le__(self, other: Event) -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Event) -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: Event) -> bool:
        return other <= self

    def __gt__(self, other: Event) -> bool:
        return other < self

    def isdisjoint(self, other: Event) -> bool:
        self._same(other)
        return self.mask & other.mask == 0

    def __str__(self) -> str:
        return "{" + ",".join(self.labels) + "}"

    def __repr__(self) -> str:
        return f"Event({self})"


def make_space(labels: Iterable[str]) -> StateSpace:
    return StateSpace(tuple(labels))


def event_from_names(space: StateSpace, labels: Iterable[str]) -> Event:
    if isinstance(labels, str):
        raise TypeError("expected a list of labels, got a single string")
    mask = 0
    for label in labels:
        mask |= 1 << space.index(label)
    return Event(space, mask)


def parse_event_literal(space: StateSpace, text: str) -> Event:
    """Read ``{a,b}``, ``{}``, ``Omega`` or ``Empty``."""
    s = text.strip()
    if s in ("Omega", "Ω"):
        return space.omega
    if s in ("Empty", "∅"):
        return space.empty
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"not an event literal: {text!r}")
    body = s[1:-1].strip()
    if not body:
        return space.empty
    return event_from_names(space, [part.strip() for part in body.split(",")])


class SetOp(str, Enum):
    UNION = "union"
    INTERSECT = "intersect"
    DIFFERENCE = "difference"


def combine(e: Event, f: Event, op: SetOp | str) -> Event:
    op = SetOp(op)
    if op is SetOp.UNION:
        return e | f
    if op is SetOp.INTERSECT:
        return e & f
    return e - f


def complement(e: Event) -> Event:
    return ~e


class Relation(str, Enum):
    SUBSETEQ = "subseteq"
    PROPER_SUBSET = "proper_subset"
    EQUALS = "equals"
    DISJOINT = "disjoint"


class Verdict(NamedTuple):
    holds: bool
    witness: str | None = None


def _first_label(space: StateSpace, mask: int) -> str | None:
    if not mask:
        return None
    return space.names[(mask & -mask).bit_length() - 1]


def relate(e: Event, f: Event, rel: Relation | str) -> Verdict:
    """Decide a relation between two events.

    When the relation fails, ``witness`` names a state that shows it, if one
    exists: a member of ``e - f`` for the subset relations, of the symmetric
    difference for equality, of ``e & f`` for disjointness.
    """
    rel = Relation(rel)
    e._same(f)
    space = e.space
    if rel is Relation.SUBSETEQ:
        bad = e.mask & ~f.mask
        return Verdict(not bad, _first_label(space, bad))
    if rel is Relation.PROPER_SUBSET:
        bad = e.mask & ~f.mask
        if bad:
            return Verdict(False, _first_label(space, bad))
        return Verdict(e.mask != f.mask)
    if rel is Relation.EQUALS:
        bad = e.mask ^ f.mask
        return Verdict(not bad, _first_label(space, bad))
    bad = e.mask & f.mask
    return Verdict(not bad, _first_label(space, bad))


def enumerate_events(space: StateSpace) -> list[Event]:
    if space.n > MAX_ENUMERATED_STATES:
        raise TooManyStates(space.n, MAX_ENUMERATED_STATES, "event enumeration")
    return [Event(space, mask) for mask in range(1 << space.n)]


def iter_submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, from ``mask`` down to 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
