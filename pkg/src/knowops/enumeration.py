"""Exhaustive and sampled generation of knowledge operators.

Every operator decomposes by state: ``N(ω) = {E : ω ∈ KE}``. Truth holds
iff every member of ``N(ω)`` contains ``ω``, and Monotonicity holds iff each
``N(ω)`` is upward closed. So the operators with both axioms are exactly the
products of one upward-closed family per state over the ``n - 1`` other
states, generated here from antichains. There are ``D(n-1) ** n`` of them,
``D`` being the Dedekind numbers.

:func:`enumerate_filtered_tables` is the independent oracle: it walks every
total table and keeps the ones passing the requested axiom checks.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from operator import or_
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import TooManyStates
from .events import Event, StateSpace, iter_submasks
from .operator import (
    DEFAULT_CAP,
    TRUTH_AND_MONOTONICITY,
    Axiom,
    axiom_set,
    Claim,
    KnowledgeOperator,
    NeighborhoodSystem,
    check_axiom,
    claim_holds,
    from_neighborhoods,
    verify_claim,
)

# Monotone families (upward-closed, the empty family included) over a
# k-element set, k = 0, 1, 2, ...
DEDEKIND = (2, 3, 6, 20, 168, 7581, 7828354)

MAX_EXHAUSTIVE_STATES = 4
MAX_TABLE_FILTER_STATES = 2
MAX_TABLE_FILTER_OVERRIDE = 3
MAX_SAMPLED_STATES = 16

Check = Union[Claim, Axiom]


def default_space(n: int) -> StateSpace:
    """States named ``a``, ``b``, ``c``, ... (``s1``, ``s2``, ... past 26)."""
    if n <= 26:
        return StateSpace(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))
    return StateSpace(tuple(f"s{i + 1}" for i in range(n)))


def expected_tm_count(n: int) -> int:
    return DEDEKIND[n - 1] ** n


def antichains(base: int) -> Iterator[tuple[int, ...]]:
    """Every antichain of submasks of ``base``, each sorted ascending.

    Candidates are taken in increasing mask order; a later candidate is never
    a subset of an earlier one, so only "earlier ⊆ later" needs checking.
    """
    candidates = sorted(iter_submasks(base))

    def grow(start: int, chosen: tuple[int, ...]):
        yield chosen
        for pos in range(start, len(candidates)):
            c = candidates[pos]
            if any(a & ~c == 0 for a in chosen):
                continue
            yield from grow(pos + 1, chosen + (c,))

    yield from grow(0, ())


def upward_closure(antichain: Iterable[int], base: int) -> frozenset[int]:
    gens = tuple(antichain)
    return frozenset(s for s in iter_submasks(base) if any(g & ~s == 0 for g in gens))


def monotone_families(base: int) -> list[frozenset[int]]:
    """Upward-closed families of submasks of ``base``, one per antichain."""
    return [upward_closure(a, base) for a in antichains(base)]


def _state_columns(n: int, state: int) -> list[tuple[int, ...]]:
    """Each family for ``state`` as its contribution to an operator table."""
    bit = 1 << state
    others = ((1 << n) - 1) & ~bit
    columns = []
    for family in monotone_families(others):
        columns.append(
            tuple(bit if e & bit and (e & others) in family else 0 for e in range(1 << n))
        )
    return columns


def _check_exhaustive(n: int) -> None:
    if n < 1 or n > MAX_EXHAUSTIVE_STATES:
        raise TooManyStates(n, MAX_EXHAUSTIVE_STATES, "exhaustive enumeration")


def enumerate_tm_operators(
    n: int, *, space: StateSpace | None = None, part: tuple[int, int] | None = None
) -> Iterator[KnowledgeOperator]:
    """Every operator with Truth and Monotonicity on ``n`` states, once each.

    Order is the product order of per-state families with state 0 outermost.
    ``part=(i, parts)`` restricts to the ``i``-th of ``parts`` contiguous
    slices of state 0's families, for splitting work across processes.
    """
    _check_exhaustive(n)
    space = space or default_space(n)
    if space.n != n:
        raise ValueError(f"space has {space.n} states, expected {n}")
    columns = [_state_columns(n, i) for i in range(n)]
    if part is not None:
        i, parts = part
        first = columns[0]
        size = -(-len(first) // parts)
        columns[0] = first[i * size:(i + 1) * size]
    zero = (0,) * (1 << n)

    def fold(state: int, acc: tuple[int, ...]):
        if state == n:
            yield KnowledgeOperator(space, acc)
            return
        for col in columns[state]:
            yield from fold(state + 1, tuple(map(or_, acc, col)))

    yield from fold(0, zero)


def count_operators(n: int) -> int:
    """Count the Truth+Monotone operators on ``n`` states by streaming them."""
    return sum(1 for _ in enumerate_tm_operators(n))


# -- brute-force table filter ------------------------------------------------


def _table_digits(n: int, start: int, stop: int) -> np.ndarray:
    """Rows of images for tables ``start..stop-1``; event ``e`` is digit ``e``."""
    idx = np.arange(start, stop, dtype=np.int64)
    width, m = 1 << n, (1 << n) - 1
    shifts = np.arange(width, dtype=np.int64) * n
    return ((idx[:, None] >> shifts[None, :]) & m).astype(np.int64)


def _axiom_mask(digits: np.ndarray, n: int, axiom: Axiom) -> np.ndarray:
    """Vectorised pre-filter; each survivor is re-checked with check_axiom."""
    width, full = 1 << n, (1 << n) - 1
    events = np.arange(width, dtype=np.int64)
    if axiom is Axiom.TRUTH:
        return np.all(digits & ~events[None, :] == 0, axis=1)
    if axiom is Axiom.MONOTONICITY:
        ok = np.ones(len(digits), dtype=bool)
        for e in range(width):
            for i in range(n):
                if not e >> i & 1:
                    ok &= digits[:, e] & ~digits[:, e | 1 << i] == 0
        return ok
    if axiom is Axiom.NECESSITATION:
        return digits[:, full] == full
    if axiom is Axiom.POSITIVE_INTROSPECTION:
        kk = np.take_along_axis(digits, digits, axis=1)
        return np.all(digits & ~kk == 0, axis=1)
    if axiom is Axiom.NEGATIVE_INTROSPECTION:
        not_k = full & ~digits
        k_not_k = np.take_along_axis(digits, not_k, axis=1)
        return np.all(not_k & ~k_not_k == 0, axis=1)
    ok = np.ones(len(digits), dtype=bool)
    for e in range(width):
        for f in range(width):
            ok &= (digits[:, e] | digits[:, f]) & ~digits[:, e | f] == 0
    return ok


def enumerate_filtered_tables(
    n: int,
    axioms: Iterable[Axiom] = (),
    *,
    override: bool = False,
    space: StateSpace | None = None,
    chunk: int = 1 << 18,
) -> Iterator[KnowledgeOperator]:
    """Every total table on ``n`` states that passes ``check_axiom`` for ``axioms``.

    There are ``(2**n) ** (2**n)`` tables: 256 at ``n=2`` and about 16.8 million
    at ``n=3``, which needs ``override=True``.
    """
    limit = MAX_TABLE_FILTER_OVERRIDE if override else MAX_TABLE_FILTER_STATES
    if n < 1 or n > limit:
        raise TooManyStates(n, limit, "table filtering")
    axioms = sorted(axiom_set(axioms), key=lambda a: a.value)
    space = space or default_space(n)
    total = (1 << n) ** (1 << n)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        digits = _table_digits(n, start, stop)
        keep = np.ones(len(digits), dtype=bool)
        for axiom in axioms:
            keep &= _axiom_mask(digits, n, axiom)
        for row in digits[keep].tolist():
            k = KnowledgeOperator(space, tuple(row))
            if all(check_axiom(k, a, cap=1).holds for a in axioms):
                yield k


# -- sampling ------------------------------------------------------------------


def sample_neighborhoods(n: int, seed: int, space: StateSpace | None = None) -> NeighborhoodSystem:
    if n < 1 or n > MAX_SAMPLED_STATES:
        raise TooManyStates(n, MAX_SAMPLED_STATES, "sampling")
    space = space or default_space(n)
    rng = random.Random(seed)
    lists = []
    for i in range(n):
        bit = 1 << i
        drawn = {rng.getrandbits(n) | bit for _ in range(rng.randrange(4))}
        kept = [c for c in drawn if not any(d != c and d & ~c == 0 for d in drawn)]
        lists.append(tuple(Event(space, c) for c in kept))
    return NeighborhoodSystem(space, tuple(lists))


def sample_tm_operator(n: int, seed: int, space: StateSpace | None = None) -> KnowledgeOperator:
    """A random Truth+Monotone operator, fixed by ``(n, seed)``.

    Each state gets 0 to 3 candidate neighborhoods drawn uniformly from the
    events containing it; dominated candidates are dropped. This leans toward
    sparse operators.
    """
    return from_neighborhoods(sample_neighborhoods(n, seed, space))


# -- universal checks ------------------------------------------------------------


@dataclass
class Tally:
    """Per-check outcome counts over an operator space.

    ``passed``/``failed`` count operators meeting the check's hypotheses;
    ``not_applicable`` counts the rest, of which ``forced_failures`` still
    break the conclusion when it is evaluated anyway.
    """

    passed: int = 0
    failed: int = 0
    not_applicable: int = 0
    forced_failures: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.not_applicable

    @property
    def universal(self) -> bool:
        """No operator in the space breaks the conclusion."""
        return self.failed == 0 and self.forced_failures == 0

    def merge(self, other: Tally, cap: int) -> None:
        self.passed += other.passed
        self.failed += other.failed
        self.not_applicable += other.not_applicable
        self.forced_failures += other.forced_failures
        room = cap - len(self.counterexamples)
        if room > 0:
            self.counterexamples.extend(other.counterexamples[:room])


@dataclass(frozen=True)
class CounterexampleRecord:
    operator: KnowledgeOperator
    check: Check
    applicable: bool
    witnesses: tuple = ()
    trace: dict = field(default_factory=dict)


@dataclass
class EnumerationStats:
    n: int
    axioms: frozenset
    operators: int = 0
    source: str = ""
    results: dict = field(default_factory=dict)  # Check -> Tally

    def merge(self, other: EnumerationStats, cap: int = DEFAULT_CAP) -> None:
        self.operators += other.operators
        for check, tally in other.results.items():
            self.results.setdefault(check, Tally()).merge(tally, cap)

    @property
    def universal(self) -> bool:
        return all(t.universal for t in self.results.values())


def parse_check(text: str) -> Check:
    try:
        return Claim.parse(text)
    except ValueError:
        pass
    try:
        return Axiom.parse(text)
    except ValueError:
        raise ValueError(f"unknown claim or axiom {text!r}") from None


def _as_checks(checks: Check | str | Sequence[Check | str]) -> list[Check]:
    if isinstance(checks, (Claim, Axiom, str)):
        checks = [checks]
    return [c if isinstance(c, (Claim, Axiom)) else parse_check(c) for c in checks]


def _record(k: KnowledgeOperator, check: Check, applicable: bool, cap: int) -> CounterexampleRecord:
    if isinstance(check, Axiom):
        report = check_axiom(k, check, cap)
        return CounterexampleRecord(k, check, True, report.counterexamples)
    if check is Claim.REFINEMENT_CHAINS:
        hit = next(
            e for e in range(k.space.full_mask)
            if not claim_holds(k, check, e)
        )
        report = verify_claim(k, check, Event(k.space, hit), force=True, cap=cap)
    else:
        report = verify_claim(k, check, force=True, cap=cap)
    return CounterexampleRecord(k, check, applicable, report.witnesses, report.trace)


def tally_operators(
    operators: Iterable[KnowledgeOperator],
    checks: Sequence[Check],
    stats: EnumerationStats,
    cap: int = DEFAULT_CAP,
) -> EnumerationStats:
    tallies = [stats.results.setdefault(c, Tally()) for c in checks]
    for k in operators:
        stats.operators += 1
        for check, tally in zip(checks, tallies):
            if isinstance(check, Axiom):
                applicable, holds = True, k.satisfies(check)
            else:
                applicable = k.satisfies_all(check.requires)
                holds = claim_holds(k, check)
            if applicable:
                if holds:
                    tally.passed += 1
                else:
                    tally.failed += 1
            else:
                tally.not_applicable += 1
                if not holds:
                    tally.forced_failures += 1
            if not holds and len(tally.counterexamples) < cap:
                tally.counterexamples.append(_record(k, check, applicable, cap))
    return stats


def _tm_worker(args) -> EnumerationStats:
    n, checks, extra, part, cap = args
    stats = EnumerationStats(n, TRUTH_AND_MONOTONICITY | frozenset(extra))
    ops = enumerate_tm_operators(n, part=part)
    if extra:
        ops = (k for k in ops if k.satisfies_all(extra))
    return tally_operators(ops, checks, stats, cap)


def universal_check(
    n: int,
    checks: Check | str | Sequence[Check | str],
    axioms: str | Iterable[Axiom | str] = TRUTH_AND_MONOTONICITY,
    *,
    override: bool = False,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> EnumerationStats:
    """Run ``checks`` on every operator on ``n`` states satisfying ``axioms``.

    Spaces containing Truth and Monotonicity come from the neighborhood
    enumeration (``n <= 4``); any other axiom set falls back to filtering all
    tables (``n <= 2``, or 3 with ``override``). Conclusions are also
    evaluated where hypotheses fail, so dropped axioms surface as
    counterexamples.
    """
    checks = _as_checks(checks)
    axioms = axiom_set(axioms)
    if TRUTH_AND_MONOTONICITY <= axioms:
        _check_exhaustive(n)
        extra = tuple(sorted(axioms - TRUTH_AND_MONOTONICITY, key=lambda a: a.value))
        if workers > 1:
            jobs = [(n, checks, extra, (i, workers), cap) for i in range(workers)]
            stats = EnumerationStats(n, axioms, source="neighborhoods")
            for c in checks:
                stats.results[c] = Tally()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(_tm_worker, jobs):
                    stats.merge(part, cap)
            return stats
        stats = _tm_worker((n, checks, extra, None, cap))
        stats.axioms = axioms
        stats.source = "neighborhoods"
        return stats
    stats = EnumerationStats(n, axioms, source="tables")
    ops = enumerate_filtered_tables(n, axioms, override=override)
    return tally_operators(ops, checks, stats, cap)


def sampled_check(
    n: int,
    checks: Check | str | Sequence[Check | str],
    count: int,
    seed: int = 0,
    *,
    cap: int = DEFAULT_CAP,
) -> EnumerationStats:
    """Run ``checks`` on ``count`` sampled Truth+Monotone operators.

    Sample ``i`` uses seed ``seed + i``, so runs are reproducible.
    """
    checks = _as_checks(checks)
    space = default_space(n)
    stats = EnumerationStats(n, TRUTH_AND_MONOTONICITY, source=f"samples(seed={seed})")
    ops = (sample_tm_operator(n, seed + i, space) for i in range(count))
    return tally_operators(ops, checks, stats, cap)


__all__ = [
    "DEDEKIND",
    "CounterexampleRecord",
    "EnumerationStats",
    "Tally",
    "antichains",
    "count_operators",
    "default_space",
    "enumerate_filtered_tables",
    "enumerate_tm_operators",
    "expected_tm_count",
    "monotone_families",
    "parse_check",
    "sample_tm_operator",
    "sampled_check",
    "universal_check",
    "upward_closure",
]
