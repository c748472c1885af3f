"""JSON model and scenario files.

Model file::

    {
      "states": ["a", "b"],
      "events": {"E": ["a"], "F": "{b}"},
      "operator": {"table": [[], ["a"], [], ["a"]]},
      "operators": {"K0": {"neighborhoods": {"a": ["{a}"], "b": []}}},
      "assertions": ["empty(K ~K Omega)"]
    }

Events are written as label lists or as literals (``"{a,b}"``, ``"{}"``,
``"Omega"``). Tables list images in canonical event order. ``operator`` is
the bare ``K``; ``operators`` holds stage-tagged ones. Scenario files use the
same keys, with ``operator`` as stage 0, plus ``facts`` (one transition) or
``transitions`` (a list of fact lists). A fact is an event, or
``{"event": ..., "knowledge": ...}``; knowledge defaults to the whole event.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .dynamics import LearningFact, LearningScenario
from .errors import KnowOpsError, ModelIOError, SchemaError
from .events import Event, StateSpace, event_from_names, parse_event_literal
from .formula import Model
from .operator import (
    KnowledgeOperator,
    NeighborhoodSystem,
    from_neighborhoods,
    from_table,
    to_neighborhoods,
)

_STAGE_KEY = re.compile(r"K([0-9])?\Z")
_MODEL_KEYS = {"states", "events", "operator", "operators", "assertions", "description"}
_SCENARIO_KEYS = _MODEL_KEYS | {"facts", "transitions"}


class _Reader:
    """Validates a decoded JSON document, naming the failing location."""

    def __init__(self, source: str | None):
        self.source = source

    def error(self, where: str, detail: str) -> SchemaError:
        return SchemaError(where or "<root>", detail, self.source)

    def expect(self, value, kind, where: str, what: str):
        if not isinstance(value, kind) or (kind is list and isinstance(value, str)):
            raise self.error(where, f"expected {what}, got {type(value).__name__}")
        return value

    def space(self, doc: dict) -> StateSpace:
        if "states" not in doc:
            raise self.error("states", "missing")
        labels = self.expect(doc["states"], list, "states", "a list of state labels")
        for i, label in enumerate(labels):
            self.expect(label, str, f"states[{i}]", "a string")
        try:
            return StateSpace(tuple(labels))
        except KnowOpsError as exc:
            raise self.error("states", str(exc)) from exc

    def event(self, space: StateSpace, value, where: str) -> Event:
        try:
            if isinstance(value, str):
                return parse_event_literal(space, value)
            if isinstance(value, list) and all(isinstance(x, str) for x in value):
                return event_from_names(space, value)
        except (KnowOpsError, ValueError) as exc:
            raise self.error(where, str(exc)) from exc
        raise self.error(where, "expected an event: a list of state labels or a literal like \"{a,b}\"")

    def events(self, space: StateSpace, doc: dict) -> dict[str, Event]:
        raw = self.expect(doc.get("events", {}), dict, "events", "an object")
        return {name: self.event(space, v, f"events.{name}") for name, v in raw.items()}

    def operator(self, space: StateSpace, value, where: str) -> KnowledgeOperator:
        self.expect(value, dict, where, "an object with \"table\" or \"neighborhoods\"")
        if set(value) == {"table"}:
            rows = self.expect(value["table"], list, f"{where}.table", "a list of events")
            images = [self.event(space, r, f"{where}.table[{i}]") for i, r in enumerate(rows)]
            try:
                return from_table(space, images)
            except KnowOpsError as exc:
                raise self.error(f"{where}.table", str(exc)) from exc
        if set(value) == {"neighborhoods"}:
            raw = self.expect(value["neighborhoods"], dict, f"{where}.neighborhoods", "an object")
            mapping = {}
            for label, nbhds in raw.items():
                loc = f"{where}.neighborhoods.{label}"
                if label not in space.names:
                    raise self.error(loc, f"unknown state label {label!r}")
                self.expect(nbhds, list, loc, "a list of events")
                mapping[label] = [self.event(space, v, f"{loc}[{i}]") for i, v in enumerate(nbhds)]
            try:
                return from_neighborhoods(NeighborhoodSystem.from_mapping(space, mapping))
            except KnowOpsError as exc:
                raise self.error(f"{where}.neighborhoods", str(exc)) from exc
        raise self.error(where, "expected exactly one of \"table\" or \"neighborhoods\"")

    def operators(self, space: StateSpace, doc: dict) -> dict[int | None, KnowledgeOperator]:
        ops: dict[int | None, KnowledgeOperator] = {}
        if "operator" in doc:
            ops[None] = self.operator(space, doc["operator"], "operator")
        staged = self.expect(doc.get("operators", {}), dict, "operators", "an object")
        for tag, value in staged.items():
            m = _STAGE_KEY.match(tag)
            if not m:
                raise self.error(f"operators.{tag}", "stage tags are K or K0..K9")
            stage = None if m.group(1) is None else int(m.group(1))
            if stage in ops:
                raise self.error(f"operators.{tag}", "operator defined twice")
            ops[stage] = self.operator(space, value, f"operators.{tag}")
        return ops

    def assertions(self, doc: dict) -> tuple[str, ...]:
        raw = self.expect(doc.get("assertions", []), list, "assertions", "a list of strings")
        for i, a in enumerate(raw):
            self.expect(a, str, f"assertions[{i}]", "a string")
        return tuple(raw)

    def fact(self, space: StateSpace, value, where: str) -> LearningFact:
        if isinstance(value, dict):
            if "event" not in value or not set(value) <= {"event", "knowledge"}:
                raise self.error(where, "a fact has \"event\" and optional \"knowledge\"")
            event = self.event(space, value["event"], f"{where}.event")
            knowledge = event
            if "knowledge" in value:
                knowledge = self.event(space, value["knowledge"], f"{where}.knowledge")
        else:
            event = knowledge = self.event(space, value, where)
        try:
            return LearningFact(event, knowledge)
        except KnowOpsError as exc:
            raise self.error(where, str(exc)) from exc


def _decode(path: str | Path) -> tuple[dict, str]:
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelIOError(f"{source}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}", exc.msg, source) from exc
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "expected a JSON object", source)
    return doc, source


def _check_keys(reader: _Reader, doc: dict, allowed: set) -> None:
    for key in doc:
        if key not in allowed:
            raise reader.error(key, "unknown key")


def model_from_dict(doc: dict, source: str | None = None) -> Model:
    r = _Reader(source)
    _check_keys(r, doc, _MODEL_KEYS)
    space = r.space(doc)
    try:
        return Model(space, r.events(space, doc), r.operators(space, doc), r.assertions(doc))
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise r.error("events", str(exc)) from exc


def load_model(path: str | Path) -> Model:
    doc, source = _decode(path)
    return model_from_dict(doc, source)


@dataclass(frozen=True)
class ScenarioFile:
    scenario: LearningScenario
    model: Model


def scenario_from_dict(doc: dict, source: str | None = None) -> ScenarioFile:
    r = _Reader(source)
    _check_keys(r, doc, _SCENARIO_KEYS)
    space = r.space(doc)
    events = r.events(space, doc)
    if "operator" not in doc:
        raise r.error("operator", "missing stage-0 operator")
    if doc.get("operators"):
        raise r.error("operators", "scenario stages come from learning; give only \"operator\"")
    k0 = r.operator(space, doc["operator"], "operator")
    if "facts" in doc and "transitions" in doc:
        raise r.error("facts", "give either \"facts\" or \"transitions\", not both")
    if "transitions" in doc:
        raw = r.expect(doc["transitions"], list, "transitions", "a list of fact lists")
        transitions = [
            [r.fact(space, f, f"transitions[{t}][{i}]")
             for i, f in enumerate(r.expect(facts, list, f"transitions[{t}]", "a list of facts"))]
            for t, facts in enumerate(raw)
        ]
    else:
        raw = r.expect(doc.get("facts", []), list, "facts", "a list of facts")
        transitions = [[r.fact(space, f, f"facts[{i}]") for i, f in enumerate(raw)]]
    if len(transitions) > 9:
        raise r.error("transitions", "at most 9 transitions (stages K0..K9)")
    try:
        scenario = LearningScenario.build(k0, transitions)
    except KnowOpsError as exc:
        raise r.error("operator", str(exc)) from exc
    operators = dict(enumerate(scenario.stages))
    model = Model(space, events, operators, r.assertions(doc))
    return ScenarioFile(scenario, model)


def load_scenario(path: str | Path) -> ScenarioFile:
    doc, source = _decode(path)
    return scenario_from_dict(doc, source)


# -- writing ---------------------------------------------------------------------


def event_to_json(event: Event) -> list[str]:
    return event.labels


def operator_to_json(k: KnowledgeOperator, form: str = "table") -> dict[str, Any]:
    if form == "neighborhoods":
        ns = to_neighborhoods(k)
        return {
            "neighborhoods": {
                label: [event_to_json(e) for e in nbhds]
                for label, nbhds in ns.as_mapping().items()
            }
        }
    return {"table": [k.space.labels_of(m) for m in k.table]}


def model_to_dict(model: Model) -> dict[str, Any]:
    doc: dict[str, Any] = {"states": list(model.space.names)}
    if model.events:
        doc["events"] = {name: event_to_json(e) for name, e in model.events.items()}
    if None in model.operators:
        doc["operator"] = operator_to_json(model.operators[None])
    staged = {f"K{s}": operator_to_json(k) for s, k in sorted(
        ((s, k) for s, k in model.operators.items() if s is not None), key=lambda p: p[0])}
    if staged:
        doc["operators"] = staged
    if model.assertions:
        doc["assertions"] = list(model.assertions)
    return doc


def operator_model(k: KnowledgeOperator) -> dict[str, Any]:
    return {"states": list(k.space.names), "operator": operator_to_json(k)}
