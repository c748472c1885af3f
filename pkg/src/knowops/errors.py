"""Exception hierarchy.

Every error raised by the library derives from :class:`KnowOpsError`, so
callers (the CLI in particular) can catch one type and report it.
"""

from __future__ import annotations


class KnowOpsError(Exception):
    """Base class for all library errors."""


# -- state spaces and events ------------------------------------------------


class DuplicateLabel(KnowOpsError, ValueError):
    def __init__(self, label: str):
        super().__init__(f"duplicate state label {label!r}")
        self.label = label


class EmptyLabelList(KnowOpsError, ValueError):
    def __init__(self, detail: str = "state space needs at least one state"):
        super().__init__(detail)


class TooManyStates(KnowOpsError, ValueError):
    def __init__(self, n: int, limit: int, what: str = "state space"):
        super().__init__(f"{what}: {n} states exceeds the limit of {limit}")
        self.n = n
        self.limit = limit


class UnknownLabel(KnowOpsError, KeyError):
    def __init__(self, label: str):
        super().__init__(label)
        self.label = label

    def __str__(self) -> str:
        return f"unknown state label {self.label!r}"


class SpaceMismatch(KnowOpsError, ValueError):
    def __init__(self, detail: str = "events belong to different state spaces"):
        super().__init__(detail)


# -- operators ---------------------------------------------------------------


class WrongArity(KnowOpsError, ValueError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"operator table needs {expected} images, got {got}")
        self.expected = expected
        self.got = got


class InvariantViolation(KnowOpsError, ValueError):
    def __init__(self, detail: str, state: str | None = None, event=None):
        super().__init__(detail)
        self.state = state
        self.event = event


class AxiomViolation(KnowOpsError, ValueError):
    """An operator lacks an axiom an operation requires.

    ``report`` carries the failing :class:`~knowops.operator.AxiomReport`.
    """

    def __init__(self, detail: str, report=None):
        super().__init__(detail)
        self.report = report


class NotTruthful(AxiomViolation):
    pass


class NotMonotone(AxiomViolation):
    pass


class MissingParameter(KnowOpsError, ValueError):
    def __init__(self, name: str, claim: str):
        super().__init__(f"claim {claim!r} needs parameter {name!r}")
        self.name = name


class EIsOmega(KnowOpsError, ValueError):
    def __init__(self, claim: str):
        super().__init__(f"claim {claim!r} needs an event other than Omega")


class BadWord(KnowOpsError, ValueError):
    def __init__(self, word: str, position: int):
        super().__init__(
            f"bad introspection word {word!r}: unexpected {word[position]!r} at {position}"
        )
        self.position = position


# -- formulas ----------------------------------------------------------------


class LexError(KnowOpsError, ValueError):
    def __init__(self, text: str, position: int, detail: str = ""):
        msg = f"unexpected character at {position}"
        if position < len(text):
            msg = f"unexpected character {text[position]!r} at {position}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.position = position


class ParseError(KnowOpsError, ValueError):
    def __init__(self, position: int, expected, found: str = ""):
        self.position = position
        self.expected = tuple(expected)
        what = f"found {found!r}" if found else "found end of input"
        super().__init__(
            f"parse error at {position}: expected one of {', '.join(self.expected)}; {what}"
        )


class UnboundName(KnowOpsError, KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unbound event name {self.name!r}"


class UnknownStage(KnowOpsError, KeyError):
    def __init__(self, stage):
        super().__init__(stage)
        self.stage = stage

    def __str__(self) -> str:
        tag = "K" if self.stage is None else f"K{self.stage}"
        return f"model has no operator for {tag}"


# -- dynamics ----------------------------------------------------------------


class InvalidFact(KnowOpsError, ValueError):
    pass


class TooFewStages(KnowOpsError, ValueError):
    def __init__(self, got: int):
        super().__init__(f"need at least 2 stages, got {got}")


# -- model files ---------------------------------------------------------------


class ModelIOError(KnowOpsError, OSError):
    pass


class SchemaError(KnowOpsError, ValueError):
    def __init__(self, location: str, detail: str, source: str | None = None):
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{location}: {detail}")
        self.location = location
        self.source = source
