"""Finite-model workbench for set-theoretic knowledge operators."""

from .dynamics import (
    LearningFact,
    LearningScenario,
    learn,
    validate_refinement,
    verify_learning_claims,
)
from .enumeration import (
    count_operators,
    enumerate_filtered_tables,
    enumerate_tm_operators,
    sample_tm_operator,
    sampled_check,
    universal_check,
)
from .events import (
    Event,
    StateSpace,
    combine,
    complement,
    enumerate_events,
    event_from_names,
    make_space,
    relate,
)
from .formula import (
    Model,
    eval_assertion,
    eval_expr,
    format,
    parse_assertion,
    parse_expr,
)
from .operator import (
    Axiom,
    Claim,
    KnowledgeOperator,
    NeighborhoodSystem,
    apply,
    check_axiom,
    from_neighborhoods,
    from_table,
    introspect,
    to_neighborhoods,
    verify_claim,
)

__version__ = "0.1.0"
