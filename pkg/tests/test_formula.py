import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowops.errors import LexError, ParseError, UnboundName, UnknownStage
from knowops.events import make_space
from knowops.fixtures import half_knowing
from knowops.formula import (
    And,
    Assertion,
    Diff,
    EmptyLit,
    EventLit,
    EventName,
    Know,
    Model,
    Not,
    OmegaLit,
    Or,
    Rel,
    eval_assertion,
    eval_expr,
    format,
    format_expr,
    parse_assertion,
    parse_expr,
    tokenize,
)
from knowops.operator import identity, trivial

from astgen import NAMES, random_expr

E, F, G = EventName("E"), EventName("F"), EventName("G")
AB = make_space(["a", "b"])


def test_precedence_disambiguation():
    flat = parse_expr(r"K E | ~F \ E")
    explicit = parse_expr(r"(K E) | ((~F) \ E)")
    assert flat == explicit == Or(Know(E), Diff(Not(F), E))


def test_parse_examples():
    assert parse_expr("K ~K Omega") == Know(Not(Know(OmegaLit())))
    assert parse_expr("K1 ~K0 Omega") == Know(Not(Know(OmegaLit(), 0)), 1)
    assert parse_expr("E & F | G") == Or(And(E, F), G)
    assert parse_expr("E | F & G") == Or(E, And(F, G))
    assert parse_expr(r"E \ F \ G") == Diff(Diff(E, F), G)
    assert parse_expr(r"E & F \ G") == And(E, Diff(F, G))
    assert parse_expr("~~E") == Not(Not(E))
    assert parse_expr("KE") == EventName("KE")
    assert parse_expr("{a, b}") == EventLit(("a", "b"))
    assert parse_expr("{}") == EmptyLit()
    assert parse_expr("¬K Ω ∩ ∅") == And(Not(Know(OmegaLit())), EmptyLit())


def test_parse_assertions():
    assert parse_assertion("K E <= E") == Assertion(Rel.SUBSETEQ, (Know(E), E))
    assert parse_assertion("~K E !<= E") == Assertion(Rel.NOT_SUBSETEQ, (Not(Know(E)), E))
    assert parse_assertion("K ~E <= ~ K E") == Assertion(Rel.SUBSETEQ, (Know(Not(E)), Not(Know(E))))
    assert parse_assertion("K1 ~ K0 Omega <= Omega").operands[0] == Know(Not(Know(OmegaLit(), 0)), 1)
    assert parse_assertion("E ⊄ F").relation is Rel.NOT_SUBSETEQ
    assert parse_assertion("E < F").relation is Rel.PROPER_SUBSET
    assert parse_assertion("E == F").relation is Rel.EQUALS
    assert parse_assertion("empty(K ~K Omega)") == Assertion(Rel.EMPTY, (Know(Not(Know(OmegaLit()))),))
    assert parse_assertion("nonempty(E)").relation is Rel.NONEMPTY
    assert parse_assertion("disjoint(E, F | G)") == Assertion(Rel.DISJOINT, (E, Or(F, G)))
    with pytest.raises(ValueError):
        Assertion(Rel.EMPTY, (E, F))


def test_format_examples():
    assert format_expr(And(E, Or(F, G))) == "E & (F | G)"
    assert format_expr(Or(And(E, F), G)) == "E & F | G"
    assert format_expr(Diff(E, Diff(F, G))) == r"E \ (F \ G)"
    assert format_expr(Diff(Diff(E, F), G)) == r"E \ F \ G"
    assert format_expr(Know(Not(Know(OmegaLit())))) == "K ~K Omega"
    assert format_expr(Not(And(E, F))) == "~(E & F)"
    assert format_expr(Know(E, 1)) == "K1 E"
    assert format(parse_assertion("empty( K~K Omega )")) == "empty(K ~K Omega)"
    assert format(parse_assertion("disjoint(E,F)")) == "disjoint(E, F)"


def test_lex_errors():
    with pytest.raises(LexError) as info:
        tokenize("E # F")
    assert info.value.position == 2
    with pytest.raises(LexError):
        tokenize("{a, b")
    with pytest.raises(LexError):
        tokenize("{a,,b}")


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        parse_expr("E &")
    assert info.value.position == 3
    with pytest.raises(ParseError) as info:
        parse_expr("(E | F")
    assert ")" in info.value.expected
    with pytest.raises(ParseError):
        parse_expr("E F")
    with pytest.raises(ParseError):
        parse_expr("empty")
    with pytest.raises(ParseError):
        parse_assertion("E | F")


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_seeded(seed):
    rng = random.Random(seed)
    for _ in range(50):
        tree = random_expr(rng, 6)
        text = format_expr(tree)
        assert parse_expr(text) == tree, text
        assert format_expr(parse_expr(text)) == text


leaves = st.one_of(
    st.sampled_from(NAMES).map(EventName),
    st.just(OmegaLit()),
    st.just(EmptyLit()),
    st.lists(st.sampled_from("abc"), min_size=1, max_size=3, unique=True).map(lambda xs: EventLit(tuple(xs))),
)
exprs = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Know, kids, st.sampled_from([None, 0, 1])),
        st.builds(Not, kids),
        st.builds(Diff, kids, kids),
        st.builds(And, kids, kids),
        st.builds(Or, kids, kids),
    ),
    max_leaves=20,
)


@settings(max_examples=300)
@given(exprs)
def test_round_trip_property(tree):
    assert parse_expr(format_expr(tree)) == tree


def _model():
    return Model(
        AB,
        {"E": AB.event(["a"]), "F": AB.event(["b"])},
        {None: half_knowing()},
    )


def test_eval_examples():
    m = _model()
    assert eval_expr(parse_expr("K Omega"), m) == AB.event(["a"])
    assert eval_expr(parse_expr("K ~K Omega"), m) == AB.empty
    assert eval_expr(parse_expr(r"Omega \ E"), m) == AB.event(["b"])
    assert eval_expr(parse_expr("{b} | E"), m) == AB.omega
    with pytest.raises(UnboundName):
        eval_expr(parse_expr("G"), m)
    with pytest.raises(UnknownStage):
        eval_expr(parse_expr("K3 E"), m)


def test_stages():
    m = Model(AB, {}, {0: trivial(AB), 1: identity(AB)})
    assert eval_expr(parse_expr("K0 Omega"), m) == AB.empty
    assert eval_expr(parse_expr("K1 ~K0 Omega"), m) == AB.omega
    with pytest.raises(UnknownStage):
        eval_expr(parse_expr("K Omega"), m)


def test_model_validation():
    with pytest.raises(ValueError):
        Model(AB, {"Omega": AB.omega})
    with pytest.raises(ValueError):
        Model(AB, {"K1": AB.omega})
    with pytest.raises(ValueError):
        Model(AB, {"a b": AB.omega})


def test_eval_assertion_witnesses():
    m = _model()
    r = eval_assertion(parse_assertion("Omega <= E"), m)
    assert not r.holds and r.witness == "b"
    r = eval_assertion(parse_assertion("K Omega <= E"), m)
    assert r.holds and r.values == (AB.event(["a"]), AB.event(["a"]))
    assert eval_assertion(parse_assertion("empty(K ~K Omega)"), m).holds
    r = eval_assertion(parse_assertion("empty(K Omega)"), m)
    assert not r.holds and r.witness == "a"
    assert eval_assertion(parse_assertion("nonempty(K Omega)"), m).holds
    assert eval_assertion(parse_assertion("disjoint(E, F)"), m).holds
    assert eval_assertion(parse_assertion("~K E !<= E"), m).holds
    assert not eval_assertion(parse_assertion("E < E"), m).holds


masks = st.integers(0, 7)


@given(masks, masks)
def test_evaluation_is_a_set_algebra_homomorphism(x, y):
    space = make_space(["a", "b", "c"])
    e, f = space.from_mask(x), space.from_mask(y)
    m = Model(space, {"E": e, "F": f}, {None: identity(space)})
    se, sf = set(e.labels), set(f.labels)
    omega = set(space.names)
    cases = {
        "E | F": se | sf,
        "E & F": se & sf,
        r"E \ F": se - sf,
        "~E": omega - se,
        "K E": se,
        "~(E | F) == ~E & ~F": None,
    }
    for text, expected in cases.items():
        if expected is None:
            assert eval_assertion(parse_assertion(text), m).holds
        else:
            assert set(eval_expr(parse_expr(text), m).labels) == expected
