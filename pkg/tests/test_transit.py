import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from corpus_cases import CONDITIONAL_CODE, all_codes
from jsgen.grammar import MULTIPLE, OPTIONAL
from jsgen.jsfront import abstract_to_code, parse_js, to_abstract
from jsgen.randgen import random_tree
from jsgen.transit import (EOT, REDUCE, ApplyConstr, FrontierState, GenSubtoken, IllegalAction,
                           IncompleteDerivation, Reduce, dump_actions, legal_actions, oracle_actions, replay)

GOLDEN = Path(__file__).parent / "golden" / "conditional_actions.txt"


def _actions(code, g, subtokenize=True):
    return oracle_actions(to_abstract(parse_js(code), g), g, subtokenize)


def test_golden_dump(g):
    actions = _actions(CONDITIONAL_CODE, g)
    assert dump_actions(actions, g) == GOLDEN.read_text(encoding="utf-8")
    assert abstract_to_code(replay(actions, g), g) == CONDITIONAL_CODE


def test_pic_url_sequence(g):
    actions = _actions("{picUrl;}", g)
    assert [str(a) for a in actions[2:]] == [
        "Identifier(identifier name)", "GenSubtoken[pic]", "GenSubtoken[##Url]", "GenSubtoken[<EOT>]", "Reduce"]
    whole = _actions("{picUrl;}", g, subtokenize=False)
    assert [a.token for a in whole if isinstance(a, GenSubtoken)] == ["picUrl", EOT]


def test_wrong_type_constructor_is_illegal(g):
    state = FrontierState(g)
    state.apply(ApplyConstr(g.constructor("BlockStatement")))
    state.apply(ApplyConstr(g.constructor("ExpressionStatement")))
    with pytest.raises(IllegalAction) as info:
        state.apply(ApplyConstr(g.constructor("StrictEqual")))
    assert info.value.step == 2


def test_multiple_field_permits_reduce_after_items(g):
    state = FrontierState(g)
    state.apply(ApplyConstr(g.constructor("BlockStatement")))
    mask = legal_actions(state, g)
    stmt_ctors = set(g.constructors_for_type("stmt"))
    assert set(mask.constructors) == stmt_ctors and mask.reduce
    for a in _actions("{x;}", g)[1:-1]:
        state.apply(a)
    mask = legal_actions(state, g)
    assert set(mask.constructors) == stmt_ctors and mask.reduce


def test_identifier_needs_a_piece_before_eot(g):
    state = FrontierState(g)
    for a in _actions("{x;}", g)[:3]:
        state.apply(a)
    mask = legal_actions(state, g)
    assert not mask.permits(GenSubtoken(EOT))
    assert mask.permits(GenSubtoken("pic"))
    assert not mask.permits(GenSubtoken("##Url"))
    assert not mask.permits(REDUCE)
    with pytest.raises(IllegalAction):
        state.apply(GenSubtoken(EOT))


def test_truncated_sequence_is_incomplete(g):
    actions = _actions(CONDITIONAL_CODE, g)
    with pytest.raises(IncompleteDerivation):
        replay(actions[:-1], g)


def test_action_after_completion_is_illegal(g):
    with pytest.raises(IllegalAction):
        replay(_actions("{x;}", g) + [REDUCE], g)


@pytest.mark.parametrize("code", all_codes())
@pytest.mark.parametrize("subtokenize", [True, False])
def test_corpus_codes_round_trip(code, subtokenize, g):
    tree = to_abstract(parse_js(code), g)
    assert replay(oracle_actions(tree, g, subtokenize), g, subtokenize) == tree


def _count_expected(tree, g):
    """Constructor applications and Reduce actions, counted from the tree."""
    n_ctor = n_reduce = 0
    stack = [tree]
    while stack:
        n = stack.pop()
        n_ctor += 1
        for f, value in zip(n.constructor.fields, n.children):
            if f.cardinality == MULTIPLE:
                n_reduce += 1
                items = value
            elif f.cardinality == OPTIONAL and value is None:
                n_reduce += 1
                items = []
            else:
                items = [value] if value is not None else []
            if not g.is_primitive(f.type):
                stack.extend(items)
    return n_ctor, n_reduce


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_oracle_invariants(g, seed, subtokenize):
    tree = random_tree(g, random.Random(seed))
    actions = oracle_actions(tree, g, subtokenize)
    assert replay(actions, g, subtokenize) == tree
    n_ctor, n_reduce = _count_expected(tree, g)
    assert sum(isinstance(a, ApplyConstr) for a in actions) == n_ctor
    assert sum(isinstance(a, Reduce) for a in actions) == n_reduce
    # every prefix action is legal where it is taken
    state = FrontierState(g, subtokenize)
    for a in actions:
        assert legal_actions(state, g).permits(a)
        state.apply(a)
    assert state.done and state.frontier() is None
