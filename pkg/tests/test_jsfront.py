import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus_cases import CASE_STUDY_CODES, CATEGORY_EXAMPLES, all_codes
from jsgen.grammar import AbstractNode, JsNumber, node
from jsgen.jsfront import (IllegalJsAst, JsSyntaxError, UnsupportedConstruct, abstract_to_code, canonicalize,
                           code_tokens, parse_js, print_js, to_abstract, to_concrete)
from jsgen.randgen import random_tree


def _expr(source):
    return parse_js(source)["body"][0]["expression"]


def test_logical_precedence():
    e = _expr('{ user && user.nick || " " }')
    assert e["type"] == "LogicalExpression" and e["operator"] == "||"
    assert e["left"]["operator"] == "&&"
    assert e["left"]["right"]["type"] == "MemberExpression"
    assert e["right"]["type"] == "Literal" and e["right"]["value"] == " "


def test_template_quasis():
    e = _expr("{`优惠券已抵扣${discountPrice}元`}")
    assert [q["value"]["raw"] for q in e["quasis"]] == ["优惠券已抵扣", "元"]
    assert [x["name"] for x in e["expressions"]] == ["discountPrice"]
    assert [q["tail"] for q in e["quasis"]] == [False, True]


def test_canonical_print_normalizes_quotes_and_semicolon():
    assert canonicalize("{isLucky ? '恭喜你押中啦' : '很遗憾未押中'}") == "{isLucky ? '恭喜你押中啦' : '很遗憾未押中';}"
    assert canonicalize('{a.b["c"](1, 2) + -x}') == "{a.b['c'](1, 2) + -x;}"


@pytest.mark.parametrize("code", all_codes())
def test_canonical_is_fixed_point(code, g):
    once = canonicalize(code)
    assert canonicalize(once) == once
    assert abstract_to_code(to_abstract(parse_js(code), g), g) == once


def test_parenthesization_survives_print():
    for src in ["{(a || b) && c;}", "{(a + b) * c;}", "{a - (b - c);}", "{(a ? b : c).d;}", "{-(-a);}"]:
        assert canonicalize(src) == src


def test_break_with_literal_label_is_illegal(g):
    bad = node(g, "BlockStatement", [node(g, "BreakStatement", node(g, "Literal", JsNumber("5")))])
    with pytest.raises(IllegalJsAst):
        to_concrete(bad, g)


def test_break_with_identifier_label_is_legal(g):
    ok = node(g, "BlockStatement", [node(g, "BreakStatement", node(g, "Identifier", "done"))])
    assert abstract_to_code(ok, g) == "{break done;}"


def test_syntax_error_carries_position():
    with pytest.raises(JsSyntaxError) as info:
        parse_js("{a ? }")
    assert (info.value.line, info.value.col) == (1, 6)


@pytest.mark.parametrize("src", ["{`abc", '{"abc}', "{a @ b}", "{a b}"])
def test_malformed_inputs(src):
    with pytest.raises(JsSyntaxError):
        parse_js(src)


@pytest.mark.parametrize("src", ["{[1, 2]}", "{a = 1}", "{x => 1}", "{a?.b}"])
def test_out_of_subset_is_unsupported(src):
    with pytest.raises(UnsupportedConstruct):
        parse_js(src)


def test_code_tokens_split_templates():
    assert code_tokens("{`a${b}c`;}") == ["{", "`a${", "b", "}c`", ";", "}"]
    assert code_tokens('{x || "y";}') == ["{", "x", "||", "'y'", ";", "}"]


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_random_trees_round_trip(g, seed):
    tree = random_tree(g, random.Random(seed))
    code = abstract_to_code(tree, g)
    assert to_abstract(parse_js(code), g) == tree
    assert print_js(parse_js(code)) == code


def test_case_study_codes_parse():
    for code in CASE_STUDY_CODES + [c for _, _, c in CATEGORY_EXAMPLES]:
        assert parse_js(code)["type"] == "BlockStatement"
