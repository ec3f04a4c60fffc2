import pytest
from hypothesis import given, strategies as st

from jsgen.grammar import (MULTIPLE, OPTIONAL, SINGLE, ASDLSyntaxError, GrammarError, check_node,
                           constructors_for_type, default_grammar_text, load_grammar, node, parse_asdl)


def test_default_grammar_types(g):
    assert g.root_type == "stmt"
    assert g.types == ("stmt", "expr", "quasi", "binary_operator", "logical_operator", "unary_operator")
    assert [c.name for c in constructors_for_type(g, "stmt")] == [
        "BlockStatement", "ExpressionStatement", "BreakStatement"]


def test_constructor_signatures_print_like_asdl(g):
    assert str(g.constructor("BlockStatement")) == "BlockStatement(stmt* body)"
    assert str(g.constructor("Literal")) == "Literal(literal? value)"
    assert str(g.constructor("StrictEqual")) == "StrictEqual()"
    assert str(g.constructor("BinaryExpression")) == \
        "BinaryExpression(binary_operator operator, expr left, expr right)"


def test_cardinalities(g):
    body = g.constructor("BlockStatement").fields[0]
    label = g.constructor("BreakStatement").fields[0]
    test = g.constructor("ConditionalExpression").fields[0]
    assert (body.cardinality, label.cardinality, test.cardinality) == (MULTIPLE, OPTIONAL, SINGLE)


def test_primitive_type_has_no_constructors(g):
    assert constructors_for_type(g, "identifier") == []


def test_unknown_type_query_raises(g):
    with pytest.raises(GrammarError):
        constructors_for_type(g, "nope")


def test_empty_grammar():
    with pytest.raises(GrammarError, match="no productions"):
        parse_asdl("# only a comment\n")


def test_syntax_error_reports_position():
    with pytest.raises(ASDLSyntaxError) as info:
        parse_asdl("stmt = A(\nexpr x\n")
    assert info.value.line >= 2


def test_bad_character():
    with pytest.raises(ASDLSyntaxError) as info:
        parse_asdl("stmt = A & B")
    assert (info.value.line, info.value.col) == (1, 10)


@pytest.mark.parametrize("text, msg", [
    ("a = X\na = Y", "defined twice"),
    ("a = X | X", "duplicate constructor"),
    ("a = X(b y)", "unknown field type"),
    ("a = X(a y, a y)", "duplicate field"),
])
def test_semantic_errors(text, msg):
    with pytest.raises(GrammarError, match=msg):
        parse_asdl(text)


def test_load_grammar_from_file(tmp_path):
    p = tmp_path / "g.asdl"
    p.write_text(default_grammar_text(), encoding="utf-8")
    assert load_grammar(p) == load_grammar()


def test_node_builder_and_check(g):
    n = node(g, "ExpressionStatement", node(g, "Identifier", "x"))
    check_node(n, g, "stmt")
    assert n["expression"]["name"] == "x"
    with pytest.raises(GrammarError):
        check_node(n, g, "expr")
    with pytest.raises(GrammarError):
        node(g, "Identifier")


def test_check_node_rejects_missing_single_field(g):
    with pytest.raises(GrammarError):
        check_node(node(g, "ExpressionStatement", None), g)


_names = st.from_regex(r"[A-Z][a-z]{1,5}", fullmatch=True)


@st.composite
def grammars(draw):
    n_types = draw(st.integers(1, 4))
    types = [f"t{i}" for i in range(n_types)]
    ctor_names = iter(draw(st.lists(_names, min_size=n_types * 3, max_size=n_types * 3, unique=True)))
    lines = []
    for t in types:
        ctors = []
        for _ in range(draw(st.integers(1, 3))):
            k = draw(st.integers(0, 3))
            fields = [f"{draw(st.sampled_from(types + ['identifier', 'literal']))}"
                      f"{draw(st.sampled_from(['', '?', '*']))} f{j}" for j in range(k)]
            name = next(ctor_names)
            ctors.append(f"{name}({', '.join(fields)})" if fields else name)
        lines.append(f"{t} = " + " | ".join(ctors))
    return "\n".join(lines)


@given(grammars())
def test_pretty_print_reparses_to_same_grammar(text):
    g = parse_asdl(text)
    assert parse_asdl(g.pretty()) == g


@given(grammars())
def test_constructor_order_is_source_order(text):
    g = parse_asdl(text)
    for t in g.types:
        listed = [c.name for c in constructors_for_type(g, t)]
        assert listed == [c.name for c in g.constructors if c.result_type == t]
