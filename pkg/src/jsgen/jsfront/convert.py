"""Conversion between Mozilla-Parser-API dicts and grammar-typed trees."""
from __future__ import annotations

from ..grammar import AbstractNode, Grammar, JsNumber
from .lexer import NUMBER_RE, is_name_part, is_name_start
from .parser import RESERVED, number_value

BINARY_CTORS = {
    "===": "StrictEqual", "!==": "NotStrictEqual", "==": "Equal", "!=": "NotEqual",
    "<": "Less", "<=": "LessEqual", ">": "Greater", ">=": "GreaterEqual",
    "+": "Plus", "-": "Minus", "*": "Times", "/": "Divide", "%": "Modulo",
}
LOGICAL_CTORS = {"&&": "And", "||": "Or"}
UNARY_CTORS = {"!": "Not", "-": "Negate", "+": "Positive", "typeof": "TypeOf"}
OPERATOR_OF = {v: k for table in (BINARY_CTORS, LOGICAL_CTORS, UNARY_CTORS) for k, v in table.items()}

class UnsupportedNode(Exception):
    pass


class IllegalJsAst(Exception):
    """The tree satisfies the relaxed grammar but is not legal JavaScript."""


def _mk(g: Grammar, name: str, *children) -> AbstractNode:
    return AbstractNode(g.constructor(name), list(children))


def to_abstract(node: dict, g: Grammar) -> AbstractNode:
    kind = node["type"]
    if kind == "BlockStatement":
        return _mk(g, "BlockStatement", [to_abstract(s, g) for s in node["body"]])
    if kind == "ExpressionStatement":
        return _mk(g, "ExpressionStatement", to_abstract(node["expression"], g))
    if kind == "BreakStatement":
        label = node["label"]
        return _mk(g, "BreakStatement", None if label is None else to_abstract(label, g))
    if kind == "ConditionalExpression":
        return _mk(g, "ConditionalExpression", to_abstract(node["test"], g),
                   to_abstract(node["consequent"], g), to_abstract(node["alternate"], g))
    if kind in ("BinaryExpression", "LogicalExpression"):
        table = BINARY_CTORS if kind == "BinaryExpression" else LOGICAL_CTORS
        if node["operator"] not in table:
            raise UnsupportedNode(f"operator {node['operator']!r}")
        return _mk(g, kind, _mk(g, table[node["operator"]]),
                   to_abstract(node["left"], g), to_abstract(node["right"], g))
    if kind == "UnaryExpression":
        if node["operator"] not in UNARY_CTORS:
            raise UnsupportedNode(f"operator {node['operator']!r}")
        return _mk(g, "UnaryExpression", _mk(g, UNARY_CTORS[node["operator"]]),
                   to_abstract(node["argument"], g))
    if kind == "MemberExpression":
        obj = to_abstract(node["object"], g)
        if node["computed"]:
            return _mk(g, "ComputedMember", obj, to_abstract(node["property"], g))
        return _mk(g, "StaticMember", obj, node["property"]["name"])
    if kind == "CallExpression":
        return _mk(g, "CallExpression", to_abstract(node["callee"], g),
                   [to_abstract(a, g) for a in node["arguments"]])
    if kind == "TemplateLiteral":
        quasis = [_mk(g, "TemplateElement", q["value"]["raw"]) for q in node["quasis"]]
        return _mk(g, "TemplateLiteral", quasis, [to_abstract(e, g) for e in node["expressions"]])
    if kind == "Identifier":
        return _mk(g, "Identifier", node["name"])
    if kind == "Literal":
        value = node["value"]
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = JsNumber(node.get("raw") or repr(value))
        return _mk(g, "Literal", value)
    raise UnsupportedNode(f"node type {kind!r} has no grammar constructor")


def is_identifier_name(name) -> bool:
    return (isinstance(name, str) and name != "" and is_name_start(name[0])
            and all(is_name_part(ch) for ch in name[1:]))


def _valid_template_raw(raw) -> bool:
    if not isinstance(raw, str):
        return False
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch == "\\":
            if i + 1 >= len(raw):
                return False
            i += 2
            continue
        if ch == "`" or raw.startswith("${", i):
            return False
        i += 1
    return True


def to_concrete(n: AbstractNode, g: Grammar) -> dict:
    """Inverse of ``to_abstract``; raises IllegalJsAst on relaxed-typing output."""
    name = n.constructor.name
    c = n.children
    if name == "BlockStatement":
        return {"type": "BlockStatement", "body": [to_concrete(s, g) for s in c[0]]}
    if name == "ExpressionStatement":
        return {"type": "ExpressionStatement", "expression": to_concrete(c[0], g)}
    if name == "BreakStatement":
        label = c[0]
        if label is None:
            return {"type": "BreakStatement", "label": None}
        if label.constructor.name != "Identifier":
            raise IllegalJsAst(f"break label must be an Identifier, not {label.constructor.name}")
        return {"type": "BreakStatement", "label": to_concrete(label, g)}
    if name == "ConditionalExpression":
        return {"type": "ConditionalExpression", "test": to_concrete(c[0], g),
                "consequent": to_concrete(c[1], g), "alternate": to_concrete(c[2], g)}
    if name in ("BinaryExpression", "LogicalExpression", "UnaryExpression"):
        op = OPERATOR_OF[c[0].constructor.name]
        if name == "UnaryExpression":
            return {"type": name, "operator": op, "argument": to_concrete(c[1], g)}
        return {"type": name, "operator": op, "left": to_concrete(c[1], g), "right": to_concrete(c[2], g)}
    if name == "StaticMember":
        if not is_identifier_name(c[1]):
            raise IllegalJsAst(f"invalid property name {c[1]!r}")
        return {"type": "MemberExpression", "computed": False, "object": to_concrete(c[0], g),
                "property": {"type": "Identifier", "name": c[1]}}
    if name == "ComputedMember":
        return {"type": "MemberExpression", "computed": True, "object": to_concrete(c[0], g),
                "property": to_concrete(c[1], g)}
    if name == "CallExpression":
        return {"type": "CallExpression", "callee": to_concrete(c[0], g),
                "arguments": [to_concrete(a, g) for a in c[1]]}
    if name == "TemplateLiteral":
        quasis, exprs = c
        if len(quasis) != len(exprs) + 1:
            raise IllegalJsAst(f"template literal with {len(exprs)} expressions needs {len(exprs) + 1} quasis")
        elements = []
        for k, q in enumerate(quasis):
            raw = q.children[0]
            if not _valid_template_raw(raw):
                raise IllegalJsAst(f"invalid template segment {raw!r}")
            elements.append({"type": "TemplateElement", "value": {"raw": raw}, "tail": k == len(quasis) - 1})
        return {"type": "TemplateLiteral", "quasis": elements, "expressions": [to_concrete(e, g) for e in exprs]}
    if name == "Identifier":
        ident = c[0]
        if not is_identifier_name(ident) or ident in RESERVED:
            raise IllegalJsAst(f"invalid identifier {ident!r}")
        return {"type": "Identifier", "name": ident}
    if name == "Literal":
        value = c[0]
        if isinstance(value, JsNumber):
            if NUMBER_RE.fullmatch(value.raw) is None:
                raise IllegalJsAst(f"invalid numeric literal {value.raw!r}")
            return {"type": "Literal", "value": number_value(value.raw), "raw": value.raw}
        if value is None or isinstance(value, (str, bool)):
            return {"type": "Literal", "value": value}
        raise IllegalJsAst(f"invalid literal value {value!r}")
    raise IllegalJsAst(f"constructor {name} cannot appear as a JavaScript node here")


def abstract_to_code(n: AbstractNode, g: Grammar) -> str:
    """Convert a complete derivation to canonical code; root must be a block."""
    from .printer import print_js

    if n.constructor.name != "BlockStatement":
        raise IllegalJsAst(f"program root must be a BlockStatement, not {n.constructor.name}")
    return print_js(to_concrete(n, g))
