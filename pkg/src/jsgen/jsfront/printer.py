"""Canonical printer: single quotes, spaced operators, minimal parentheses."""
from __future__ import annotations

from .parser import BINARY_PRECEDENCE

COND, POSTFIX, UNARY, PRIMARY = 2, 16, 13, 17
LOWEST = 0

_STRING_ESCAPES = {"\\": "\\\\", "'": "\\'", "\n": "\\n", "\r": "\\r", "\t": "\\t",
                   "\b": "\\b", "\f": "\\f", "\v": "\\v", "\0": "\\x00",
                   "\u2028": "\\u2028", "\u2029": "\\u2029"}


def quote_string(value: str) -> str:
    out = []
    for ch in value:
        esc = _STRING_ESCAPES.get(ch)
        if esc is None and ord(ch) < 0x20:
            esc = f"\\x{ord(ch):02x}"
        out.append(esc or ch)
    return "'" + "".join(out) + "'"


def precedence(node: dict) -> int:
    kind = node["type"]
    if kind == "ConditionalExpression":
        return COND
    if kind in ("BinaryExpression", "LogicalExpression"):
        return BINARY_PRECEDENCE[node["operator"]]
    if kind == "UnaryExpression":
        return UNARY
    if kind in ("MemberExpression", "CallExpression"):
        return POSTFIX
    return PRIMARY


def print_js(node: dict) -> str:
    """Render a statement or expression node as canonical source text."""
    kind = node["type"]
    if kind == "BlockStatement":
        return "{" + " ".join(print_js(s) for s in node["body"]) + "}"
    if kind == "ExpressionStatement":
        return _expr(node["expression"], LOWEST) + ";"
    if kind == "BreakStatement":
        label = node["label"]
        return "break;" if label is None else f"break {_expr(label, LOWEST)};"
    return _expr(node, LOWEST)


def _expr(node: dict, min_prec: int) -> str:
    text = _expr_text(node)
    return f"({text})" if precedence(node) < min_prec else text


def _expr_text(node: dict) -> str:
    kind = node["type"]
    if kind == "Identifier":
        return node["name"]
    if kind == "Literal":
        value = node["value"]
        if value is None:
            return "null"
        if value is True or value is False:
            return "true" if value else "false"
        if isinstance(value, str):
            return quote_string(value)
        return node.get("raw") or repr(value)
    if kind == "TemplateLiteral":
        parts = ["`"]
        for k, quasi in enumerate(node["quasis"]):
            parts.append(quasi["value"]["raw"])
            if k < len(node["expressions"]):
                parts.append("${" + _expr(node["expressions"][k], LOWEST) + "}")
        parts.append("`")
        return "".join(parts)
    if kind == "ConditionalExpression":
        return (f"{_expr(node['test'], COND + 1)} ? {_expr(node['consequent'], COND)}"
                f" : {_expr(node['alternate'], COND)}")
    if kind in ("BinaryExpression", "LogicalExpression"):
        prec = BINARY_PRECEDENCE[node["operator"]]
        return f"{_expr(node['left'], prec)} {node['operator']} {_expr(node['right'], prec + 1)}"
    if kind == "UnaryExpression":
        op = node["operator"]
        arg = node["argument"]
        arg_text = _expr(arg, UNARY)
        if op == "typeof":
            return f"typeof {arg_text}"
        if arg["type"] == "UnaryExpression" and arg["operator"] in ("-", "+"):
            # keeps "- -a" / "+ +a" from lexing as decrement/increment
            arg_text = f"({arg_text})"
        return op + arg_text
    if kind == "MemberExpression":
        obj = node["object"]
        obj_text = _expr(obj, POSTFIX)
        if obj["type"] == "Literal" and not isinstance(obj["value"], str) and obj["value"] is not None \
                and not isinstance(obj["value"], bool):
            obj_text = f"({obj_text})"
        if node["computed"]:
            return f"{obj_text}[{_expr(node['property'], LOWEST)}]"
        return f"{obj_text}.{node['property']['name']}"
    if kind == "CallExpression":
        args = ", ".join(_expr(a, COND) for a in node["arguments"])
        return f"{_expr(node['callee'], POSTFIX)}({args})"
    raise ValueError(f"cannot print node of type {kind!r}")
