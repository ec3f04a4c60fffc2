"""String-literal placeholder replacement and member-access simplification."""
from __future__ import annotations

import re

from ..jsfront import parse_js, print_js
from .text import PLACEHOLDER_RE

_QUOTED_RE = re.compile(r"‘[^’]*’|“[^”]*”|'[^']*'|\"[^\"]*\"|「[^」]*」|『[^』]*』")


def _string_slots(node, out):
    """Collect (container, key) pairs of string values in code-appearance order."""
    if isinstance(node, list):
        for item in node:
            _string_slots(item, out)
        return
    kind = node["type"]
    if kind == "Literal":
        if isinstance(node["value"], str):
            out.append((node, "value"))
        return
    if kind == "TemplateLiteral":
        for k, quasi in enumerate(node["quasis"]):
            out.append((quasi["value"], "raw"))
            if k < len(node["expressions"]):
                _string_slots(node["expressions"][k], out)
        return
    order = {
        "BlockStatement": ("body",), "ExpressionStatement": ("expression",),
        "BreakStatement": (), "ConditionalExpression": ("test", "consequent", "alternate"),
        "BinaryExpression": ("left", "right"), "LogicalExpression": ("left", "right"),
        "UnaryExpression": ("argument",), "MemberExpression": ("object", "property"),
        "CallExpression": ("callee", "arguments"), "Identifier": (),
    }[kind]
    for key in order:
        _string_slots(node[key], out)


def _is_word(ch: str) -> bool:
    return ch.isalnum()


def _find(description: str, literal: str) -> int:
    """Position of ``literal`` in ``description`` outside placeholders,
    preferring an occurrence inside a quoted span."""
    blocked = [m.span() for m in PLACEHOLDER_RE.finditer(description)]

    def free(pos):
        end = pos + len(literal)
        return all(end <= s or pos >= e for s, e in blocked)

    candidates = []
    pos = description.find(literal)
    while pos >= 0:
        if free(pos):
            candidates.append(pos)
        pos = description.find(literal, pos + 1)
    if not candidates:
        return -1
    for m in _QUOTED_RE.finditer(description):
        for pos in candidates:
            if m.start() < pos and pos + len(literal) < m.end():
                return pos
    return candidates[0]


def _splice(description: str, pos: int, length: int, placeholder: str) -> str:
    before, after = description[:pos], description[pos + length:]
    left = " " if before and _is_word(before[-1]) else ""
    right = " " if after and _is_word(after[0]) else ""
    return f"{before}{left}{placeholder}{right}{after}"


def replace_string_literals(description: str, code: str):
    """Swap string literals that occur in ``description`` for ``<STRk>``.

    Returns ``(description, code, placeholder_map, unmatched)`` where
    ``unmatched`` lists literal values not found in the description; those
    are left in the code unchanged. Template-literal segments are treated
    one by one. Existing placeholders are kept, so the function is
    idempotent.
    """
    tree = parse_js(code)
    slots = []
    _string_slots(tree, slots)

    used = {int(m.group(1)) for m in PLACEHOLDER_RE.finditer(description)}
    used |= {int(m.group(1)) for c, k in slots for m in [PLACEHOLDER_RE.fullmatch(c[k])] if m}
    next_k = max(used, default=0) + 1

    mapping: dict[str, str] = {}
    by_value: dict[str, str] = {}
    unmatched: list[str] = []
    for container, key in slots:
        value = container[key]
        if value == "" or PLACEHOLDER_RE.fullmatch(value):
            continue
        if value in by_value:
            container[key] = by_value[value]
            continue
        pos = _find(description, value)
        if pos < 0:
            unmatched.append(value)
            continue
        placeholder = f"<STR{next_k}>"
        next_k += 1
        description = _splice(description, pos, len(value), placeholder)
        container[key] = placeholder
        mapping[placeholder] = value
        by_value[value] = placeholder
    return description, print_js(tree), mapping, unmatched


def restore_string_literals(text: str, mapping: dict[str, str]) -> str:
    return PLACEHOLDER_RE.sub(lambda m: mapping.get(m.group(), m.group()), text)


def _simplify(node, callee=False):
    if isinstance(node, list):
        return [_simplify(n) for n in node]
    if not isinstance(node, dict):
        return node
    kind = node.get("type")
    if kind == "MemberExpression":
        obj = _simplify(node["object"])
        if node["computed"]:
            return {**node, "object": obj, "property": _simplify(node["property"])}
        if callee or obj["type"] != "Identifier":
            return {**node, "object": obj}
        return node["property"]
    if kind == "CallExpression":
        return {**node, "callee": _simplify(node["callee"], callee=True),
                "arguments": _simplify(node["arguments"])}
    return {k: _simplify(v) for k, v in node.items()}


def simplify_member_access(code: str) -> str:
    """Drop accessed objects from static member chains: ``task.assets.btn``
    becomes ``btn``. Method calls keep their method (``a.b.split()`` becomes
    ``b.split()``) and bracket indexing is kept."""
    return print_js(_simplify(parse_js(code)))
