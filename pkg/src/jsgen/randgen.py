"""Random grammar-valid trees that are also legal JavaScript."""
from __future__ import annotations

import random

from .grammar import MULTIPLE, OPTIONAL, SINGLE, AbstractNode, Grammar, JsNumber
from .jsfront.parser import RESERVED

_IDENT_START = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$价格标题"
_IDENT_PART = _IDENT_START + "0123456789"
_WORDS = ["pic", "url", "live", "time", "desc", "shop", "logo", "room", "status", "price", "id", "HTTP", "x"]
_STRING_CHARS = list("ab Z9 _$'\"\\`\n\t{}.,:") + ["春", "运", "，", "<STR1>", "\u2028", "é", "😀"]
_TEMPLATE_CHARS = list("ab Z9 .,:{}$'\"") + ["春", "\\n", "\\`", "\\u0041"]
_NUMBERS = ["0", "1", "10", "3.14", "0.5", "1e3", "2E-2", "0x1F", "100", ".5"]


def random_identifier(rng: random.Random) -> str:
    while True:
        if rng.random() < 0.5:
            words = [rng.choice(_WORDS) for _ in range(rng.randint(1, 3))]
            sep = rng.choice(["", "_", "__"])
            name = words[0] + "".join(sep + (w.capitalize() if sep == "" else w) for w in words[1:])
        else:
            name = rng.choice(_IDENT_START) + "".join(rng.choice(_IDENT_PART) for _ in range(rng.randint(0, 6)))
        if name not in RESERVED:
            return name


def random_string(rng: random.Random) -> str:
    return "".join(rng.choice(_STRING_CHARS) for _ in range(rng.randint(0, 5)))


def random_literal(rng: random.Random):
    r = rng.random()
    if r < 0.45:
        return random_string(rng)
    if r < 0.8:
        return JsNumber(rng.choice(_NUMBERS))
    if r < 0.9:
        return rng.random() < 0.5
    return None


def random_tree(g: Grammar, rng: random.Random, max_depth: int = 4) -> AbstractNode:
    """A random program: a block of statements over the whole grammar."""
    block = g.constructor("BlockStatement")
    body = [_node(g, rng, "stmt", max_depth - 1, block.name) for _ in range(rng.randint(1, 3))]
    return AbstractNode(block, [body])


def _node(g, rng, type_name, depth, owner) -> AbstractNode:
    ctors = g.constructors_for_type(type_name)
    if owner == "BreakStatement":
        ctors = [g.constructor("Identifier")]
    elif depth <= 0:
        # only constructors without required recursive children
        leafy = [c for c in ctors if not any(f.type in ("expr", "stmt") and f.cardinality == SINGLE for f in c.fields)]
        ctors = leafy or ctors
    c = rng.choice(ctors)
    if c.name == "TemplateLiteral":
        n_expr = rng.randint(0, 2) if depth > 0 else 0
        quasis = [AbstractNode(g.constructor("TemplateElement"), [_template_raw(rng)]) for _ in range(n_expr + 1)]
        exprs = [_node(g, rng, "expr", depth - 1, c.name) for _ in range(n_expr)]
        return AbstractNode(c, [quasis, exprs])
    children = []
    for f in c.fields:
        if f.cardinality == MULTIPLE:
            n = rng.randint(0, 3) if depth > 0 else 0
            children.append([_value(g, rng, f.type, depth - 1, c.name) for _ in range(n)])
        elif f.cardinality == OPTIONAL:
            children.append(_value(g, rng, f.type, depth - 1, c.name) if rng.random() < 0.5 else None)
        else:
            children.append(_value(g, rng, f.type, depth - 1, c.name))
    return AbstractNode(c, children)


def _value(g, rng, type_name, depth, owner):
    if type_name == "identifier":
        return random_identifier(rng)
    if type_name == "literal":
        return random_literal(rng)
    if type_name == "string":
        return _template_raw(rng)
    return _node(g, rng, type_name, depth, owner)


def _template_raw(rng: random.Random) -> str:
    raw = "".join(rng.choice(_TEMPLATE_CHARS) for _ in range(rng.randint(0, 4)))
    # "$" directly before "{" (here or across an interpolation) opens a substitution
    return raw.replace("${", "$ {").rstrip("$")
