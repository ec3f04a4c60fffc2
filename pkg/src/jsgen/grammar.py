"""ASDL grammar parsing and the typed abstract tree built on top of it.

The accepted syntax is the subset of Zephyr ASDL needed for sum types::

    # comment
    type = Ctor(fieldtype name, fieldtype? name, fieldtype* name) | Other | ...

Constructor order in the source is significant: it fixes the action indices
used by the decoder.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

PRIMITIVE_TYPES = frozenset({"identifier", "literal", "string"})

SINGLE, OPTIONAL, MULTIPLE = "single", "optional", "multiple"
_CARD_SUFFIX = {SINGLE: "", OPTIONAL: "?", MULTIPLE: "*"}


class ASDLSyntaxError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


class GrammarError(Exception):
    """Semantically invalid grammar, or a query about an unknown type."""


@dataclass(frozen=True)
class Field:
    name: str
    type: str
    cardinality: str = SINGLE

    def __str__(self) -> str:
        return f"{self.type}{_CARD_SUFFIX[self.cardinality]} {self.name}"


@dataclass(frozen=True)
class Constructor:
    name: str
    result_type: str
    fields: tuple[Field, ...] = ()

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(f) for f in self.fields)})"

    def field_index(self, name: str) -> int:
        for i, f in enumerate(self.fields):
            if f.name == name:
                return i
        raise KeyError(f"{self.name} has no field {name!r}")


@dataclass(frozen=True)
class Grammar:
    types: tuple[str, ...]
    constructors: tuple[Constructor, ...]
    root_type: str
    primitive_types: frozenset[str] = PRIMITIVE_TYPES
    _by_name: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {c.name: c for c in self.constructors})

    def constructor(self, name: str) -> Constructor:
        try:
            return self._by_name[name]
        except KeyError:
            raise GrammarError(f"unknown constructor {name!r}") from None

    def is_primitive(self, type_name: str) -> bool:
        return type_name in self.primitive_types

    def constructors_for_type(self, type_name: str) -> list[Constructor]:
        return constructors_for_type(self, type_name)

    def pretty(self) -> str:
        lines = []
        for t in self.types:
            ctors = [c for c in self.constructors if c.result_type == t]
            rendered = [c.name if not c.fields else str(c) for c in ctors]
            pad = " " * len(t)
            lines.append(f"{t} = {rendered[0]}")
            lines.extend(f"{pad} | {r}" for r in rendered[1:])
        return "\n".join(lines) + "\n"


def constructors_for_type(g: Grammar, type_name: str) -> list[Constructor]:
    if type_name in g.primitive_types:
        return []
    if type_name not in g.types:
        raise GrammarError(f"unknown type {type_name!r}")
    return [c for c in g.constructors if c.result_type == type_name]


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>(?:#|--)[^\n]*)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[=|(),?*])"
)


def _tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ASDLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("id", "op"):
            yield kind, m.group(), line, pos - line_start + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokenize(text))
        self.i = 0

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ASDLSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        return tok

    def parse(self):
        productions = []
        while self.peek()[0] != "eof":
            productions.append(self.production())
        return productions

    def production(self):
        type_tok = self.expect("id")
        if not type_tok[1][0].islower():
            raise ASDLSyntaxError(f"type name {type_tok[1]!r} must start lower-case", type_tok[2], type_tok[3])
        self.expect("op", "=")
        ctors = [self.constructor()]
        while self.peek()[:2] == ("op", "|"):
            self.next()
            ctors.append(self.constructor())
        return type_tok, ctors

    def constructor(self):
        tok = self.expect("id")
        if not tok[1][0].isupper():
            raise ASDLSyntaxError(f"constructor name {tok[1]!r} must start upper-case", tok[2], tok[3])
        fields = []
        if self.peek()[:2] == ("op", "("):
            self.next()
            if self.peek()[:2] != ("op", ")"):
                fields.append(self.field())
                while self.peek()[:2] == ("op", ","):
                    self.next()
                    fields.append(self.field())
            self.expect("op", ")")
        return tok, fields

    def field(self):
        type_tok = self.expect("id")
        card = SINGLE
        if self.peek()[:2] == ("op", "?"):
            self.next()
            card = OPTIONAL
        elif self.peek()[:2] == ("op", "*"):
            self.next()
            card = MULTIPLE
        name_tok = self.expect("id")
        return type_tok, card, name_tok


def parse_asdl(text: str) -> Grammar:
    productions = _Parser(text).parse()
    if not productions:
        raise GrammarError("grammar has no productions")

    types: list[str] = []
    for type_tok, _ in productions:
        if type_tok[1] in types or type_tok[1] in PRIMITIVE_TYPES:
            raise GrammarError(f"line {type_tok[2]}: type {type_tok[1]!r} defined twice")
        types.append(type_tok[1])

    known = set(types) | PRIMITIVE_TYPES
    constructors: list[Constructor] = []
    seen: set[str] = set()
    for type_tok, ctors in productions:
        for ctor_tok, raw_fields in ctors:
            name = ctor_tok[1]
            if name in seen:
                raise GrammarError(f"line {ctor_tok[2]}: duplicate constructor {name!r}")
            seen.add(name)
            fields = []
            for ftype, card, fname in raw_fields:
                if ftype[1] not in known:
                    raise GrammarError(f"line {ftype[2]}: unknown field type {ftype[1]!r} in {name}")
                if any(f.name == fname[1] for f in fields):
                    raise GrammarError(f"line {fname[2]}: duplicate field {fname[1]!r} in {name}")
                fields.append(Field(fname[1], ftype[1], card))
            constructors.append(Constructor(name, type_tok[1], tuple(fields)))

    return Grammar(types=tuple(types), constructors=tuple(constructors), root_type=types[0])


def default_grammar_text() -> str:
    return resources.files("jsgen.data").joinpath("javascript.asdl").read_text(encoding="utf-8")


_DEFAULT: Grammar | None = None


def load_grammar(path=None) -> Grammar:
    """Load a grammar file; with no path, the bundled JavaScript grammar."""
    global _DEFAULT
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return parse_asdl(fh.read())
    if _DEFAULT is None:
        _DEFAULT = parse_asdl(default_grammar_text())
    return _DEFAULT


# -- typed trees ----------------------------------------------------------


@dataclass(frozen=True)
class JsNumber:
    """Numeric literal leaf, kept as its source text."""

    raw: str

    def __str__(self) -> str:
        return self.raw


@dataclass
class AbstractNode:
    """A node of the grammar-typed tree.

    ``children`` is aligned with ``constructor.fields``: a single field holds
    a value, an optional field holds a value or None, a multiple field holds
    a list. Values under primitive-typed fields are leaves (str, bool or
    JsNumber); all others are AbstractNodes.
    """

    constructor: Constructor
    children: list[Any] = field(default_factory=list)

    def __getitem__(self, name: str):
        return self.children[self.constructor.field_index(name)]

    def __repr__(self) -> str:
        parts = ", ".join(f"{f.name}={c!r}" for f, c in zip(self.constructor.fields, self.children))
        return f"{self.constructor.name}({parts})"


def node(g: Grammar, name: str, *children) -> AbstractNode:
    """Convenience builder: ``node(g, 'Identifier', 'x')``."""
    ctor = g.constructor(name)
    if len(children) != len(ctor.fields):
        raise GrammarError(f"{name} takes {len(ctor.fields)} children, got {len(children)}")
    return AbstractNode(ctor, list(children))


def check_node(n: AbstractNode, g: Grammar, expected_type: str | None = None) -> None:
    """Raise GrammarError unless ``n`` conforms to ``g``."""
    ctor = n.constructor
    if g._by_name.get(ctor.name) != ctor:
        raise GrammarError(f"constructor {ctor.name} is not part of the grammar")
    if expected_type is not None and ctor.result_type != expected_type:
        raise GrammarError(f"{ctor.name} has type {ctor.result_type}, expected {expected_type}")
    if len(n.children) != len(ctor.fields):
        raise GrammarError(f"{ctor.name}: expected {len(ctor.fields)} children, got {len(n.children)}")
    for f, value in zip(ctor.fields, n.children):
        if f.cardinality == MULTIPLE:
            if not isinstance(value, list):
                raise GrammarError(f"{ctor.name}.{f.name} must be a list")
            items = value
        elif f.cardinality == OPTIONAL:
            items = [] if value is None else [value]
        else:
            if value is None:
                raise GrammarError(f"{ctor.name}.{f.name} is required")
            items = [value]
        for item in items:
            if g.is_primitive(f.type):
                if not isinstance(item, (str, bool, JsNumber)):
                    raise GrammarError(f"{ctor.name}.{f.name} needs a leaf value, got {type(item).__name__}")
            else:
                if not isinstance(item, AbstractNode):
                    raise GrammarError(f"{ctor.name}.{f.name} needs a {f.type} node")
                check_node(item, g, f.type)
