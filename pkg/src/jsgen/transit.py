"""Transition system: oracle action sequences, replay, and legality masks.

A derivation builds an AbstractNode depth-first, left to right. At every
step exactly one field of the partial tree is the *frontier*; the next
action fills it:

* ``ApplyConstr[c]`` puts a new node of constructor ``c`` there,
* ``Reduce`` closes an optional field left empty, or a multiple field,
* ``GenSubtoken[v]`` appends one piece of a primitive leaf.

Leaf protocol: identifiers are subtoken runs closed by ``<EOT>``; strings
are bracketed ``<SOS> ... <EOS>``; other literal values (numbers, booleans)
are a single token closed by ``<EOT>``. A literal field accepts either form.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Union

from .grammar import (MULTIPLE, OPTIONAL, SINGLE, AbstractNode, Constructor, Field, Grammar,
                      GrammarError, JsNumber, check_node, constructors_for_type)
from .prep.text import CONTINUATION, join_subtokens, split_string_content, subtokenize

EOT, SOS, EOS = "<EOT>", "<SOS>", "<EOS>"
PAD, UNK = "<pad>", "<unk>"
SENTINELS = frozenset({EOT, SOS, EOS, PAD})

# decode-time cap on derivation length
MAX_ACTIONS = 200


@dataclass(frozen=True)
class ApplyConstr:
    constructor: Constructor

    def __str__(self):
        return str(self.constructor)


@dataclass(frozen=True)
class Reduce:
    def __str__(self):
        return "Reduce"


@dataclass(frozen=True)
class GenSubtoken:
    token: str

    def __str__(self):
        return f"GenSubtoken[{self.token}]"


Action = Union[ApplyConstr, Reduce, GenSubtoken]
REDUCE = Reduce()


class IllegalAction(Exception):
    def __init__(self, step: int, action, reason: str):
        super().__init__(f"step {step}: {action} is illegal: {reason}")
        self.step = step
        self.action = action


class IncompleteDerivation(Exception):
    pass


# -- token rules for GenSubtoken at a primitive frontier --------------------

IDENT_FIRST = "ident_first"    # first piece of an identifier
IDENT_NEXT = "ident_next"      # continuation piece or <EOT>
STRING_OPEN = "string_open"    # only <SOS>
STRING_BODY = "string_body"    # content token or <EOS>
STRING_CLOSE = "string_close"  # only <EOS> (token-level mode, one content token seen)
LITERAL_FIRST = "literal_first"  # <SOS> or a single value token
CLOSE_EOT = "close_eot"        # only <EOT>
TOKEN_RULES = (IDENT_FIRST, IDENT_NEXT, STRING_OPEN, STRING_BODY, STRING_CLOSE, LITERAL_FIRST, CLOSE_EOT)


def token_allowed(rule: str, tok: str) -> bool:
    if not tok or tok == PAD:
        return False
    if rule == IDENT_FIRST:
        return tok not in SENTINELS and not tok.startswith(CONTINUATION)
    if rule == IDENT_NEXT:
        return tok == EOT or (tok.startswith(CONTINUATION) and len(tok) > len(CONTINUATION))
    if rule == STRING_OPEN:
        return tok == SOS
    if rule == STRING_BODY:
        return tok == EOS or tok not in SENTINELS
    if rule == STRING_CLOSE:
        return tok == EOS
    if rule == LITERAL_FIRST:
        return tok == SOS or (tok not in SENTINELS and not tok.startswith(CONTINUATION))
    if rule == CLOSE_EOT:
        return tok == EOT
    raise ValueError(rule)


@dataclass(frozen=True)
class ActionMask:
    """The actions permitted at one step."""

    constructors: tuple[Constructor, ...] = ()
    reduce: bool = False
    token_rule: str | None = None

    def permits(self, action: Action) -> bool:
        if isinstance(action, ApplyConstr):
            return action.constructor in self.constructors
        if isinstance(action, Reduce):
            return self.reduce
        return self.token_rule is not None and token_allowed(self.token_rule, action.token)


# -- derivation state ------------------------------------------------------


@dataclass
class _Frame:
    node: AbstractNode
    field_idx: int
    field_ids: list[int]
    parent_step: int  # step index of the ApplyConstr that created ``node``


@dataclass(frozen=True)
class Frontier:
    type: str
    cardinality: str
    label: str          # "root" or "f<k>"
    field_id: int       # 0 for root
    parent_step: int    # -1 for root
    items: int          # values already placed in this field
    owner: Constructor | None
    field: Field | None


@dataclass
class FrontierState:
    """Partial derivation. Cheap to copy for beam hypotheses."""

    grammar: Grammar
    subtokenize: bool = True
    root: AbstractNode | None = None
    stack: list = dc_field(default_factory=list)
    buffer: list = dc_field(default_factory=list)
    steps: int = 0
    next_field_id: int = 1

    @property
    def done(self) -> bool:
        return self.root is not None and not self.stack

    def copy(self) -> "FrontierState":
        # nodes are shared structurally; only the path being extended is cloned
        clone = FrontierState(self.grammar, self.subtokenize, None, [], list(self.buffer),
                              self.steps, self.next_field_id)
        if self.root is None:
            return clone
        mapping = {}

        def dup(n: AbstractNode) -> AbstractNode:
            new = AbstractNode(n.constructor, [list(c) if isinstance(c, list) else c for c in n.children])
            mapping[id(n)] = new
            return new

        # clone nodes on the open path; everything else is complete and immutable
        clone.root = dup(self.root)
        for k, frame in enumerate(self.stack):
            if k == 0:
                new_node = clone.root
            else:
                parent_old = self.stack[k - 1].node
                parent_new = mapping[id(parent_old)]
                new_node = dup(frame.node)
                _replace_child(parent_new, frame.node, new_node)
            clone.stack.append(_Frame(new_node, frame.field_idx, frame.field_ids, frame.parent_step))
        return clone

    def frontier(self) -> Frontier | None:
        if self.root is None:
            return Frontier(self.grammar.root_type, SINGLE, "root", 0, -1, 0, None, None)
        if not self.stack:
            return None
        top = self.stack[-1]
        f = top.node.constructor.fields[top.field_idx]
        value = top.node.children[top.field_idx]
        if f.cardinality == MULTIPLE:
            items = len(value)
        else:
            items = 0 if value is None else 1
        fid = top.field_ids[top.field_idx]
        return Frontier(f.type, f.cardinality, f"f{fid}", fid, top.parent_step, items, top.node.constructor, f)

    def apply(self, action: Action) -> None:
        mask = legal_actions(self, self.grammar)
        if not mask.permits(action):
            raise IllegalAction(self.steps, action, _why(self, mask))
        fr = self.frontier()
        if isinstance(action, ApplyConstr):
            c = action.constructor
            new = AbstractNode(c, [[] if f.cardinality == MULTIPLE else None for f in c.fields])
            ids = list(range(self.next_field_id, self.next_field_id + len(c.fields)))
            self.next_field_id += len(c.fields)
            self._place(new, fr)
            if c.fields:
                self.stack.append(_Frame(new, 0, ids, self.steps))
        elif isinstance(action, Reduce):
            self.stack[-1].field_idx += 1
        else:
            self.buffer.append(action.token)
            leaf = self._finished_leaf(fr.type)
            if leaf is not _PENDING:
                self.buffer = []
                self._place(leaf, fr)
        self.steps += 1
        self._pop_complete()

    def _place(self, value, fr: Frontier) -> None:
        if fr.owner is None:
            self.root = value
            return
        top = self.stack[-1]
        if fr.cardinality == MULTIPLE:
            top.node.children[top.field_idx].append(value)
        else:
            top.node.children[top.field_idx] = value
            top.field_idx += 1

    def _pop_complete(self) -> None:
        while self.stack and self.stack[-1].field_idx >= len(self.stack[-1].node.constructor.fields):
            self.stack.pop()

    def _finished_leaf(self, type_name: str):
        buf = self.buffer
        last = buf[-1]
        if buf[0] == SOS:
            if last == EOS and len(buf) >= 2:
                return "".join(buf[1:-1])
            return _PENDING
        if last != EOT:
            return _PENDING
        pieces = buf[:-1]
        if type_name == "identifier":
            return join_subtokens(pieces)
        tok = pieces[0]
        if tok in ("true", "false"):
            return tok == "true"
        return JsNumber(tok)


_PENDING = object()


def _replace_child(parent: AbstractNode, old: AbstractNode, new: AbstractNode) -> None:
    for i, c in enumerate(parent.children):
        if c is old:
            parent.children[i] = new
            return
        if isinstance(c, list):
            for j, item in enumerate(c):
                if item is old:
                    c[j] = new
                    return
    raise RuntimeError("open child not found under its parent")


def legal_actions(state: FrontierState, g: Grammar) -> ActionMask:
    fr = state.frontier()
    if fr is None:
        return ActionMask()
    can_close = (fr.cardinality == OPTIONAL and fr.items == 0) or fr.cardinality == MULTIPLE
    if not g.is_primitive(fr.type):
        return ActionMask(tuple(constructors_for_type(g, fr.type)), can_close, None)
    buf = state.buffer
    if not buf:
        rule = {"identifier": IDENT_FIRST, "string": STRING_OPEN}.get(fr.type, LITERAL_FIRST)
        return ActionMask((), can_close, rule)
    if buf[0] == SOS:
        if not state.subtokenize and len(buf) == 2:
            return ActionMask((), False, STRING_CLOSE)
        return ActionMask((), False, STRING_BODY)
    if fr.type == "identifier" and state.subtokenize:
        return ActionMask((), False, IDENT_NEXT)
    return ActionMask((), False, CLOSE_EOT)


def _why(state: FrontierState, mask: ActionMask) -> str:
    fr = state.frontier()
    if fr is None:
        return "derivation is already complete"
    return f"frontier {fr.label} of type {fr.type}{'?' if fr.cardinality == OPTIONAL else '*' if fr.cardinality == MULTIPLE else ''}"


# -- oracle and replay --------------------------------------------------------


def leaf_tokens(value, type_name: str, subtokenize_ids: bool = True) -> list[str]:
    if type_name == "identifier":
        if not isinstance(value, str) or not value:
            raise GrammarError(f"identifier leaf must be a non-empty string, got {value!r}")
        return (subtokenize(value) if subtokenize_ids else [value]) + [EOT]
    if isinstance(value, str):
        if subtokenize_ids:
            content = split_string_content(value)
        else:
            content = [value] if value else []
        return [SOS] + content + [EOS]
    if type_name == "string":
        raise GrammarError(f"string leaf must be a str, got {value!r}")
    if isinstance(value, bool):
        return ["true" if value else "false", EOT]
    if isinstance(value, JsNumber):
        return [value.raw, EOT]
    raise GrammarError(f"unsupported literal leaf {value!r}")


def oracle_actions(node: AbstractNode, g: Grammar, subtokenize: bool = True) -> list[Action]:
    """The unique action sequence whose replay rebuilds ``node``."""
    check_node(node, g, g.root_type)
    out: list[Action] = []

    def emit(n: AbstractNode) -> None:
        out.append(ApplyConstr(n.constructor))
        for f, value in zip(n.constructor.fields, n.children):
            if f.cardinality == MULTIPLE:
                items = value
            else:
                items = [] if value is None else [value]
            for item in items:
                if g.is_primitive(f.type):
                    out.extend(GenSubtoken(t) for t in leaf_tokens(item, f.type, subtokenize))
                else:
                    emit(item)
            if f.cardinality == MULTIPLE or (f.cardinality == OPTIONAL and value is None):
                out.append(REDUCE)

    emit(node)
    return out


def replay(actions: list[Action], g: Grammar, subtokenize: bool = True) -> AbstractNode:
    state = FrontierState(g, subtokenize)
    for action in actions:
        state.apply(action)
    if not state.done:
        fr = state.frontier()
        raise IncompleteDerivation(f"sequence ended after {state.steps} actions with frontier {fr.label} open")
    return state.root


def dump_actions(actions: list[Action], g: Grammar, subtokenize: bool = True) -> str:
    """One line per action, ``t<idx>\\t<frontier-field>\\t<action>``.

    Identifier subtoken runs share a step index (``t7,1``, ``t7,2``, ...);
    every other action gets its own.
    """
    state = FrontierState(g, subtokenize)
    lines = []
    t, sub = 0, 0
    for action in actions:
        fr = state.frontier()
        if fr is None:
            raise IllegalAction(state.steps, action, "derivation is already complete")
        in_ident_run = isinstance(action, GenSubtoken) and fr.type == "identifier"
        if in_ident_run:
            if sub == 0:
                t += 1
            sub += 1
            idx = f"{t},{sub}"
        else:
            t += 1
            idx = str(t)
        label = fr.label
        state.apply(action)
        if in_ident_run and action.token == EOT:
            sub = 0
        lines.append(f"t{idx}\t{label}\t{action}")
    return "\n".join(lines) + "\n"
