"""Teacher-forcing features: oracle actions turned into per-step arrays."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..grammar import Grammar
from ..jsfront import parse_js, to_abstract
from ..prep.corpus import Example
from ..prep.vocab import REDUCE_NAME, Vocabulary
from ..transit import (TOKEN_RULES, UNK, ActionMask, ApplyConstr, FrontierState, GenSubtoken, Reduce,
                       legal_actions, oracle_actions, token_allowed)

RULE_ID = {r: i for i, r in enumerate(TOKEN_RULES)}
PREV_NONE, PREV_PROD, PREV_TOKEN = 0, 1, 2


def production_mask(mask: ActionMask, vocab: Vocabulary) -> np.ndarray:
    out = np.zeros(len(vocab.productions), dtype=bool)
    for c in mask.constructors:
        out[vocab.production_index[c.name]] = True
    if mask.reduce and mask.token_rule is None:
        out[vocab.reduce_id] = True
    return out


def copy_mask(rule: str | None, tokens: list[str]) -> np.ndarray:
    if rule is None:
        return np.zeros(len(tokens), dtype=bool)
    return np.array([token_allowed(rule, t) for t in tokens], dtype=bool)


def frontier_field(state: FrontierState, fields: dict) -> tuple[int, int]:
    fr = state.frontier()
    if fr.owner is None:
        return 0, -1
    return fields[(fr.owner.name, fr.field.name)], fr.parent_step


def prev_action_code(action, vocab: Vocabulary) -> tuple[int, int]:
    if action is None:
        return PREV_NONE, 0
    if isinstance(action, ApplyConstr):
        return PREV_PROD, vocab.production_index[action.constructor.name]
    if isinstance(action, Reduce):
        return PREV_PROD, vocab.reduce_id
    return PREV_TOKEN, vocab.id(action.token)


@dataclass
class Instance:
    """Arrays for one example; T steps, N description tokens."""

    tokens: list[str]
    token_ids: np.ndarray     # (N,)
    prev_kind: np.ndarray     # (T,)
    prev_id: np.ndarray       # (T,)
    field_id: np.ndarray      # (T,)
    parent: np.ndarray        # (T,) step index or -1
    is_prim: np.ndarray       # (T,) bool
    prod_mask: np.ndarray     # (T, P) bool
    target_prod: np.ndarray   # (T,)
    rule_id: np.ndarray       # (T,) -1 at constructor frontiers
    reduce_ok: np.ndarray     # (T,) bool, primitive frontiers only
    copy_ok: np.ndarray       # (T, N) bool
    target_reduce: np.ndarray  # (T,) bool, primitive frontiers only
    target_tok: np.ndarray    # (T,)
    gen_ok: np.ndarray        # (T,) bool: generation path can produce the target
    copy_match: np.ndarray    # (T, N) bool

    @property
    def steps(self) -> int:
        return len(self.prev_kind)


def make_instance(tokens: list[str], actions: list, vocab: Vocabulary, g: Grammar, fields: dict,
                  subtokenize: bool = True) -> Instance:
    if not tokens:
        raise ValueError("empty description")
    T, N, P = len(actions), len(tokens), len(vocab.productions)
    arr = dict(
        prev_kind=np.zeros(T, np.int64), prev_id=np.zeros(T, np.int64), field_id=np.zeros(T, np.int64),
        parent=np.full(T, -1, np.int64), is_prim=np.zeros(T, bool), prod_mask=np.zeros((T, P), bool),
        target_prod=np.zeros(T, np.int64), rule_id=np.full(T, -1, np.int64), reduce_ok=np.zeros(T, bool),
        copy_ok=np.zeros((T, N), bool), target_reduce=np.zeros(T, bool), target_tok=np.zeros(T, np.int64),
        gen_ok=np.zeros(T, bool), copy_match=np.zeros((T, N), bool),
    )
    unk = vocab.id(UNK)
    state = FrontierState(g, subtokenize)
    prev = None
    for t, action in enumerate(actions):
        mask = legal_actions(state, g)
        arr["prev_kind"][t], arr["prev_id"][t] = prev_action_code(prev, vocab)
        arr["field_id"][t], arr["parent"][t] = frontier_field(state, fields)
        if mask.token_rule is None:
            arr["prod_mask"][t] = production_mask(mask, vocab)
            name = REDUCE_NAME if isinstance(action, Reduce) else action.constructor.name
            arr["target_prod"][t] = vocab.production_index[name]
        else:
            arr["is_prim"][t] = True
            arr["rule_id"][t] = RULE_ID[mask.token_rule]
            arr["reduce_ok"][t] = mask.reduce
            arr["copy_ok"][t] = copy_mask(mask.token_rule, tokens)
            if isinstance(action, Reduce):
                arr["target_reduce"][t] = True
            else:
                match = np.array([x == action.token for x in tokens]) & arr["copy_ok"][t]
                arr["copy_match"][t] = match
                in_vocab = action.token in vocab
                arr["target_tok"][t] = vocab.id(action.token) if in_vocab else unk
                arr["gen_ok"][t] = in_vocab or not match.any()
        state.apply(action)
        prev = action
    return Instance(list(tokens), np.array(vocab.ids(tokens), np.int64), **arr)


def example_actions(example: Example, g: Grammar, subtokenize: bool = True) -> list:
    return oracle_actions(to_abstract(parse_js(example.code), g), g, subtokenize)


def make_instances(examples, vocab: Vocabulary, g: Grammar, fields: dict, subtokenize: bool = True):
    return [make_instance(ex.tokens, example_actions(ex, g, subtokenize), vocab, g, fields, subtokenize)
            for ex in examples]


def collate(batch: list[Instance]) -> dict[str, torch.Tensor]:
    """Pad a batch: step arrays to (B, T, ...), description arrays to N."""
    B = len(batch)
    T = max(x.steps for x in batch)
    N = max(len(x.tokens) for x in batch)
    out = {
        "token_ids": np.zeros((B, N), np.int64),
        "lengths": np.array([len(x.tokens) for x in batch], np.int64),
        "step_mask": np.zeros((B, T), bool),
    }
    for i, x in enumerate(batch):
        out["token_ids"][i, :len(x.tokens)] = x.token_ids
        out["step_mask"][i, :x.steps] = True
    for name in ("prev_kind", "prev_id", "field_id", "is_prim", "target_prod", "reduce_ok",
                 "target_reduce", "target_tok", "gen_ok"):
        a = np.zeros((B, T), batch[0].__dict__[name].dtype)
        for i, x in enumerate(batch):
            a[i, :x.steps] = x.__dict__[name]
        out[name] = a
    for name, fill in (("parent", -1), ("rule_id", -1)):
        a = np.full((B, T), fill, np.int64)
        for i, x in enumerate(batch):
            a[i, :x.steps] = x.__dict__[name]
        out[name] = a
    P = batch[0].prod_mask.shape[1]
    out["prod_mask"] = np.zeros((B, T, P), bool)
    for name in ("copy_ok", "copy_match"):
        out[name] = np.zeros((B, T, N), bool)
    for i, x in enumerate(batch):
        out["prod_mask"][i, :x.steps] = x.prod_mask
        out["copy_ok"][i, :x.steps, :len(x.tokens)] = x.copy_ok
        out["copy_match"][i, :x.steps, :len(x.tokens)] = x.copy_match
    # padded steps get a harmless always-legal production so softmax stays finite
    out["prod_mask"][~out["step_mask"]] = True
    return {k: torch.from_numpy(v) for k, v in out.items()}
