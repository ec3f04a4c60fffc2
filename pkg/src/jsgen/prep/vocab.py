"""Shared subtoken vocabulary and the constructor (action) index table."""
from __future__ import annotations

import json
from collections import Counter

from ..grammar import Grammar
from ..jsfront import parse_js, to_abstract
from ..transit import EOS, EOT, PAD, SOS, UNK, GenSubtoken, oracle_actions

MAX_PLACEHOLDERS = 10
RESERVED = [PAD, UNK, EOT, SOS, EOS] + [f"<STR{k}>" for k in range(1, MAX_PLACEHOLDERS + 1)]
REDUCE_NAME = "Reduce"


class VocabularyMismatch(Exception):
    pass


class Vocabulary:
    def __init__(self, tokens: list[str], productions: list[str]):
        if tokens[:len(RESERVED)] != RESERVED:
            raise ValueError("vocabulary must start with the reserved symbols")
        if len(set(tokens)) != len(tokens):
            raise ValueError("duplicate vocabulary entries")
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        # constructors in grammar order, then Reduce
        self.productions = list(productions)
        self.production_index = {p: i for i, p in enumerate(self.productions)}

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, tok):
        return tok in self.index

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.tokens == other.tokens \
            and self.productions == other.productions

    def id(self, tok: str) -> int:
        return self.index.get(tok, self.index[UNK])

    def ids(self, toks) -> list[int]:
        return [self.id(t) for t in toks]

    @property
    def reduce_id(self) -> int:
        return self.production_index[REDUCE_NAME]

    def check_grammar(self, g: Grammar) -> None:
        if self.productions != [c.name for c in g.constructors] + [REDUCE_NAME]:
            raise VocabularyMismatch("grammar constructors differ from the vocabulary's action table")

    def to_json(self) -> dict:
        return {"tokens": self.tokens, "productions": self.productions}

    @classmethod
    def from_json(cls, data: dict) -> "Vocabulary":
        return cls(data["tokens"], data["productions"])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, indent=0)

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def code_subtokens(code: str, g: Grammar, subtokenize: bool = True) -> list[str]:
    actions = oracle_actions(to_abstract(parse_js(code), g), g, subtokenize)
    return [a.token for a in actions if isinstance(a, GenSubtoken)]


def build_vocab(examples, g: Grammar, min_count: int = 1, subtokenize: bool = True) -> Vocabulary:
    """Index description tokens and code subtokens seen ``min_count`` times.

    Examples whose code is not a program (variable-prediction pairs) add
    their description tokens only.
    """
    counts: Counter[str] = Counter()
    for ex in examples:
        counts.update(ex.tokens)
        if ex.provenance != "aux_vp":
            counts.update(code_subtokens(ex.code, g, subtokenize))
    reserved = set(RESERVED)
    kept = sorted((t for t, c in counts.items() if c >= min_count and t not in reserved),
                  key=lambda t: (-counts[t], t))
    productions = [c.name for c in g.constructors] + [REDUCE_NAME]
    return Vocabulary(RESERVED + kept, productions)
