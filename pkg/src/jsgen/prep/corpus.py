"""Examples, the preprocessing pipeline, and JSON Lines corpus I/O."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from ..jsfront import canonicalize
from .literals import replace_string_literals, simplify_member_access
from .text import tokenize_description

log = logging.getLogger(__name__)

CATEGORIES = ("STE", "OLE", "CE", "DPE")
PROVENANCES = ("main", "aux_cg", "aux_vp")


class CorpusError(Exception):
    """Unreadable corpus or malformed record; carries the line number."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass
class Example:
    description: str
    code: str
    category: str | None = None
    provenance: str = "main"
    literals: dict[str, str] = field(default_factory=dict)

    @property
    def tokens(self) -> list[str]:
        return tokenize_description(self.description)

    def to_json(self) -> dict:
        rec = {"description": self.description, "code": self.code}
        if self.category is not None:
            rec["category"] = self.category
        if self.literals:
            rec["literals"] = self.literals
        if self.provenance != "main":
            rec["provenance"] = self.provenance
        return rec

    @classmethod
    def from_json(cls, rec: dict) -> "Example":
        if not isinstance(rec, dict):
            raise ValueError("record is not a JSON object")
        for key in ("description", "code"):
            if not isinstance(rec.get(key), str):
                raise ValueError(f"missing or non-string {key!r}")
        category = rec.get("category")
        if category is not None and category not in CATEGORIES:
            raise ValueError(f"unknown category {category!r}")
        provenance = rec.get("provenance", "main")
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        return cls(rec["description"], rec["code"], category, provenance, dict(rec.get("literals") or {}))


def preprocess(example: Example) -> tuple[Example, list[str]]:
    """Canonicalize, replace literals, simplify member access.

    Returns the new example and a list of warnings (literals that could not
    be located in the description). Raises JsSyntaxError on bad code.
    """
    code = canonicalize(example.code)
    description, code, mapping, unmatched = replace_string_literals(example.description, code)
    code = simplify_member_access(code)
    warnings = [f"string literal {v!r} not found in description" for v in unmatched]
    literals = {**example.literals, **mapping}
    return Example(description, code, example.category, example.provenance, literals), warnings


def read_jsonl(path) -> list[dict]:
    records = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise CorpusError(f"cannot read {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise CorpusError(f"malformed JSON: {e.msg}", lineno) from e
    return records


def write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=False) + "\n")


def load_corpus(path) -> list[Example]:
    out = []
    for lineno, rec in enumerate(read_jsonl(path), 1):
        try:
            out.append(Example.from_json(rec))
        except ValueError as e:
            raise CorpusError(str(e), lineno) from e
    return out


def save_corpus(path, examples) -> None:
    write_jsonl(path, [ex.to_json() for ex in examples])
