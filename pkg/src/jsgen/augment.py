"""Auxiliary-task data built from a variable semantic table."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .jsfront.convert import is_identifier_name
from .jsfront.parser import RESERVED
from .prep.corpus import CorpusError, Example, read_jsonl, write_jsonl

log = logging.getLogger(__name__)

DISPLAY_VERBS = ("展示", "显示", "动态展示")


@dataclass(frozen=True)
class SemanticEntry:
    name: str
    semantic: str


def valid_entry(entry: SemanticEntry) -> bool:
    return is_identifier_name(entry.name) and entry.name not in RESERVED and bool(entry.semantic.strip())


def load_table(path) -> list[SemanticEntry]:
    entries = []
    for lineno, rec in enumerate(read_jsonl(path), 1):
        if not isinstance(rec, dict) or not isinstance(rec.get("name"), str) \
                or not isinstance(rec.get("semantic"), str):
            raise CorpusError("semantic-table record needs string 'name' and 'semantic'", lineno)
        entries.append(SemanticEntry(rec["name"], rec["semantic"]))
    return entries


def save_table(path, entries) -> None:
    write_jsonl(path, [{"name": e.name, "semantic": e.semantic} for e in entries])


def _unique_valid(entries):
    seen = set()
    for e in entries:
        if not valid_entry(e):
            log.warning("skipping semantic-table entry %r: invalid identifier or empty semantic", e.name)
            continue
        if e in seen:
            continue
        seen.add(e)
        yield e


def build_cg_task(entries, prefix: str = "展示", rotate_verbs: bool = False, seed: int = 0) -> list[Example]:
    """Code-generation rewrite: ``展示<semantic>`` -> ``{name;}``.

    With ``rotate_verbs`` the display verb is sampled per entry from
    DISPLAY_VERBS instead of always using ``prefix``.
    """
    rng = random.Random(seed)
    out = []
    for e in _unique_valid(entries):
        verb = rng.choice(DISPLAY_VERBS) if rotate_verbs else prefix
        out.append(Example(verb + e.semantic, "{" + e.name + ";}", provenance="aux_cg"))
    return out


def build_vp_task(entries) -> list[Example]:
    """Variable-name prediction pairs. The code side is a bare name, so
    only sequence models can consume these."""
    return [Example(e.semantic, e.name, provenance="aux_vp") for e in _unique_valid(entries)]


@dataclass
class Schedule:
    """What to train on, epoch by epoch.

    ``phases`` is a list of (examples, epochs). In ``mix`` mode there is one
    phase whose pool is reshuffled every epoch.
    """

    mode: str
    phases: list[tuple[list[Example], int]]

    @property
    def total_epochs(self) -> int:
        return sum(n for _, n in self.phases)

    def epochs(self, seed: int = 0):
        """Yield (epoch_number, shuffled examples) across all phases."""
        rng = random.Random(seed)
        epoch = 0
        for pool, n in self.phases:
            for _ in range(n):
                epoch += 1
                order = list(pool)
                rng.shuffle(order)
                yield epoch, order


def merge_tasks(main, aux, mode: str = "mix", epochs: int = 300, pretrain_epochs: int = 100,
                vocab=None) -> Schedule:
    """Combine main and auxiliary corpora into a training schedule.

    ``mix`` pools both sets uniformly; ``pretrain_phases`` trains on the
    auxiliary set for ``pretrain_epochs`` and then on the main set for
    ``epochs``. If ``vocab`` is given, every example must be expressible in it.
    """
    main, aux = list(main), list(aux)
    if vocab is not None:
        for ex in main + aux:
            missing = [t for t in ex.tokens if t not in vocab]
            if missing:
                from .prep.vocab import VocabularyMismatch

                raise VocabularyMismatch(f"tokens {missing[:5]} of {ex.description!r} are not in the vocabulary")
    if mode == "mix":
        return Schedule(mode, [(main + aux, epochs)])
    if mode == "pretrain_phases":
        return Schedule(mode, [(aux, pretrain_epochs), (main, epochs)])
    if mode == "off":
        return Schedule(mode, [(main, epochs)])
    raise ValueError(f"unknown augmentation mode {mode!r}")
