"""End-to-end pipelines shared by the CLI, scripts and acceptance tests."""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass

import torch

from .augment import build_cg_task, merge_tasks
from .grammar import Grammar, load_grammar
from .metrics import EvalReport, evaluate
from .neural import ModelConfig, Seq2Tree, TrainConfig, beam_decode, make_instances, train
from .prep.corpus import Example, preprocess
from .prep.vocab import build_vocab
from .synth import SyntheticSpec, generate

log = logging.getLogger(__name__)


def split_validation(examples: list[Example], fraction: float, seed: int):
    """Seeded shuffle; the last ``fraction`` becomes validation."""
    order = list(examples)
    random.Random(seed).shuffle(order)
    n_val = int(round(len(order) * fraction))
    if n_val == 0:
        return order, []
    return order[:-n_val], order[-n_val:]


def preprocess_all(examples) -> tuple[list[Example], list[tuple[int, str]]]:
    out, problems = [], []
    for i, ex in enumerate(examples):
        p, warnings = preprocess(ex)
        out.append(p)
        problems.extend((i, w) for w in warnings)
    return out, problems


def fit(train_main: list[Example], val: list[Example], aux: list[Example], mode: str, model_cfg: ModelConfig,
        train_cfg: TrainConfig, g: Grammar, pretrain_epochs: int = 100, curve_path=None):
    """Build the vocabulary from everything trained on, then train."""
    torch.manual_seed(train_cfg.seed)
    pool = train_main + (aux if mode != "off" else [])
    vocab = build_vocab(pool, g, subtokenize=model_cfg.subtokenize)
    model = Seq2Tree(model_cfg, vocab, g)
    schedule = merge_tasks(train_main, aux if mode != "off" else [], mode=mode, epochs=train_cfg.epochs,
                           pretrain_epochs=pretrain_epochs)
    phases = [(make_instances(exs, vocab, g, model.fields, model_cfg.subtokenize), n) for exs, n in schedule.phases]
    val_inst = make_instances(val, vocab, g, model.fields, model_cfg.subtokenize)
    curve = train(model, phases, val_inst, train_cfg, curve_path=curve_path)
    return model, curve


def decode_all(model: Seq2Tree, examples: list[Example], width: int = 5) -> list[list[str]]:
    return [[c.code for c in beam_decode(model, ex.tokens, width)] for ex in examples]


def report_for(model: Seq2Tree, examples: list[Example], width: int = 5) -> EvalReport:
    preds = decode_all(model, examples, width)
    return evaluate(preds, [ex.code for ex in examples], [ex.category for ex in examples], k=width)


@dataclass
class TaResult:
    seed: int
    mode: str
    report: EvalReport
    seconds: float
    epochs_run: int


def ta_experiment(seed: int, mode: str, model_cfg: ModelConfig, train_cfg: TrainConfig,
                  spec: SyntheticSpec | None = None, val_fraction: float = 0.1) -> TaResult:
    """Train on a synthetic corpus with or without the table-derived task; score
    the held-out-identifier test split."""
    start = time.perf_counter()
    g = load_grammar()
    spec = spec or SyntheticSpec(seed=seed)
    corpus = generate(spec)
    main, _ = preprocess_all(corpus.train)
    test, _ = preprocess_all(corpus.test)
    train_main, val = split_validation(main, val_fraction, seed)
    aux = build_cg_task(corpus.table)
    cfg = TrainConfig(**{**train_cfg.to_json(), "seed": seed})
    model, curve = fit(train_main, val, aux, mode, model_cfg, cfg, g)
    report = report_for(model, test)
    return TaResult(seed, mode, report, time.perf_counter() - start, len(curve))


def overfit_experiment(n: int, seed: int, model_cfg: ModelConfig, train_cfg: TrainConfig) -> tuple[float, int]:
    """Train on ``n`` synthetic examples and return (train top-1 %, epochs run)."""
    g = load_grammar()
    per_cat = -(-n // 4)
    spec = SyntheticSpec(counts={c: per_cat for c in ("STE", "OLE", "CE", "DPE")}, heldout=0, seed=seed)
    examples, _ = preprocess_all(generate(spec).train[:n])
    model, curve = fit(examples, [], [], "off", model_cfg, train_cfg, g)
    hits = sum(bool(c) and c[0].code == ex.code for c, ex in
               zip((beam_decode(model, ex.tokens, 5) for ex in examples), examples))
    return 100.0 * hits / len(examples), len(curve)
