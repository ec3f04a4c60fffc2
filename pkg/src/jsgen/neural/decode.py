"""Grammar-masked beam search, greedy decoding, and action rescoring."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import torch

from ..jsfront import IllegalJsAst, abstract_to_code
from ..transit import (MAX_ACTIONS, REDUCE, UNK, ApplyConstr, FrontierState, GenSubtoken, legal_actions,
                       token_allowed)
from .data import (RULE_ID, collate, copy_mask, frontier_field, make_instance, prev_action_code,
                   production_mask)
from .model import DecoderStep, Seq2Tree
from .train import step_log_probs

log = logging.getLogger(__name__)


@dataclass
class Hypothesis:
    state: FrontierState
    actions: list = field(default_factory=list)
    score: float = 0.0
    step: DecoderStep | None = None
    history: list = field(default_factory=list)
    completed: bool = False
    code: str | None = None


@dataclass(frozen=True)
class Candidate:
    code: str
    score: float
    actions: tuple


class _Context:
    """Encoded input plus per-input lookup tables shared by all hypotheses."""

    def __init__(self, model: Seq2Tree, tokens: list[str], include_unk: bool = False):
        if not tokens:
            raise ValueError("empty description")
        self.model, self.tokens = model, list(tokens)
        ids = torch.tensor([model.vocab.ids(tokens)])
        self.enc = model.encode(ids, torch.tensor([len(tokens)]))
        self.root = model.initial_step(self.enc)
        unk = model.vocab.id(UNK)
        masks = model.rule_masks.numpy().copy()
        if not include_unk:
            masks[:, unk] = False
        self.rule_tokens = {rule: np.nonzero(masks[i])[0] for rule, i in RULE_ID.items()}

    def expand(self, hyps: list[Hypothesis]):
        """Advance every hypothesis by one decoder step; returns the new
        DecoderStep rows and per-hypothesis (mask, numpy log-dists)."""
        m = self.model
        k = len(hyps)
        enc = self.enc.select(torch.zeros(k, dtype=torch.long))
        if hyps[0].step is None:
            prev = DecoderStep(*(x.expand(k, -1) for x in (self.root.h, self.root.c, self.root.att, self.root.ctx)))
        else:
            prev = DecoderStep(*(torch.stack([getattr(h.step, a) for h in hyps]) for a in ("h", "c", "att", "ctx")))
        codes = [prev_action_code(h.actions[-1] if h.actions else None, m.vocab) for h in hyps]
        prev_emb = m.prev_action_embedding(torch.tensor([c[0] for c in codes]), torch.tensor([c[1] for c in codes]))
        zero = enc.states.new_zeros(m.config.hidden)
        fids, parents, masks = [], [], []
        for h in hyps:
            fid, parent = frontier_field(h.state, m.fields)
            fids.append(fid)
            parents.append(h.history[parent] if parent >= 0 else zero)
            masks.append(legal_actions(h.state, m.grammar))
        step = m.decode_step(prev, prev_emb, torch.tensor(fids), torch.stack(parents), enc)
        prod = torch.from_numpy(np.stack([production_mask(mk, m.vocab) for mk in masks]))
        rules = torch.tensor([RULE_ID[mk.token_rule] if mk.token_rule else -1 for mk in masks])
        copy = torch.from_numpy(np.stack([copy_mask(mk.token_rule, self.tokens) for mk in masks]))
        reduce_ok = torch.tensor([bool(mk.reduce and mk.token_rule) for mk in masks])
        dists = m.log_distributions(step, enc, prod, rules, copy, reduce_ok)
        dists = [d.detach().double().numpy() for d in dists]
        return step, [(mk, [d[i] for d in dists]) for i, mk in enumerate(masks)]

    def candidates(self, mask, dists, limit: int) -> list[tuple[object, float]]:
        """The ``limit`` most probable legal actions, ties kept in a fixed order."""
        log_prod, log_gen, log_copy, log_gate = dists
        vocab, g = self.model.vocab, self.model.grammar
        if mask.token_rule is None:
            idx = np.nonzero(production_mask(mask, vocab))[0]
            lps = log_prod[idx]
            actions = [REDUCE if j == vocab.reduce_id else ApplyConstr(g.constructor(vocab.productions[j]))
                       for j in idx]
        else:
            idx = self.rule_tokens[mask.token_rule]
            lp = log_gate[0] + log_gen[idx]
            toks = [vocab.tokens[j] for j in idx]
            where = {t: n for n, t in enumerate(toks)}
            extra_toks, extra_lp = [], []
            by_token: dict[str, list[float]] = {}
            for i, x in enumerate(self.tokens):
                if token_allowed(mask.token_rule, x):
                    by_token.setdefault(x, []).append(log_copy[i])
            for x, vals in by_token.items():
                c = log_gate[1] + np.logaddexp.reduce(np.array(vals))
                if x in where:
                    lp[where[x]] = np.logaddexp(lp[where[x]], c)
                else:
                    extra_toks.append(x)
                    extra_lp.append(c)
            head_actions, head_lp = [], []
            if mask.reduce:
                head_actions, head_lp = [REDUCE], [log_gate[2]]
            actions = head_actions + [None] * len(toks) + [None] * len(extra_toks)
            all_toks = [None] * len(head_actions) + toks + extra_toks
            lps = np.concatenate([np.array(head_lp, dtype=np.float64), lp, np.array(extra_lp, dtype=np.float64)])
            order = np.argsort(-lps, kind="stable")[:limit]
            return [(actions[j] if actions[j] is not None else GenSubtoken(all_toks[j]), float(lps[j]))
                    for j in order]
        order = np.argsort(-lps, kind="stable")[:limit]
        return [(actions[j], float(lps[j])) for j in order]


def _child(parent: Hypothesis, action, lp: float, step: DecoderStep, row: int) -> Hypothesis:
    state = parent.state.copy()
    state.apply(action)
    s = DecoderStep(step.h[row], step.c[row], step.att[row], step.ctx[row])
    return Hypothesis(state, parent.actions + [action], parent.score + lp, s, parent.history + [step.h[row]])


def _finish(h: Hypothesis, model: Seq2Tree) -> bool:
    """Convert a completed derivation to code; False if it is not legal JavaScript."""
    try:
        h.code = abstract_to_code(h.state.root, model.grammar)
    except IllegalJsAst as e:
        log.debug("discarding hypothesis: %s", e)
        return False
    h.completed = True
    return True


def beam_decode(model: Seq2Tree, tokens: list[str], width: int = 5, max_actions: int = MAX_ACTIONS) -> list[Candidate]:
    """Up to ``width`` completed programs, best first, scored by summed log-probability.

    Derivations that complete but are not legal JavaScript are dropped.
    """
    if width < 1:
        raise ValueError("beam width must be positive")
    with torch.no_grad():
        ctx = _Context(model, tokens)
        live = [Hypothesis(FrontierState(model.grammar, model.config.subtokenize))]
        done: list[Hypothesis] = []
        for _ in range(max_actions):
            if not live or len(done) >= width:
                break
            step, per_hyp = ctx.expand(live)
            pool = []
            for i, (mask, dists) in enumerate(per_hyp):
                for action, lp in ctx.candidates(mask, dists, width):
                    pool.append((live[i].score + lp, i, action, lp))
            pool.sort(key=lambda c: -c[0])
            new_live = []
            # a discarded derivation keeps its slot, so width 1 stays greedy
            for _, i, action, lp in pool[:width - len(done)]:
                child = _child(live[i], action, lp, step, i)
                if child.state.done:
                    if _finish(child, model):
                        done.append(child)
                else:
                    new_live.append(child)
            live = new_live
    done.sort(key=lambda h: -h.score)
    return [Candidate(h.code, h.score, tuple(h.actions)) for h in done[:width]]


def greedy_decode(model: Seq2Tree, tokens: list[str], max_actions: int = MAX_ACTIONS) -> Candidate | None:
    """Follow the single most probable legal action at every step."""
    with torch.no_grad():
        ctx = _Context(model, tokens)
        h = Hypothesis(FrontierState(model.grammar, model.config.subtokenize))
        for _ in range(max_actions):
            step, [(mask, dists)] = ctx.expand([h])
            action, lp = ctx.candidates(mask, dists, 1)[0]
            h = _child(h, action, lp, step, 0)
            if h.state.done:
                return Candidate(h.code, h.score, tuple(h.actions)) if _finish(h, model) else None
    return None


def score_actions(model: Seq2Tree, tokens: list[str], actions: list) -> list[float]:
    """Per-step log-probabilities of ``actions`` under teacher forcing."""
    inst = make_instance(tokens, list(actions), model.vocab, model.grammar, model.fields, model.config.subtokenize)
    with torch.no_grad():
        lp = step_log_probs(model, collate([inst]))[0]
    return [float(x) for x in lp]


def action_distribution(model: Seq2Tree, tokens: list[str], prefix: list) -> dict[str, float]:
    """Full masked distribution after ``prefix``: action text -> probability."""
    with torch.no_grad():
        ctx = _Context(model, tokens, include_unk=True)
        h = Hypothesis(FrontierState(model.grammar, model.config.subtokenize))
        for action in prefix:
            step, _ = ctx.expand([h])
            h = _child(h, action, 0.0, step, 0)
        _, [(mask, dists)] = ctx.expand([h])
        full = ctx.candidates(mask, dists, 10 ** 9)
    return {str(a): float(np.exp(lp)) for a, lp in full}
