"""Evaluation: exact match, BLEU, edit similarity, variable usage."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

from .jsfront import JsSyntaxError, canonicalize, code_tokens, parse_js
from .prep.corpus import CATEGORIES


def _canon(code: str) -> str | None:
    try:
        return canonicalize(code)
    except (JsSyntaxError, RecursionError):
        return None


def exact_match(candidates: list[str], reference: str, k: int = 5) -> tuple[bool, bool]:
    """(top-1 hit, top-k hit) on canonical forms. Unparseable candidates never match."""
    ref = _canon(reference)
    if ref is None:
        raise ValueError(f"reference does not parse: {reference!r}")
    hits = [_canon(c) == ref for c in candidates[:k]]
    return bool(hits and hits[0]), any(hits)


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(predictions: list[list[str]], references: list[list[str]], max_n: int = 4) -> float:
    """Corpus BLEU-4 with uniform weights, no smoothing, times 100."""
    if not predictions or len(predictions) != len(references):
        raise ValueError("need a non-empty corpus with one reference per prediction")
    matched = [0] * max_n
    total = [0] * max_n
    pred_len = ref_len = 0
    for pred, ref in zip(predictions, references):
        pred_len += len(pred)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            p, r = _ngrams(pred, n), _ngrams(ref, n)
            matched[n - 1] += sum(min(c, r[g]) for g, c in p.items())
            total[n - 1] += max(len(pred) - n + 1, 0)
    if min(matched) == 0:
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(matched, total)) / max_n
    bp = 1.0 if pred_len > ref_len else math.exp(1 - ref_len / pred_len)
    return 100.0 * bp * math.exp(log_p)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(prediction: str, reference: str) -> float:
    longest = max(len(prediction), len(reference))
    if longest == 0:
        return 100.0
    return 100.0 * (1 - levenshtein(prediction, reference) / longest)


def identifiers(code: str) -> Counter[str]:
    """Multiset of every Identifier name in ``code``, member properties included."""
    out: Counter[str] = Counter()

    def walk(n):
        if isinstance(n, list):
            for x in n:
                walk(x)
        elif isinstance(n, dict):
            if n.get("type") == "Identifier":
                out[n["name"]] += 1
            for v in n.values():
                walk(v)

    walk(parse_js(code))
    return out


def variable_usage(prediction: str | None, reference: str) -> tuple[int, int, int]:
    """(tp, fp, fn) with multiset semantics."""
    ref = identifiers(reference)
    try:
        pred = identifiers(prediction) if prediction is not None else None
    except (JsSyntaxError, RecursionError):
        pred = None
    if pred is None:
        return 0, 0, sum(ref.values())
    tp = sum((pred & ref).values())
    return tp, sum(pred.values()) - tp, sum(ref.values()) - tp


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return 100 * p, 100 * r, 100 * f


@dataclass
class EvalReport:
    n: int
    acc_1: float
    acc_5: float
    bleu: float
    edit_sim: float
    var_precision: float
    var_recall: float
    var_f1: float
    categories: dict[str, "EvalReport"] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["categories"] = {k: v.to_json() for k, v in self.categories.items()}
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2, sort_keys=True)

    def table(self) -> str:
        head = f"{'split':<8}{'n':>6}{'Acc-1':>8}{'Acc-5':>8}{'BLEU':>8}{'EditSim':>9}{'VarP':>8}{'VarR':>8}{'VarF1':>8}"
        rows = [head, "-" * len(head), self._row("all")]
        rows += [r._row(k) for k, r in self.categories.items()]
        return "\n".join(rows)

    def _row(self, name: str) -> str:
        return (f"{name:<8}{self.n:>6}{self.acc_1:>8.2f}{self.acc_5:>8.2f}{self.bleu:>8.2f}{self.edit_sim:>9.2f}"
                f"{self.var_precision:>8.2f}{self.var_recall:>8.2f}{self.var_f1:>8.2f}")


def _top1_text(candidates: list[str]) -> str:
    if not candidates:
        return ""
    return _canon(candidates[0]) or candidates[0]


def evaluate(candidate_lists: list[list[str]], references: list[str], categories=None, k: int = 5) -> EvalReport:
    """Aggregate metrics over a test set; an empty candidate list is a miss."""
    if not references or len(candidate_lists) != len(references):
        raise ValueError("need one candidate list per reference")
    report = _aggregate(candidate_lists, references, k)
    if categories is not None:
        for cat in CATEGORIES:
            idx = [i for i, c in enumerate(categories) if c == cat]
            if idx:
                report.categories[cat] = _aggregate([candidate_lists[i] for i in idx],
                                                    [references[i] for i in idx], k)
    return report


def _aggregate(candidate_lists, references, k) -> EvalReport:
    top1 = topk = 0
    preds_tok, refs_tok, sims = [], [], []
    tp = fp = fn = 0
    for cands, ref in zip(candidate_lists, references):
        a, b = exact_match(cands, ref, k)
        top1 += a
        topk += b
        ref_c = canonicalize(ref)
        pred_c = _top1_text(cands)
        try:
            preds_tok.append(code_tokens(pred_c))
        except JsSyntaxError:
            preds_tok.append(list(pred_c))
        refs_tok.append(code_tokens(ref_c))
        sims.append(edit_similarity(pred_c, ref_c))
        c = variable_usage(cands[0] if cands else None, ref)
        tp, fp, fn = tp + c[0], fp + c[1], fn + c[2]
    n = len(references)
    p, r, f = prf(tp, fp, fn)
    return EvalReport(n, 100 * top1 / n, 100 * topk / n, corpus_bleu(preds_tok, refs_tok),
                      sum(sims) / n, p, r, f)
