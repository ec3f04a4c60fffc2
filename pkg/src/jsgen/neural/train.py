"""Teacher-forced likelihood and the training loop."""
from __future__ import annotations

import copy
import csv
import logging
import math
import random
import time
from dataclasses import asdict, dataclass

import torch

from .data import Instance, collate
from .model import NEG, Seq2Tree

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    batch_size: int = 32
    epochs: int = 300
    lr: float = 1e-3
    clip: float = 5.0
    seed: int = 0
    # stop early once the train NLL per example drops below this (0 disables)
    target_loss: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


class TrainingDiverged(RuntimeError):
    pass


def step_log_probs(model: Seq2Tree, batch: dict[str, torch.Tensor]) -> torch.Tensor:
    """log p(a_t | a_<t, x) of the oracle actions, shape (B, T); 0 on padding."""
    enc = model.encode(batch["token_ids"], batch["lengths"])
    B, T = batch["step_mask"].shape
    rows = torch.arange(B)
    step = model.initial_step(enc)
    history: list[torch.Tensor] = []
    zero_h = enc.states.new_zeros(B, model.config.hidden)
    out = []
    for t in range(T):
        kind, ident = batch["prev_kind"][:, t], batch["prev_id"][:, t]
        prev = model.prev_action_embedding(kind, ident)
        parent = batch["parent"][:, t]
        if history:
            stacked = torch.stack(history)  # (t, B, H)
            parent_h = torch.where((parent >= 0)[:, None], stacked[parent.clamp(min=0), rows], zero_h)
        else:
            parent_h = zero_h
        step = model.decode_step(step, prev, batch["field_id"][:, t], parent_h, enc)
        history.append(step.h)
        log_prod, log_gen, log_copy, log_gate = model.log_distributions(
            step, enc, batch["prod_mask"][:, t], batch["rule_id"][:, t], batch["copy_ok"][:, t],
            batch["reduce_ok"][:, t])
        lp_prod = log_prod.gather(1, batch["target_prod"][:, t, None])[:, 0]
        gen_term = log_gate[:, 0] + log_gen.gather(1, batch["target_tok"][:, t, None])[:, 0]
        gen_term = torch.where(batch["gen_ok"][:, t], gen_term, torch.full_like(gen_term, NEG))
        copy_term = log_gate[:, 1] + torch.logsumexp(
            log_copy.masked_fill(~batch["copy_match"][:, t], NEG), dim=-1)
        lp_tok = torch.logsumexp(torch.stack([gen_term, copy_term]), dim=0)
        lp_prim = torch.where(batch["target_reduce"][:, t], log_gate[:, 2], lp_tok)
        lp = torch.where(batch["is_prim"][:, t], lp_prim, lp_prod)
        out.append(torch.where(batch["step_mask"][:, t], lp, torch.zeros_like(lp)))
    return torch.stack(out, dim=1)


def batch_nll(model: Seq2Tree, batch: dict) -> torch.Tensor:
    """Summed NLL over the batch's actions."""
    return -step_log_probs(model, batch).sum()


def mean_nll(model: Seq2Tree, instances: list[Instance], batch_size: int = 64) -> float:
    if not instances:
        return float("nan")
    total = 0.0
    with torch.no_grad():
        for i in range(0, len(instances), batch_size):
            total += float(batch_nll(model, collate(instances[i:i + batch_size])))
    return total / len(instances)


def _epochs(train_pool, epochs: int, rng: random.Random):
    """Yield (epoch, phase_index, shuffled instances); ``train_pool`` is a list
    of instances or a list of (instances, epochs) phases."""
    phases = train_pool if train_pool and isinstance(train_pool[0], tuple) else [(train_pool, epochs)]
    epoch = 0
    for k, (pool, n) in enumerate(phases):
        for _ in range(n):
            epoch += 1
            order = list(pool)
            rng.shuffle(order)
            yield epoch, k, len(phases), order


def train(model: Seq2Tree, train_pool, val: list[Instance], config: TrainConfig, curve_path=None,
          progress=None) -> list[tuple[int, float, float]]:
    """Adam on summed action NLL; keeps the best-validation weights.

    Returns the loss curve ``[(epoch, train_nll, val_nll)]`` with per-example
    NLLs. Without validation data the final weights are kept. Only epochs
    of the last phase compete for the best checkpoint.
    """
    torch.manual_seed(config.seed)
    rng = random.Random(config.seed)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    curve = []
    best, best_state = math.inf, None
    for epoch, phase, n_phases, order in _epochs(train_pool, config.epochs, rng):
        model.train()
        total, start = 0.0, time.perf_counter()
        for i in range(0, len(order), config.batch_size):
            batch = order[i:i + config.batch_size]
            loss = batch_nll(model, collate(batch))
            if not torch.isfinite(loss):
                raise TrainingDiverged(f"non-finite loss {float(loss.detach())} at epoch {epoch}, batch {i // config.batch_size}")
            opt.zero_grad()
            (loss / len(batch)).backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.clip)
            opt.step()
            total += float(loss.detach())
        for name, p in model.named_parameters():
            if not torch.isfinite(p).all():
                raise TrainingDiverged(f"parameter {name} became non-finite at epoch {epoch}")
        model.eval()
        train_nll = total / max(len(order), 1)
        val_nll = mean_nll(model, val)
        curve.append((epoch, train_nll, val_nll))
        log.info("epoch %d train_nll %.4f val_nll %.4f (%.1fs)", epoch, train_nll, val_nll,
                 time.perf_counter() - start)
        if progress is not None:
            progress(epoch, train_nll, val_nll)
        if phase == n_phases - 1 and val and val_nll < best:
            best, best_state = val_nll, copy.deepcopy(model.state_dict())
        if config.target_loss and phase == n_phases - 1 and train_nll < config.target_loss:
            break
    if best_state is not None:
        model.load_state_dict(best_state)
    if curve_path is not None:
        write_curve(curve_path, curve)
    return curve


def write_curve(path, curve) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "train_nll", "val_nll"])
        for epoch, tr, va in curve:
            w.writerow([epoch, f"{tr:.6f}", "" if math.isnan(va) else f"{va:.6f}"])

