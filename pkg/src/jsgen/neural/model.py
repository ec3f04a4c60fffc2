"""Network: BiLSTM encoder, parent-fed LSTM decoder, generate/copy/reduce output."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
from torch import nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence

from ..grammar import Grammar
from ..prep.vocab import Vocabulary
from ..transit import TOKEN_RULES, UNK, token_allowed

# additive mask; finite so masked terms keep zero (not NaN) gradients
NEG = -1e9

GATE_GEN, GATE_COPY, GATE_REDUCE = 0, 1, 2
# rules under which <unk> stands in for an unknown content token during training
_UNK_RULES = {"ident_first", "ident_next", "string_body", "literal_first"}


@dataclass
class ModelConfig:
    hidden: int = 256
    embed: int = 128
    subtokenize: bool = True
    dtype: str = "float32"

    def to_json(self) -> dict:
        return asdict(self)

    @property
    def torch_dtype(self):
        return {"float32": torch.float32, "float64": torch.float64}[self.dtype]


def field_table(g: Grammar) -> dict[tuple[str, str], int]:
    """Frontier-field embedding index; 0 is the root frontier."""
    names = [(c.name, f.name) for c in g.constructors for f in c.fields]
    return {key: i + 1 for i, key in enumerate(names)}


@dataclass
class EncoderOutput:
    states: torch.Tensor      # (B, N, 2H)
    mask: torch.Tensor        # (B, N) bool, True on real tokens
    att_keys: torch.Tensor    # (B, N, H)
    copy_keys: torch.Tensor   # (B, N, H)
    init: tuple[torch.Tensor, torch.Tensor]

    def select(self, index: torch.Tensor) -> "EncoderOutput":
        return EncoderOutput(self.states[index], self.mask[index], self.att_keys[index],
                             self.copy_keys[index], (self.init[0][index], self.init[1][index]))


@dataclass
class DecoderStep:
    h: torch.Tensor        # s_t
    c: torch.Tensor        # LSTM cell
    att: torch.Tensor      # attentional vector
    ctx: torch.Tensor      # context c_t


class Seq2Tree(nn.Module):
    def __init__(self, config: ModelConfig, vocab: Vocabulary, grammar: Grammar):
        super().__init__()
        vocab.check_grammar(grammar)
        self.config, self.vocab, self.grammar = config, vocab, grammar
        self.fields = field_table(grammar)
        H, E, V, P = config.hidden, config.embed, len(vocab), len(vocab.productions)
        self.tok_emb = nn.Parameter(torch.empty(V, E))
        self.act_emb = nn.Parameter(torch.empty(P, E))
        self.field_emb = nn.Parameter(torch.empty(len(self.fields) + 1, E))
        self.encoder = nn.LSTM(E, H, batch_first=True, bidirectional=True)
        self.init_proj = nn.Linear(2 * H, H)
        self.decoder = nn.LSTMCell(E + H + E + H, H)
        self.att_W = nn.Linear(2 * H, H, bias=False)
        self.att_out = nn.Linear(2 * H + H, H, bias=False)   # W_c
        self.constr_W = nn.Linear(H, E, bias=False)
        self.gen_W = nn.Linear(H, E, bias=False)
        self.copy_W = nn.Linear(2 * H, H, bias=False)
        self.gate = nn.Linear(H, 3)
        self.register_buffer("rule_masks", self._rule_masks(), persistent=False)
        self.reset_parameters()
        self.to(config.torch_dtype)

    def _rule_masks(self) -> torch.Tensor:
        rows = []
        for rule in TOKEN_RULES:
            allowed = [token_allowed(rule, t) or (t == UNK and rule in _UNK_RULES) for t in self.vocab.tokens]
            rows.append(allowed)
        return torch.tensor(rows, dtype=torch.bool)

    def reset_parameters(self) -> None:
        for emb in (self.tok_emb, self.act_emb, self.field_emb):
            nn.init.uniform_(emb, -0.1, 0.1)
        for name, p in self.named_parameters():
            if "emb" in name:
                continue
            if p.dim() == 2:
                nn.init.xavier_uniform_(p)
            else:
                nn.init.zeros_(p)
        H = self.config.hidden
        for lstm_bias in (self.encoder.bias_ih_l0, self.encoder.bias_ih_l0_reverse, self.decoder.bias_ih):
            with torch.no_grad():
                lstm_bias[H:2 * H].fill_(1.0)

    @property
    def dtype(self):
        return self.tok_emb.dtype

    # -- encoder -----------------------------------------------------------

    def encode(self, token_ids: torch.Tensor, lengths: torch.Tensor) -> EncoderOutput:
        """``token_ids`` (B, N) padded with 0; ``lengths`` (B,) all >= 1."""
        if token_ids.numel() == 0 or int(lengths.min()) < 1:
            raise ValueError("cannot encode an empty description")
        x = self.tok_emb[token_ids]
        packed = pack_padded_sequence(x, lengths.cpu(), batch_first=True, enforce_sorted=False)
        out, (h_n, c_n) = self.encoder(packed)
        states, _ = pad_packed_sequence(out, batch_first=True, total_length=token_ids.shape[1])
        mask = torch.arange(token_ids.shape[1])[None, :] < lengths[:, None]
        c0 = self.init_proj(torch.cat([c_n[0], c_n[1]], dim=-1))
        return EncoderOutput(states, mask, self.att_W(states), self.copy_W(states), (torch.tanh(c0), c0))

    # -- decoder -----------------------------------------------------------

    def initial_step(self, enc: EncoderOutput) -> DecoderStep:
        B, H = enc.states.shape[0], self.config.hidden
        zeros = enc.states.new_zeros(B, H)
        return DecoderStep(enc.init[0], enc.init[1], zeros, enc.states.new_zeros(B, 2 * H))

    def prev_action_embedding(self, kind: torch.Tensor, ident: torch.Tensor) -> torch.Tensor:
        """``kind``: 0 none, 1 production, 2 token."""
        a = self.act_emb[ident.clamp(max=self.act_emb.shape[0] - 1)]
        t = self.tok_emb[ident.clamp(max=self.tok_emb.shape[0] - 1)]
        k = kind[:, None]
        return torch.where(k == 1, a, torch.where(k == 2, t, torch.zeros_like(a)))

    def decode_step(self, prev: DecoderStep, prev_action: torch.Tensor, field_ids: torch.Tensor,
                    parent_h: torch.Tensor, enc: EncoderOutput) -> DecoderStep:
        """One decoder update from ``[a_{t-1}; att_{t-1}; n_f; s_parent]``.

        ``parent_h`` is the decoder state of the step that created the
        frontier's owner, zero at the root (as is the root field embedding).
        """
        f = self.field_emb[field_ids] * (field_ids > 0)[:, None].to(self.dtype)
        x = torch.cat([prev_action, prev.att, f, parent_h], dim=-1)
        h, c = self.decoder(x, (prev.h, prev.c))
        scores = torch.einsum("bnh,bh->bn", enc.att_keys, h).masked_fill(~enc.mask, NEG)
        alpha = torch.softmax(scores, dim=-1)
        ctx = torch.einsum("bn,bnd->bd", alpha, enc.states)
        att = torch.tanh(self.att_out(torch.cat([ctx, h], dim=-1)))
        return DecoderStep(h, c, att, ctx)

    def log_distributions(self, step: DecoderStep, enc: EncoderOutput, prod_mask: torch.Tensor,
                          rule_ids: torch.Tensor, copy_mask: torch.Tensor, reduce_ok: torch.Tensor):
        """Masked log-distributions for one step.

        Returns ``(log_prod (B,P), log_gen (B,V), log_copy (B,N), log_gate (B,3))``.
        ``rule_ids`` is -1 at constructor frontiers, where the token parts
        are irrelevant.
        """
        att = step.att
        prod_logits = self.constr_W(att) @ self.act_emb.T
        log_prod = torch.log_softmax(prod_logits.masked_fill(~prod_mask, NEG), dim=-1)

        gen_mask = self.rule_masks[rule_ids.clamp(min=0)]
        gen_logits = self.gen_W(att) @ self.tok_emb.T
        log_gen = torch.log_softmax(gen_logits.masked_fill(~gen_mask, NEG), dim=-1)

        copy_ok = copy_mask & enc.mask
        copy_logits = torch.einsum("bnh,bh->bn", enc.copy_keys, att)
        log_copy = torch.log_softmax(copy_logits.masked_fill(~copy_ok, NEG), dim=-1)

        gate_ok = torch.stack([torch.ones_like(reduce_ok), copy_ok.any(dim=-1), reduce_ok], dim=-1)
        log_gate = torch.log_softmax(self.gate(att).masked_fill(~gate_ok, NEG), dim=-1)
        return log_prod, log_gen, log_copy, log_gate
