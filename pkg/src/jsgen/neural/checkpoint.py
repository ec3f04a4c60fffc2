"""Self-describing checkpoints."""
from __future__ import annotations

import pickle

import torch

from ..grammar import parse_asdl
from ..prep.vocab import Vocabulary, VocabularyMismatch
from .model import ModelConfig, Seq2Tree

FORMAT_VERSION = 1


class CheckpointError(Exception):
    pass


def save_checkpoint(path, model: Seq2Tree, grammar_text: str, extra: dict | None = None) -> None:
    torch.save({
        "version": FORMAT_VERSION,
        "config": model.config.to_json(),
        "vocab": model.vocab.to_json(),
        "grammar": grammar_text,
        "shapes": {k: list(v.shape) for k, v in model.state_dict().items()},
        "state": model.state_dict(),
        "extra": extra or {},
    }, path)


def load_checkpoint(path, grammar_text: str | None = None) -> tuple[Seq2Tree, dict]:
    """Rebuild a model. If ``grammar_text`` is given it must match the stored grammar."""
    try:
        blob = torch.load(path, map_location="cpu", weights_only=True)
    except (OSError, RuntimeError, EOFError, pickle.UnpicklingError) as e:
        raise CheckpointError(f"cannot load checkpoint {path}: {e}") from e
    if blob.get("version") != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {blob.get('version')!r}")
    stored = parse_asdl(blob["grammar"])
    if grammar_text is not None and parse_asdl(grammar_text).pretty() != stored.pretty():
        raise VocabularyMismatch("grammar differs from the one the checkpoint was trained with")
    model = Seq2Tree(ModelConfig(**blob["config"]), Vocabulary.from_json(blob["vocab"]), stored)
    model.load_state_dict(blob["state"])
    model.eval()
    return model, blob.get("extra", {})
