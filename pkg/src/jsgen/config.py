"""Run configuration with JSON-file loading and flag overrides."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .neural import ModelConfig, TrainConfig

AUGMENT_MODES = ("off", "mix", "pretrain_phases")


@dataclass
class RunConfig:
    grammar: str | None = None
    train: str | None = None
    val: str | None = None
    test: str | None = None
    table: str | None = None
    augment: str = "off"
    pretrain_epochs: int = 100
    subtokenize: bool = True
    hidden: int = 256
    embed: int = 128
    batch_size: int = 32
    epochs: int = 300
    lr: float = 1e-3
    clip: float = 5.0
    beam: int = 5
    seed: int = 0
    val_fraction: float = 0.1
    dtype: str = "float32"

    def __post_init__(self):
        if self.augment not in AUGMENT_MODES:
            raise ValueError(f"augment must be one of {AUGMENT_MODES}, got {self.augment!r}")
        if not 0 <= self.val_fraction < 1:
            raise ValueError("val_fraction must be in [0, 1)")
        for name in ("hidden", "embed", "batch_size", "beam"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    def model_config(self) -> ModelConfig:
        return ModelConfig(self.hidden, self.embed, self.subtokenize, self.dtype)

    def train_config(self) -> TrainConfig:
        return TrainConfig(self.batch_size, self.epochs, self.lr, self.clip, self.seed)


def field_names() -> list[str]:
    return [f.name for f in fields(RunConfig)]


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the JSON file, then non-None ``overrides``."""
    values: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(data) - set(field_names())
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(**values)
