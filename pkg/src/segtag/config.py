"""Training/model configuration with the published default hyper-parameters.

Config files are flat ``key=value`` text; every default can be overridden.
Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass
class TrainConfig:
    initial_lr: float = 0.1
    decay: float = 0.05          # lr_t = initial_lr / (decay*(t-1) + 1)
    clip_norm: float = 5.0
    dropout: float = 0.5
    batch_size: int = 10
    epochs: int = 30
    min_adopt_epoch: int = 5     # best epoch adopted only from this epoch on
    max_order: int = 3
    use_radicals: bool = True
    use_glyphs: bool = False
    use_pretrained: bool = False
    bucket_width: int = 10
    seed: int = 1
    ngram_dim: int = 64
    radical_dim: int = 30
    gru_size: int = 200

    def __post_init__(self):
        for name in ("initial_lr", "decay", "clip_norm", "batch_size", "epochs",
                     "min_adopt_epoch", "max_order", "bucket_width",
                     "ngram_dim", "radical_dim", "gru_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")

    @property
    def input_dim(self) -> int:
        return (self.ngram_dim * self.max_order
                + (self.radical_dim if self.use_radicals else 0)
                + (100 if self.use_glyphs else 0))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f.type for f in dataclasses.fields(TrainConfig)}


def _coerce(name: str, value: str):
    kind = _FIELDS[name]
    if kind == "bool":
        lowered = value.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"bad boolean for {name}: {value!r}")
    if kind == "int":
        return int(value)
    if kind == "float":
        return float(value)
    return value


def config_from_dict(data: dict) -> TrainConfig:
    unknown = set(data) - set(_FIELDS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return TrainConfig(**data)


def load_config(path: str) -> TrainConfig:
    overrides = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in _FIELDS:
                raise ValueError(f"bad config line {lineno} in {path}: {line!r}")
            overrides[key] = _coerce(key, value.strip())
    return TrainConfig(**overrides)
