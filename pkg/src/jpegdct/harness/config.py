"""Experiment configuration: line-oriented ``key = value`` files.

Every run writes back its fully-resolved configuration for provenance.
"""

import os
from dataclasses import dataclass, field, fields

from ..data.variants import VARIANT_TAGS


class ConfigInvalid(Exception):
    """Configuration failed validation."""


MODES = ("downsample", "upsample")


@dataclass
class ExperimentConfig:
    dataset_kind: str = "synthetic"  # cifar10 | folder | synthetic
    dataset_dir: str = ""
    out_dir: str = "runs/out"
    variants: tuple = ("quantized", "unquantized")
    modes: tuple = ("downsample", "upsample")
    quality: int = 75
    subsampling: str = "420"
    epochs: int = 15
    batch_size: int = 128
    base_lr: float = 0.01
    lr_decay: float = 0.9
    lr_decay_every: int = 10
    seed: int = 0
    train_limit: int = 0  # total cap across classes; 0 = full split
    test_limit: int = 0
    classes: tuple = ()  # optional class-index subset
    normalize: bool = True
    resample_order: str = "after"  # after | before (de-quantization)
    arch: tuple = ()  # empty = default architecture
    synthetic_per_class: int = 250
    synthetic_classes: int = 2
    folder_test_fraction: float = 0.2
    target_size: int = 224  # folder ingestion resize

    def cells(self):
        return [(v, m) for v in self.variants for m in self.modes]


_TUPLE_FIELDS = {"variants", "modes", "classes", "arch"}
_BOOL_FIELDS = {"normalize"}


def _parse_value(name, text, target_type):
    text = text.strip()
    if name in _TUPLE_FIELDS:
        if not text:
            return ()
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if name == "classes":
            return tuple(int(p) for p in parts)
        return tuple(parts)
    if name in _BOOL_FIELDS:
        if text.lower() in ("1", "true", "on", "yes"):
            return True
        if text.lower() in ("0", "false", "off", "no"):
            return False
        raise ConfigInvalid(f"{name}: expected on/off, got {text!r}")
    return target_type(text)


def parse_config_text(text) -> dict:
    """key = value lines with # comments; returns raw string values."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigInvalid(f"line {lineno}: expected key = value")
        key, value = stripped.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def config_from_mapping(raw: dict) -> ExperimentConfig:
    known = {f.name: f for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigInvalid(f"unknown config key {key!r}")
        target_type = type(getattr(ExperimentConfig(), key))
        kwargs[key] = _parse_value(key, value, target_type)
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_mapping(parse_config_text(fh.read()))


def resolved_text(cfg: ExperimentConfig) -> str:
    lines = ["# resolved experiment configuration"]
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "on" if value else "off"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def write_resolved(cfg: ExperimentConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(resolved_text(cfg))


def validate(cfg: ExperimentConfig):
    if cfg.dataset_kind not in ("cifar10", "folder", "synthetic"):
        raise ConfigInvalid(f"dataset_kind {cfg.dataset_kind!r}")
    if cfg.dataset_kind in ("cifar10", "folder"):
        if not cfg.dataset_dir:
            raise ConfigInvalid(f"{cfg.dataset_kind} needs dataset_dir")
        if not os.path.isdir(cfg.dataset_dir):
            raise ConfigInvalid(f"dataset_dir {cfg.dataset_dir!r} not found")
    for v in cfg.variants:
        if v not in VARIANT_TAGS:
            raise ConfigInvalid(f"variant {v!r}")
    for m in cfg.modes:
        if m not in MODES:
            raise ConfigInvalid(f"mode {m!r}")
    if not cfg.cells():
        raise ConfigInvalid("no (variant, mode) cells selected")
    if "quantized" in cfg.variants and not 1 <= cfg.quality <= 100:
        raise ConfigInvalid(f"quality {cfg.quality} outside [1, 100]")
    if cfg.subsampling not in ("420", "444"):
        raise ConfigInvalid(f"subsampling {cfg.subsampling!r}")
    if cfg.resample_order not in ("after", "before"):
        raise ConfigInvalid(f"resample_order {cfg.resample_order!r}")
    if cfg.epochs < 1:
        raise ConfigInvalid("epochs must be >= 1")
    return cfg
