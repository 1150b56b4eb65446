"""Run configuration: one JSON file plus flag overrides (flags win).

All randomness in a run flows from the single ``seed``; nothing depends
on the wall clock unless ``t_p`` is explicitly set to "now".
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .synth import SynthConfig


@dataclass(frozen=True)
class RunConfig:
    # paths
    news: str | None = None
    microblogs: str | None = None
    model_dir: str | None = None
    output_dir: str | None = None
    annotations: str | None = None
    # corpus
    hashtag_style: str = "weibo"
    min_group_size: int = 1
    # features
    min_df: int = 2
    max_df_ratio: float = 0.5
    n_topics: int = 50
    alpha: float = 1.0
    beta: float = 0.01
    train_iters: int = 200
    infer_iters: int = 50
    # svm
    svm_lambda: float = 1e-4
    epochs: int = 20
    # ranking; t_p is None (max post timestamp), "now", or epoch seconds
    gamma_days: float = 7.0
    t_p: int | str | None = None
    top_k: int = 10
    # clustering
    strict_clustering: bool = False
    cluster_cap: int = 2000
    # execution
    workers: int | None = None
    seed: int = 42
    synth: SynthConfig = dataclasses.field(default_factory=SynthConfig)

    def __post_init__(self):
        if self.min_group_size < 1:
            raise ValidationError("min_group_size must be >= 1")
        if self.top_k < 1:
            raise ValidationError("top_k must be >= 1")
        if self.gamma_days <= 0:
            raise ValidationError("gamma_days must be positive")
        if self.cluster_cap < 1:
            raise ValidationError("cluster_cap must be >= 1")
        if self.workers is not None and self.workers < 1:
            raise ValidationError("workers must be >= 1")
        if isinstance(self.t_p, str) and self.t_p != "now":
            raise ValidationError('t_p must be an integer, null, or "now"')


_RUN_FIELDS = {f.name for f in dataclasses.fields(RunConfig)} - {"synth"}
_SYNTH_FIELDS = {f.name for f in dataclasses.fields(SynthConfig)}


def load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(path, exc.lineno, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(payload, dict):
        raise ParseError(path, 1, "config must be a JSON object")
    unknown = set(payload) - _RUN_FIELDS - {"synth"}
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    synth = payload.get("synth", {})
    if not isinstance(synth, dict):
        raise ValidationError('config key "synth" must be an object')
    unknown = set(synth) - _SYNTH_FIELDS
    if unknown:
        raise ValidationError(f"unknown synth config keys: {sorted(unknown)}")
    return payload


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge defaults, config-file values and flag overrides (flags win)."""
    values: dict = {}
    synth_values: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key == "synth":
                synth_values.update(value)
            elif key in _SYNTH_FIELDS and key not in _RUN_FIELDS:
                synth_values[key] = value
            elif key.startswith("synth_"):
                synth_values[key[len("synth_"):]] = value
            else:
                values[key] = value
    unknown = set(values) - _RUN_FIELDS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    unknown = set(synth_values) - _SYNTH_FIELDS
    if unknown:
        raise ValidationError(f"unknown synth config keys: {sorted(unknown)}")
    # the generator inherits the run seed unless one was given explicitly
    if "seed" not in synth_values and "seed" in values:
        synth_values["seed"] = values["seed"]
    return RunConfig(**values, synth=SynthConfig(**synth_values))
