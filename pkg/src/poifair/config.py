"""Experiment configuration: JSON-backed, with every protocol constant as a
default rather than a hard-coded value."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    checkin_path: str = ""
    poi_path: str = ""
    social_path: str | None = None
    min_user_checkins: int = 15
    min_poi_checkins: int = 10
    train_frac: float = 0.7
    val_frac: float = 0.1
    test_frac: float = 0.2
    work_start_hour: int = 8
    work_end_hour: int = 18
    group_quantile: float = 0.2
    models: list[str] = field(default_factory=lambda: ["geosoca", "lore"])
    fusion_rules: list[str] = field(default_factory=lambda: ["product", "sum"])
    sweep_step: float = 0.1
    sweep_objective: str = "min_delta"
    run_sweep: bool = False
    cutoffs: list[int] = field(default_factory=lambda: [10, 20])
    session_gap_hours: float = 24.0
    amc_alpha: float = 0.5
    amc_memory: int = 5
    out_dir: str = "out"
    seed: int = 42

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {p}: {e}") from e
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.checkin_path or not self.poi_path:
            raise ConfigError("checkin_path and poi_path are required")
        for path in (self.checkin_path, self.poi_path, self.social_path):
            if path and not Path(path).is_file():
                raise ConfigError(f"input file not found: {path}")
        if abs(self.train_frac + self.val_frac + self.test_frac - 1.0) > 1e-9:
            raise ConfigError("split fractions must sum to 1")
        if not 0 < self.group_quantile <= 0.5:
            raise ConfigError("group_quantile must be in (0, 0.5]")
        for m in self.models:
            if m not in ("geosoca", "lore"):
                raise ConfigError(f"unknown model {m!r}")
        for r in self.fusion_rules:
            if r not in ("product", "sum", "weighted_sum"):
                raise ConfigError(f"unknown fusion rule {r!r}")
        if any(n < 1 for n in self.cutoffs):
            raise ConfigError("cutoffs must be >= 1")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)
