"""Key=value configuration shared by the CLI and the HTTP service."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .edge_rules import DEFAULT_SHARED_OBJECT_SUFFIXES, RuleSet
from .graph_similarity import WeightConfig

ENV_VAR = "CROSSHUNT_CONFIG"


@dataclass
class Config:
    corpus_dir: str = "corpus"
    j_t: float = 0.6
    signature_length: int = 128
    seed: int = 42
    w1: float = 1.0
    w2: float = 0.2
    w3: float = 0.8
    alert_threshold: float = 0.5
    rules_path: str = ""
    shared_object_suffixes: tuple[str, ...] = DEFAULT_SHARED_OBJECT_SUFFIXES
    row5_disjunctive: bool = False
    row5_no_initial_compromise: bool = False
    banding: bool = False
    workers: int = 0
    host: str = "127.0.0.1"
    port: int = 8787

    def weights(self) -> WeightConfig:
        return WeightConfig(self.w1, self.w2, self.w3)

    def ruleset(self) -> RuleSet:
        if self.rules_path:
            return RuleSet.load(self.rules_path)
        return RuleSet.default(
            shared_object_suffixes=self.shared_object_suffixes,
            row5_disjunctive=self.row5_disjunctive,
            row5_no_initial_compromise=self.row5_no_initial_compromise,
        )


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def parse_config(text: str, base: Config | None = None) -> Config:
    """Apply `key=value` lines ('#' comments allowed) over a base config."""
    config = base or Config()
    types = {f.name: f.type for f in fields(Config)}
    updates: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in types:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        current = getattr(config, key)
        if isinstance(current, bool):
            updates[key] = _parse_bool(value)
        elif isinstance(current, int):
            updates[key] = int(value)
        elif isinstance(current, float):
            updates[key] = float(value)
        elif isinstance(current, tuple):
            updates[key] = tuple(s.strip() for s in value.split(",") if s.strip())
        else:
            updates[key] = value
    return replace(config, **updates)


def load_config(path: str | os.PathLike | None = None) -> Config:
    """Load from an explicit path, else $CROSSHUNT_CONFIG, else defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return Config()
    return parse_config(Path(path).read_text(encoding="utf-8"))
