"""Pipeline configuration: one JSON file drives a whole build.

Environment variables override the file where noted, so deployments can
point the same config at different endpoints:

    EDUVERBA_CONFIG            path of the config file itself
    EDUVERBA_API_KEY           LLM credentials (never stored in the file)
    EDUVERBA_API_BASE          MediaWiki API base URL
    EDUVERBA_USER_AGENT        User-Agent for live fetching
    EDUVERBA_POLITENESS_DELAY  seconds between live requests
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import DEFAULT_CATEGORIES
from .errors import ConfigError
from .generate import GenParams
from .ingest import Importance, LiveSourceConfig
from .screen import ScreenConfig

CONFIG_ENV = "EDUVERBA_CONFIG"


@dataclass
class PipelineConfig:
    source: str = "fixtures"  # "fixtures" or "live"
    fixture_root: str = "fixtures"
    # (category name, source query) pairs; the query is the fixture
    # subdirectory or the live category title.
    categories: list[tuple[str, str]] = field(
        default_factory=lambda: [(name, name) for name in DEFAULT_CATEGORIES])
    pages_per_category: int = 50
    screen: ScreenConfig = field(default_factory=ScreenConfig)
    prompt_template_path: str | None = None  # None selects the shipped default
    num_clues: int = 3
    gen: GenParams = field(default_factory=GenParams)
    live: LiveSourceConfig = field(default_factory=LiveSourceConfig)
    concurrency: int = 4
    leak_filter: bool = True
    output_dir: str = "build"
    seed: int = 0

    def __post_init__(self):
        if self.source not in ("fixtures", "live"):
            raise ConfigError(f"unknown source {self.source!r}")
        self.categories = [tuple(pair) for pair in self.categories]

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["categories"] = [list(pair) for pair in self.categories]
        data["screen"]["required_importance"] = (
            self.screen.required_importance.value)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        data = dict(data)
        if "screen" in data:
            screen = dict(data["screen"])
            if "required_importance" in screen:
                screen["required_importance"] = Importance.parse(
                    screen["required_importance"])
            data["screen"] = ScreenConfig(**screen)
        if "gen" in data:
            data["gen"] = GenParams(**data["gen"])
        if "live" in data:
            data["live"] = LiveSourceConfig(**data["live"])
        if "categories" in data:
            data["categories"] = [tuple(pair) for pair in data["categories"]]
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def apply_env_overrides(config: PipelineConfig) -> PipelineConfig:
    live = config.live
    if os.environ.get("EDUVERBA_API_BASE"):
        live = dataclasses.replace(live, api_base=os.environ["EDUVERBA_API_BASE"])
    if os.environ.get("EDUVERBA_USER_AGENT"):
        live = dataclasses.replace(live, user_agent=os.environ["EDUVERBA_USER_AGENT"])
    if os.environ.get("EDUVERBA_POLITENESS_DELAY"):
        live = dataclasses.replace(
            live, politeness_delay=float(os.environ["EDUVERBA_POLITENESS_DELAY"]))
    if live is not config.live:
        config = dataclasses.replace(config, live=live)
    return config


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Read the config file (args beat EDUVERBA_CONFIG beat defaults)."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if path is None:
        return apply_env_overrides(PipelineConfig())
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return apply_env_overrides(PipelineConfig.from_dict(data))


def save_config(config: PipelineConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
