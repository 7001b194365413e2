"""Configuration ingestion, CLI, result emission and the HTTP service."""

from .config import RunManifest, ScenarioConfig, config_to_dict, emit_config, load_config

__all__ = [
    "ScenarioConfig",
    "RunManifest",
    "load_config",
    "emit_config",
    "config_to_dict",
]
