"""Scenario files, environment overrides and validated run configuration."""
from .config_validator import KNOWN_METHODS, ScenarioConfig
from .env_manager import ScenarioEnvironment, available_scenarios

__all__ = ["KNOWN_METHODS", "ScenarioConfig", "ScenarioEnvironment", "available_scenarios"]
