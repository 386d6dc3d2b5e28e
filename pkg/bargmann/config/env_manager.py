"""
Scenario Environment Module

Reads key=value scenario files with python-dotenv, overlays BARGMANN_* process
environment variables and converts every value through a typed variable table.
"""

import os
import logging
from typing import Any, Dict, List, Optional, Tuple
from pathlib import Path
from dotenv import dotenv_values

from bargmann.core.errors import ConfigError
from bargmann.utils.emoji_logger import EmojiLogger

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'scenarios'
ENV_PREFIX = 'BARGMANN_'


class ScenarioEnvironment:
    """Typed view of one scenario file plus environment overrides."""

    VARIABLES = {
        'NAME': str,
        'MODEL': str,
        'MODEL_OMEGA': float,
        'MODEL_SCALE': float,
        'HBAR': float,
        'B': float,
        'C': float,
        'MASS': float,
        'Z0_RE': float,
        'Z0_IM': float,
        'Q0': float,
        'P0': float,
        'ZF_RE': float,
        'ZF_IM': float,
        'QF': float,
        'PF': float,
        'T_MIN': float,
        'T_MAX': float,
        'N_STEPS': int,
        'METHODS': list,
        'SEARCH_RADIUS': float,
        'SEARCH_GRID': int,
        'OUTPUT': str,
        'FORMAT': str,
        'SEED': int,
        'MAPPING': str,
        'UNIFORM_SEED_T': float,
        'WORKERS': int,
        'PROGRESS': bool,
    }

    def __init__(self, scenario: Optional[str] = None, use_environment: bool = True):
        """Load a scenario.

        Args:
            scenario: Packaged scenario name (e.g. "fig1") or path to a key=value file
            use_environment: Overlay BARGMANN_<KEY> process variables
        """
        self.path = self.resolve(scenario) if scenario else None
        self._raw: Dict[str, str] = {}
        self._lines: Dict[str, int] = {}
        self._load_scenario()
        if use_environment:
            self._load_environment()
        self._values = self._validate_environment()

    @staticmethod
    def resolve(scenario: str) -> Path:
        """Map a scenario name or path to an existing file."""
        candidate = Path(scenario)
        if candidate.is_file():
            return candidate
        packaged = SCENARIO_DIR / f"{scenario}.env"
        if packaged.is_file():
            return packaged
        raise ConfigError(f"unknown scenario {scenario!r}; packaged: {', '.join(available_scenarios())}",
                          field='scenario')

    def _load_scenario(self) -> None:
        """Read the scenario file and remember the line of every key."""
        if self.path is None:
            return
        self._raw.update({k: v for k, v in dotenv_values(self.path).items() if v is not None})
        for number, line in enumerate(self.path.read_text(encoding='utf-8').splitlines(), start=1):
            key = line.split('=', 1)[0].strip().removeprefix('export ').strip()
            if '=' in line and key in self._raw:
                self._lines.setdefault(key, number)
        logger.info(f"Loaded scenario from {self.path}")

    def _load_environment(self) -> None:
        for name, value in os.environ.items():
            if name.startswith(ENV_PREFIX) and name != f"{ENV_PREFIX}LOG_DIR":
                self._raw[name[len(ENV_PREFIX):]] = value

    def _convert(self, key: str, value: str) -> Any:
        var_type = self.VARIABLES[key]
        if var_type == bool:
            self._validate_bool(value)
            return value.lower() in ('true', '1', 'yes', 'on')
        if var_type == list:
            return [item.strip() for item in value.split(',') if item.strip()]
        if var_type == str:
            return value.strip()
        return var_type(value)

    def _validate_environment(self) -> Dict[str, Any]:
        """Convert every present value, collecting unknown keys and type errors."""
        unknown_vars: List[Tuple[str, Optional[int]]] = []
        invalid_vars: List[Tuple[str, Optional[int], str]] = []
        values: Dict[str, Any] = {}

        for key, value in self._raw.items():
            if key not in self.VARIABLES:
                unknown_vars.append((key, self._lines.get(key)))
                continue
            try:
                values[key] = self._convert(key, value)
            except ValueError:
                invalid_vars.append((key, self._lines.get(key), self.VARIABLES[key].__name__))

        if unknown_vars or invalid_vars:
            self._handle_validation_errors(unknown_vars, invalid_vars)
        return values

    def _validate_bool(self, value: str) -> None:
        valid_true = ('true', '1', 'yes', 'on')
        valid_false = ('false', '0', 'no', 'off')
        if value.lower() not in valid_true + valid_false:
            raise ValueError("Invalid boolean value")

    def _handle_validation_errors(self, unknown_vars: list, invalid_vars: list) -> None:
        """Report the first offending field with its line, log all of them."""
        error_messages = []
        if unknown_vars:
            error_messages.append(f"Unknown scenario keys: {', '.join(k for k, _ in unknown_vars)}")
        if invalid_vars:
            error_messages.append("Invalid scenario values: " + ', '.join(
                f"{k} (expected {t})" for k, _, t in invalid_vars))

        error_message = "; ".join(error_messages)
        EmojiLogger.validation_error(error_message, extra={'scenario': str(self.path)})
        field, line = (unknown_vars or invalid_vars)[0][:2]
        raise ConfigError(error_message, field=field, line=line)

    def line_of(self, key: str) -> Optional[int]:
        return self._lines.get(key)

    def get(self, key: str, default: Any = None) -> Any:
        """Converted value of a scenario key, or the default when absent."""
        return self._values.get(key, default)

    def get_all(self) -> Dict[str, Any]:
        return dict(self._values)


def available_scenarios() -> List[str]:
    return sorted(p.stem for p in SCENARIO_DIR.glob('*.env'))
