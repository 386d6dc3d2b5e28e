"""
Scenario Configuration Module

Builds a validated ScenarioConfig from a ScenarioEnvironment and command-line overrides.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from bargmann.core.errors import ConfigError, StateParamsError
from bargmann.core.states import Label, StateParams
from bargmann.models.symbols import MODEL_REGISTRY, ModelSymbol, build_model
from .env_manager import ScenarioEnvironment

logger = logging.getLogger(__name__)

KNOWN_METHODS = ('exact', 'bare', 'uniform', 'conjugate')
KNOWN_FORMATS = ('csv', 'json')
KNOWN_MAPPINGS = ('action', 'full')

# config field -> scenario key, for error locations
FIELD_KEYS = {
    'model': 'MODEL', 'hbar': 'HBAR', 'b': 'B', 'c': 'C', 'mass': 'MASS',
    't_min': 'T_MIN', 't_max': 'T_MAX', 'n_steps': 'N_STEPS', 'methods': 'METHODS',
    'search_radius': 'SEARCH_RADIUS', 'search_grid': 'SEARCH_GRID', 'output_format': 'FORMAT',
    'mapping': 'MAPPING', 'uniform_seed_t': 'UNIFORM_SEED_T', 'workers': 'WORKERS',
}


def _label_from(env: ScenarioEnvironment, prefix: str, q_key: str, p_key: str,
                params: StateParams) -> complex:
    if env.get(q_key) is not None or env.get(p_key) is not None:
        return Label(env.get(q_key, 0.0), env.get(p_key, 0.0), params).z0
    return complex(env.get(f'{prefix}_RE', 0.0), env.get(f'{prefix}_IM', 0.0))


@dataclass
class ScenarioConfig:
    """One propagation scenario: model, labels, duration grid, methods and output."""
    name: str = 'custom'
    model: str = 'quartic-number'
    model_params: Dict[str, float] = field(default_factory=dict)
    hbar: float = 1.0
    b: float = 1.0
    c: float = 1.0
    mass: float = 1.0
    z0: complex = 0j
    zf: complex = 0j
    t_min: float = 0.0
    t_max: float = 1.0
    n_steps: int = 11
    methods: Tuple[str, ...] = ('exact', 'bare')
    search_radius: float = 16.0
    search_grid: int = 24
    output: Optional[str] = None
    output_format: str = 'csv'
    seed: int = 0
    mapping: str = 'action'
    uniform_seed_t: Optional[float] = None
    workers: int = 4
    progress: bool = False
    env: Optional[ScenarioEnvironment] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_env(cls, env: ScenarioEnvironment) -> 'ScenarioConfig':
        """Create a ScenarioConfig from a loaded scenario."""
        defaults = cls()
        hbar = env.get('HBAR', defaults.hbar)
        b = env.get('B', defaults.b)
        c = env.get('C', hbar / b)
        try:
            params = StateParams(hbar=hbar, b=b, c=c, mass=env.get('MASS', defaults.mass))
        except StateParamsError as exc:
            raise ConfigError(str(exc), field='C', line=env.line_of('C')) from exc
        model_params = {k: env.get(f'MODEL_{k.upper()}') for k in ('omega', 'scale')
                        if env.get(f'MODEL_{k.upper()}') is not None}
        return cls(
            name=env.get('NAME', env.path.stem if env.path else defaults.name),
            model=env.get('MODEL', defaults.model),
            model_params=model_params,
            hbar=hbar, b=b, c=c, mass=params.mass,
            z0=_label_from(env, 'Z0', 'Q0', 'P0', params),
            zf=_label_from(env, 'ZF', 'QF', 'PF', params),
            t_min=env.get('T_MIN', defaults.t_min),
            t_max=env.get('T_MAX', defaults.t_max),
            n_steps=env.get('N_STEPS', defaults.n_steps),
            methods=tuple(m.lower() for m in env.get('METHODS', defaults.methods)),
            search_radius=env.get('SEARCH_RADIUS', defaults.search_radius),
            search_grid=env.get('SEARCH_GRID', defaults.search_grid),
            output=env.get('OUTPUT'),
            output_format=env.get('FORMAT', defaults.output_format).lower(),
            seed=env.get('SEED', defaults.seed),
            mapping=env.get('MAPPING', defaults.mapping),
            uniform_seed_t=env.get('UNIFORM_SEED_T', defaults.uniform_seed_t),
            workers=env.get('WORKERS', defaults.workers),
            progress=env.get('PROGRESS', defaults.progress),
            env=env,
        )

    @classmethod
    def load(cls, scenario: Optional[str] = None, **overrides: Any) -> 'ScenarioConfig':
        """Load a scenario, apply overrides and validate.

        Args:
            scenario: Packaged scenario name or file path; None starts from defaults
            **overrides: Field values that win over the scenario (None is ignored)

        Returns:
            Validated ScenarioConfig
        """
        env = ScenarioEnvironment(scenario)
        config = cls.from_env(env).with_overrides(**overrides)
        config.validate()
        return config

    def with_overrides(self, **overrides: Any) -> 'ScenarioConfig':
        """Copy with the non-None overrides applied."""
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ConfigError(f"unknown configuration fields: {sorted(unknown)}", field=sorted(unknown)[0])
        changes = {k: v for k, v in overrides.items() if v is not None}
        if 'methods' in changes and isinstance(changes['methods'], str):
            changes['methods'] = tuple(m.strip().lower() for m in changes['methods'].split(',') if m.strip())
        if 'c' not in changes and ('hbar' in changes or 'b' in changes):
            changes['c'] = changes.get('hbar', self.hbar) / changes.get('b', self.b)
        return replace(self, **changes)

    def _fail(self, message: str, field_name: str) -> None:
        key = FIELD_KEYS.get(field_name, field_name.upper())
        line = self.env.line_of(key) if self.env is not None else None
        raise ConfigError(message, field=key, line=line)

    def validate(self) -> None:
        """Validate the scenario configuration."""
        if self.model not in MODEL_REGISTRY:
            self._fail(f"Unknown model {self.model!r}; known: {sorted(MODEL_REGISTRY)}", 'model')
        try:
            self.params
        except StateParamsError as exc:
            self._fail(str(exc), 'c')
        if not self.t_min >= 0:
            self._fail(f"T_MIN must be non-negative, got {self.t_min}", 't_min')
        if not self.t_max >= self.t_min:
            self._fail(f"T_MAX ({self.t_max}) must not be below T_MIN ({self.t_min})", 't_max')
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            self._fail(f"N_STEPS must be a positive integer, got {self.n_steps}", 'n_steps')
        if not self.methods:
            self._fail("at least one method is required", 'methods')
        bad = [m for m in self.methods if m not in KNOWN_METHODS]
        if bad:
            self._fail(f"Unknown methods {bad}; known: {list(KNOWN_METHODS)}", 'methods')
        if self.output_format not in KNOWN_FORMATS:
            self._fail(f"FORMAT must be one of {KNOWN_FORMATS}, got {self.output_format!r}", 'output_format')
        if self.mapping not in KNOWN_MAPPINGS:
            self._fail(f"MAPPING must be one of {KNOWN_MAPPINGS}, got {self.mapping!r}", 'mapping')
        if not self.search_radius > 0:
            self._fail(f"SEARCH_RADIUS must be positive, got {self.search_radius}", 'search_radius')
        if self.search_grid < 2:
            self._fail(f"SEARCH_GRID must be at least 2, got {self.search_grid}", 'search_grid')
        if self.uniform_seed_t is not None and not self.uniform_seed_t > 0:
            self._fail(f"UNIFORM_SEED_T must be positive, got {self.uniform_seed_t}", 'uniform_seed_t')
        if self.workers < 1:
            self._fail(f"WORKERS must be at least 1, got {self.workers}", 'workers')
        logger.info(f"Scenario {self.name!r} validated")

    @property
    def params(self) -> StateParams:
        return StateParams(hbar=self.hbar, b=self.b, c=self.c, mass=self.mass)

    @property
    def labels(self) -> Tuple[Label, Label]:
        params = self.params
        return Label.from_complex(self.z0, params), Label.from_complex(self.zf, params)

    @property
    def T_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_steps)

    def build_model(self) -> ModelSymbol:
        return build_model(self.model, hbar=self.hbar, **self.model_params)
