"""Tests for scenario loading, overrides and validation."""
import math

import pytest

from bargmann.config import KNOWN_METHODS, ScenarioConfig, ScenarioEnvironment, available_scenarios
from bargmann.core.errors import ConfigError


@pytest.fixture
def scenario_file(tmp_path):
    """Write a scenario file and return its path."""
    def _write(text: str):
        path = tmp_path / "scenario.env"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


class TestPackagedScenarios:

    def test_available(self):
        assert {"fig1", "ho-sanity", "caustic"} <= set(available_scenarios())

    def test_fig1(self):
        config = ScenarioConfig.load("fig1")
        assert config.name == "fig1"
        assert config.model == "quartic-number"
        assert config.n_steps == 200
        assert config.methods == ("exact", "bare", "uniform")
        assert config.z0 == pytest.approx(1 / (2 * math.sqrt(2)))
        assert config.zf == config.z0
        assert config.T_grid[0] == pytest.approx(0.05)
        assert config.T_grid[-1] == pytest.approx(3.0)

    def test_ho_sanity_builds_oscillator(self):
        config = ScenarioConfig.load("ho-sanity")
        model = config.build_model()
        assert model.model_id == "ho"
        assert config.zf == pytest.approx(0.2 - 0.4j)

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load("no-such-scenario")
        assert exc.value.field == "scenario"


class TestOverrides:

    def test_flags_win(self):
        config = ScenarioConfig.load("fig1", n_steps=5, methods="exact, bare", t_max=1.0)
        assert config.n_steps == 5
        assert config.methods == ("exact", "bare")
        assert config.t_max == 1.0

    def test_none_is_ignored(self):
        config = ScenarioConfig.load("fig1", n_steps=None)
        assert config.n_steps == 200

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            ScenarioConfig().with_overrides(bogus=1)

    def test_c_follows_hbar(self):
        config = ScenarioConfig().with_overrides(hbar=2.0)
        assert config.c == pytest.approx(2.0)
        config.validate()

    def test_environment_variable(self, monkeypatch):
        monkeypatch.setenv("BARGMANN_N_STEPS", "7")
        assert ScenarioConfig.load("fig1").n_steps == 7

    def test_position_momentum_labels(self, scenario_file):
        path = scenario_file("MODEL=ho\nQ0=1.0\nP0=0.0\nQF=0.0\nPF=1.0\n")
        config = ScenarioConfig.load(path)
        assert config.z0 == pytest.approx(1 / math.sqrt(2))
        assert config.zf == pytest.approx(1j / math.sqrt(2))


class TestValidation:

    def test_widths_must_multiply_to_hbar(self, scenario_file):
        path = scenario_file("HBAR=1.0\nB=1.0\nC=2.0\n")
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load(path)
        assert exc.value.field == "C"
        assert exc.value.line == 3

    def test_unknown_key_reports_line(self, scenario_file):
        path = scenario_file("MODEL=ho\nBOGUS=1\n")
        with pytest.raises(ConfigError) as exc:
            ScenarioEnvironment(path)
        assert exc.value.field == "BOGUS"
        assert exc.value.line == 2
        assert "line 2" in str(exc.value)

    def test_bad_integer(self, scenario_file):
        path = scenario_file("MODEL=ho\nT_MAX=2.0\nN_STEPS=many\n")
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load(path)
        assert exc.value.field == "N_STEPS"
        assert exc.value.line == 3

    def test_bad_boolean(self, scenario_file):
        path = scenario_file("PROGRESS=maybe\n")
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load(path)
        assert exc.value.field == "PROGRESS"

    def test_negative_duration(self, scenario_file):
        path = scenario_file("MODEL=quartic-number\nT_MIN=-1\nT_MAX=1\n")
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load(path)
        assert exc.value.field == "T_MIN"
        assert exc.value.line == 2

    @pytest.mark.parametrize("overrides,field", [
        ({"model": "anharmonic"}, "MODEL"),
        ({"t_min": 2.0, "t_max": 1.0}, "T_MAX"),
        ({"n_steps": 0}, "N_STEPS"),
        ({"methods": "exact,magic"}, "METHODS"),
        ({"output_format": "xml"}, "FORMAT"),
        ({"mapping": "linear"}, "MAPPING"),
        ({"search_radius": -1.0}, "SEARCH_RADIUS"),
        ({"search_grid": 1}, "SEARCH_GRID"),
        ({"workers": 0}, "WORKERS"),
        ({"uniform_seed_t": 0.0}, "UNIFORM_SEED_T"),
        ({"uniform_seed_t": -0.5}, "UNIFORM_SEED_T"),
    ])
    def test_invalid_fields(self, overrides, field):
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.load(None, **overrides)
        assert exc.value.field == field

    def test_defaults_are_valid(self):
        config = ScenarioConfig.load(None)
        assert config.uniform_seed_t is None
        assert set(config.methods) <= set(KNOWN_METHODS)
        assert len(config.T_grid) == config.n_steps
