"""
test_config.py: Tests for key=value config files, solver settings and model parameters.
Run with: python -m pytest tests/
"""

import pytest

from staggered_chns.config import SolverSettings, apply_solver_overrides, load_config_file
from staggered_chns.exceptions import ConfigurationError
from staggered_chns.physics.params import ModelParams

SAMPLE_CONFIG = """\
# test4 with a softer pressure
Cp=100
lambda=0.05
cfl=0.3
precond=mg
mg_sweeps=2
"""


def _write(tmp_path, text, name="run.env"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_config_file_is_sorted_into_sections(tmp_path):
    config = load_config_file(_write(tmp_path, SAMPLE_CONFIG))
    assert config["params"] == {"Cp": 100.0, "lam": 0.05}
    assert config["run"] == {"cfl": 0.3}
    assert config["solver"] == {"precond": "mg", "mg_sweeps": 2}


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_config_file(tmp_path / "missing.env")
    with pytest.raises(ConfigurationError, match="unknown key"):
        load_config_file(_write(tmp_path, "viscosity=1\n"))
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_config_file(_write(tmp_path, "nu=fast\n"))
    with pytest.raises(ConfigurationError, match="no value"):
        load_config_file(_write(tmp_path, "eps=\n"))


def test_solver_settings_validation():
    assert SolverSettings().max_iter_factor == 10
    with pytest.raises(ConfigurationError):
        SolverSettings(precond="ilu")
    with pytest.raises(ConfigurationError):
        SolverSettings(flux_viscosity="none")
    with pytest.raises(ConfigurationError):
        SolverSettings(ch_tol=0.0)


def test_overrides_skip_none_and_unknown_keys():
    base = SolverSettings()
    out = apply_solver_overrides(base, {"precond": "mg", "flux_viscosity": None, "cfl": 0.2})
    assert out.precond == "mg"
    assert out.flux_viscosity == base.flux_viscosity


def test_model_params_validation_and_pressure():
    params = ModelParams(Cp=2.0, gamma=2.0)
    assert params.pressure(3.0) == pytest.approx(18.0)
    assert params.pressure_derivative(3.0) == pytest.approx(12.0)
    assert params.with_overrides(nu=None, eps=0.01).eps == 0.01
    for bad in ({"gamma": 1.0}, {"Cp": 0.0}, {"nu": -1.0}, {"lam": -0.1}):
        with pytest.raises(ConfigurationError):
            ModelParams(**bad)
