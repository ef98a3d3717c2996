from fractions import Fraction

import pytest

from fell_metrics.config import DEFAULT_SEARCH_BOUND, load_settings
from fell_metrics.errors import ConfigError

ENV = ("FELL_METRICS_TOL", "FELL_METRICS_SEED", "FELL_METRICS_SAMPLES", "FELL_METRICS_FORMAT",
       "FELL_METRICS_SEARCH_BOUND")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    settings = load_settings()
    assert settings.tolerance == Fraction(1, 4096)
    assert settings.seed == 42
    assert settings.samples == 100
    assert settings.output_format == "json"
    assert settings.search_bound == DEFAULT_SEARCH_BOUND


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv("FELL_METRICS_TOL", "1/1024")
    monkeypatch.setenv("FELL_METRICS_SEED", "7")
    monkeypatch.setenv("FELL_METRICS_FORMAT", "csv")
    settings = load_settings()
    assert settings.tolerance == Fraction(1, 1024)
    assert settings.seed == 7
    assert settings.output_format == "csv"


def test_arguments_override_environment(monkeypatch):
    monkeypatch.setenv("FELL_METRICS_SEED", "7")
    assert load_settings(seed=3).seed == 3


@pytest.mark.parametrize("name,value", [
    ("FELL_METRICS_TOL", "0"),
    ("FELL_METRICS_TOL", "abc"),
    ("FELL_METRICS_SEED", "x"),
    ("FELL_METRICS_SAMPLES", "-1"),
    ("FELL_METRICS_FORMAT", "xml"),
])
def test_invalid_environment(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError):
        load_settings()
