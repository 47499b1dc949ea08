from pathlib import Path

import pytest

from mobius_frobenius.config import RunConfig


def test_defaults():
    config = RunConfig.from_env()
    assert config.precision_bits == 128
    assert config.enumeration_budget == 10**8
    assert config.sieve_limit == 10**6
    assert config.cache_path == Path("output/counts.json")
    assert config.output_format == "csv"
    assert config.workers == 1


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("MF_PRECISION_BITS", "256")
    monkeypatch.setenv("MF_ENUMERATION_BUDGET", "1_000_000")
    monkeypatch.setenv("MF_OUTPUT_FORMAT", "JSON")
    monkeypatch.setenv("MF_CACHE_PATH", str(tmp_path / "c.json"))
    monkeypatch.setenv("MF_SLACK_CONSTANT", "2.5")
    config = RunConfig.from_env()
    assert config.precision_bits == 256
    assert config.enumeration_budget == 10**6
    assert config.output_format == "json"
    assert config.cache_path == tmp_path / "c.json"
    assert config.slack_constant == 2.5


@pytest.mark.parametrize(
    "name, value",
    [
        ("MF_PRECISION_BITS", "32"),
        ("MF_PRECISION_BITS", "lots"),
        ("MF_WORKERS", "0"),
        ("MF_OUTPUT_FORMAT", "xlsx"),
        ("MF_SLACK_CONSTANT", "-1"),
    ],
)
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        RunConfig.from_env()
