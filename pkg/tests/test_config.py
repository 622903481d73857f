import logging

import pytest
from pydantic import ValidationError

from config.loader import (
    FitSettings,
    get_cache_dir,
    get_fit_config,
    get_log_level,
    get_numeric_config,
    get_primes,
    get_suite_orders,
    load_config,
)
from holonomy.utils.events import add_event, drain_events, timed_event
from holonomy.utils.logging import setup_logging

CONFIG = """
logging:
  level: INFO
primes:
  head: [27449, 32749]
  count: 4
fit:
  margin: 6
cache:
  directory: ${HOLONOMY_CACHE_DIR}
suites:
  pvi_order: 20
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(CONFIG, encoding="utf-8")
    return str(path)


def test_missing_file_gives_defaults(tmp_path):
    missing = str(tmp_path / "absent.yaml")
    assert load_config(missing) == {}
    assert get_fit_config(missing) == FitSettings()
    assert get_numeric_config(missing).dps == 40
    assert get_log_level(missing) == "WARNING"
    assert get_cache_dir(missing) is None


def test_unset_variable_expands_to_none(config_file):
    assert load_config(config_file)["cache"]["directory"] is None
    assert get_cache_dir(config_file) is None


def test_environment_overrides(config_file, monkeypatch, tmp_path):
    monkeypatch.setenv("HOLONOMY_CACHE_DIR", str(tmp_path / "cache"))
    assert get_cache_dir(config_file) == str(tmp_path / "cache")
    monkeypatch.setenv("HOLONOMY_PRIMES", "40009, 40013")
    assert get_primes(config_file) == [40009, 40013]


def test_sections(config_file):
    assert get_fit_config(config_file).margin == 6
    assert get_fit_config(config_file).exact_limit == 48
    assert get_log_level(config_file) == "INFO"
    assert get_suite_orders(config_file) == {"pvi_order": 20}


def test_prime_list_starts_with_reference_primes(config_file):
    primes = get_primes(config_file)
    assert primes[:2] == [27449, 32749]
    assert len(primes) == 4
    assert all(p < 2 ** 31 for p in primes)


def test_fit_settings_validation():
    with pytest.raises(ValidationError):
        FitSettings(max_primes=1)


# -- events and logging ------------------------------------------------------------------
def test_timed_event_pairs():
    with timed_event("work", {"order": 3}) as info:
        info["rows"] = 7
    start, stop = drain_events()
    assert start["message"] == "work started"
    assert stop["context"]["rows"] == 7
    assert stop["context"]["seconds"] >= 0
    assert drain_events() == []


def test_add_event_defaults_context():
    add_event("INFO", "hello")
    [event] = drain_events()
    assert event["context"] == {}


def test_setup_logging_sets_level():
    setup_logging("debug")
    assert logging.getLogger("holonomy").level == logging.DEBUG
    setup_logging("WARNING")
    assert logging.getLogger("holonomy.fitting").getEffectiveLevel() == logging.WARNING
