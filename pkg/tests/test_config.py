import json
import logging

import pytest
import structlog
from pydantic import ValidationError

import config
from config import Config, DevelopmentConfig, ProductionConfig, TestingConfig, configure_logging, get_config, set_config


def test_config_map():
    assert config.config['default'] is DevelopmentConfig
    assert config.config['production']().log_format == 'json'
    assert config.config['testing']().budget_max_steps_per_block == 128


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv('LIBRA_BUDGET_MAX_BLOCKS', '3')
    monkeypatch.setenv('LIBRA_GOEDEL_SCHEME', 'presentable')
    settings = Config()
    assert settings.budget_max_blocks == 3
    assert settings.goedel_scheme == 'presentable'


def test_get_config_picks_the_environment(monkeypatch):
    monkeypatch.setenv('LIBRA_ENV', 'production')
    set_config(None)
    assert isinstance(get_config(), ProductionConfig)


def test_unknown_environment_falls_back(monkeypatch):
    monkeypatch.setenv('LIBRA_ENV', 'staging')
    set_config(None)
    assert isinstance(get_config(), DevelopmentConfig)


def test_set_config_replaces_the_active_one(testing_config):
    assert get_config() is testing_config
    other = TestingConfig(threads=4)
    set_config(other)
    assert get_config().threads == 4


def test_json_logging(capsys):
    configure_logging('INFO', 'json')
    structlog.get_logger('libra.test').info("fragment closed", keys=3)
    line = capsys.readouterr().err.strip().splitlines()[-1]
    record = json.loads(line.split(': ', 1)[1])
    assert record['event'] == 'fragment closed'
    assert record['keys'] == 3
    assert logging.getLogger().level == logging.INFO


def test_invalid_settings_are_rejected(monkeypatch):
    monkeypatch.setenv('LIBRA_LOG_FORMAT', 'xml')
    with pytest.raises(ValidationError):
        Config()
    monkeypatch.delenv('LIBRA_LOG_FORMAT')
    with pytest.raises(ValidationError):
        Config(threads=0)


def test_audit_base_cap_is_opt_in(monkeypatch):
    assert Config().audit_max_base is None
    monkeypatch.setenv('LIBRA_AUDIT_MAX_BASE', '2')
    assert Config().audit_max_base == 2
    with pytest.raises(ValidationError):
        Config(audit_max_base=0)


def test_testing_config_is_not_collected():
    assert TestingConfig.__test__ is False
