"""
Общие фикстуры тестов
"""
from pathlib import Path

import pytest

import presentable
from config import TestingConfig, configure_logging, set_config
from fragments import fragment_from_dict

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def testing_config():
    """Каждый тест начинает с тестовой конфигурации"""
    settings = TestingConfig()
    set_config(settings)
    configure_logging('WARNING', 'console')
    yield settings
    set_config(TestingConfig())


@pytest.fixture
def fragments_dir() -> Path:
    return ROOT / 'fragments'


@pytest.fixture
def russell_set():
    return presentable.parse('{v0 | not v0 in v0}', 'term')


@pytest.fixture
def make_fragment():
    """Фрагмент из словаря в формате файла фрагмента"""
    def build(**document):
        return fragment_from_dict(document)
    return build
