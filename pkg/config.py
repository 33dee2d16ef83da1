import logging
import os
import sys
from typing import Optional

import structlog
from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Загружаем переменные окружения
load_dotenv()


class Config(BaseSettings):
    """Базовая конфигурация рабочего места"""

    model_config = SettingsConfigDict(env_prefix='LIBRA_', extra='ignore')

    # Основные настройки
    env: str = 'development'
    log_level: str = 'WARNING'
    log_format: str = 'console'

    # Бюджеты движка пересмотра (LIBRA_BUDGET_*)
    budget_max_steps_per_block: int = 256
    budget_max_blocks: int = 8
    budget_materialize_bits: int = 1 << 20

    # Гёделевы коды
    max_code_source: int = 100_000
    max_numeral_unfold: int = 128
    goedel_scheme: str = 'literal'

    # Перечисление когноменов
    enum_max_bits: int = 16
    default_enum_prefix: int = 5

    # Фрагменты и аудит
    max_lookback_atoms: int = 50_000
    audit_max_base: Optional[int] = None
    threads: int = 1

    @field_validator('log_format')
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in ('console', 'json'):
            raise ValueError("log_format must be console or json")
        return value

    @field_validator('goedel_scheme')
    @classmethod
    def _known_scheme(cls, value: str) -> str:
        if value not in ('literal', 'presentable'):
            raise ValueError("goedel_scheme must be literal or presentable")
        return value

    @field_validator('threads', 'budget_max_steps_per_block', 'budget_max_blocks')
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator('audit_max_base')
    @classmethod
    def _positive_cap(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("must be at least 1 when set")
        return value


class DevelopmentConfig(Config):
    """Конфигурация для разработки"""
    log_level: str = 'INFO'


class ProductionConfig(Config):
    """Конфигурация для пакетных прогонов"""
    log_level: str = 'WARNING'
    log_format: str = 'json'


class TestingConfig(Config):
    """Конфигурация для тестирования"""
    __test__ = False

    log_level: str = 'WARNING'
    budget_max_steps_per_block: int = 128
    enum_max_bits: int = 14


# Словарь конфигураций
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}

_active: Optional[Config] = None


def get_config() -> Config:
    """Returns the active configuration, chosen by LIBRA_ENV on first use"""
    global _active
    if _active is None:
        env = os.getenv('LIBRA_ENV', 'default')
        _active = config.get(env, config['default'])()
    return _active


def set_config(settings: Config) -> None:
    """Replaces the active configuration (used by the CLI flags and tests)"""
    global _active
    _active = settings


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Routes structlog through stdlib logging on stderr"""
    settings = get_config()
    level_name = (level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING),
                        format='%(levelname)s: %(message)s', stream=sys.stderr, force=True)
    renderer = (structlog.processors.JSONRenderer(sort_keys=True)
                if (fmt or settings.log_format) == 'json'
                else structlog.dev.ConsoleRenderer(colors=False))
    structlog.configure(
        processors=[
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
