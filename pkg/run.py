#!/usr/bin/env python3
"""
Скрипт для запуска рабочего места £

Без аргументов проверяет окружение и прогоняет поставляемые сценарии;
с аргументами передаёт их командной строке (см. cli.py).
"""
import importlib
import os
import sys

REQUIRED_PACKAGES = {
    'dotenv': 'python-dotenv',
    'pydantic': 'pydantic',
    'pydantic_settings': 'pydantic-settings',
    'jsonschema': 'jsonschema',
    'structlog': 'structlog',
    'arpeggio': 'Arpeggio',
}


def check_packages() -> bool:
    """Проверяет, что установлены все зависимости"""
    missing = []
    for module, package in REQUIRED_PACKAGES.items():
        try:
            importlib.import_module(module)
        except ImportError:
            missing.append(package)
    if missing:
        print(f"❌ Не установлены пакеты: {', '.join(missing)}")
        print("💡 Выполните: pip install -r requirements.txt")
        return False
    print("✅ Все зависимости установлены")
    return True


def check_environment() -> None:
    """Проверяет настройки окружения"""
    print("🔍 Проверка настроек окружения...")
    from config import get_config

    settings = get_config()
    print(f"✅ Окружение: {os.getenv('LIBRA_ENV', 'default')} ({settings.env})")
    print(f"📐 Бюджет: {settings.budget_max_steps_per_block} шагов на ω-блок, "
          f"{settings.budget_max_blocks} блоков")
    print(f"🔢 Схема гёделевых кодов: {settings.goedel_scheme}")
    if settings.threads > 1:
        print(f"🧵 Потоков: {settings.threads}")


def run_scenarios() -> bool:
    """Прогоняет все поставляемые сценарии"""
    from cli import run_scenario
    from errors import LibraError
    from fragments import list_scenarios

    all_passed = True
    for name in list_scenarios():
        try:
            result = run_scenario(name)
        except LibraError as e:
            print(f"❌ {name}: {e}")
            all_passed = False
            continue
        if result.passed:
            print(f"✅ {name}")
        else:
            failed = [check['check'] for check in result.checks if not check['ok']]
            print(f"❌ {name}: {', '.join(failed)}")
            all_passed = False
    return all_passed


def main():
    """Основная функция запуска"""
    if len(sys.argv) > 1:
        from cli import main as cli_main
        sys.exit(cli_main(sys.argv[1:]))

    print("🚀 Запуск рабочего места £...")
    print("=" * 50)
    if not check_packages():
        sys.exit(1)
    check_environment()
    print()

    from config import configure_logging
    configure_logging()
    print("📊 Прогон сценариев...")
    try:
        ok = run_scenarios()
    except KeyboardInterrupt:
        print("\n👋 Прогон остановлен")
        sys.exit(130)
    print("=" * 50)
    print("🎉 Все сценарии прошли" if ok else "⚠️  Есть непрошедшие сценарии")
    print("📝 Справка по командам: python run.py --help")
    sys.exit(0 if ok else 1)


if __name__ == '__main__':
    main()
