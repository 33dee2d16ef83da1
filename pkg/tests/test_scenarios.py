"""
Поставляемые сценарии: каждый должен проходить все свои проверки
"""
import pytest

from cli import run_scenario
from fragments import list_scenarios

HEAVY = {'power-set', 'russell-audit', 'identity-surprise', 'curry-false', 'euro-small'}


def _param(name):
    marks = [pytest.mark.slow] if name in HEAVY else []
    return pytest.param(name, marks=marks, id=name)


@pytest.mark.parametrize('name', [_param(name) for name in list_scenarios()])
def test_scenario_passes(name):
    result = run_scenario(name)
    failed = [check for check in result.checks if not check['ok']]
    assert result.checks
    assert not failed, failed
