import json

import pytest

from cli import main, run_scenario
from fragments import FRAGMENT_DIR

RUSSELL = str(FRAGMENT_DIR / 'russell.json')


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_encode(capsys):
    code, payload = run_json(capsys, 'encode', '|₂|₃|₃')
    assert code == 0
    assert payload == {'value': 1160, 'bits': 11, 'austere': '|..|...|...'}


def test_decode(capsys):
    code, payload = run_json(capsys, 'decode', '8')
    assert code == 0
    assert payload['austere'] == '|...'
    assert payload['expression']['presentable'] == 'T'
    assert payload['expression']['category'] == 'term'


def test_decode_of_a_non_expression_keeps_the_formation(capsys):
    code, payload = run_json(capsys, 'decode', '2')
    assert code == 0
    assert payload['expression'] is None
    assert payload['note']['error']


def test_parse_reports_value_and_classes(capsys):
    code, payload = run_json(capsys, 'parse', '|..|...|...')
    assert code == 0
    assert payload['value'] == 1160
    assert payload['presentable'] == 'comp(T)'


def test_print_forms(capsys):
    _, payload = run_json(capsys, 'print', 'comp(T)', '--form', 'austere')
    assert payload == {'form': 'austere', 'text': '|..|...|...'}
    _, payload = run_json(capsys, 'print', '1160', '--source', 'formation')
    assert payload['text'] == 'comp(T)'


def test_code_of_one(capsys):
    code, payload = run_json(capsys, 'code', '1')
    assert code == 0
    assert payload['bit_length'] == 856
    assert payload['free_noemata'] == [1]


def test_code_of_zero_carries_the_size_remark(capsys):
    _, payload = run_json(capsys, 'code', '0')
    assert 'size_remark' in payload
    assert payload['free_noemata'] == []


def test_sub_with_numeral(capsys):
    code, payload = run_json(capsys, 'sub', 'v0 in T', '--numeral', '0')
    assert code == 0
    assert payload['result']['noemata'] == []


def test_diag(capsys):
    code, payload = run_json(capsys, 'diag', 'v0 in T')
    assert code == 0
    assert payload['verified'] is True
    assert payload['m'] == 544
    assert payload['sentence'] == 'code(544) in T'


def test_enum(capsys):
    code, payload = run_json(capsys, 'enum', '--count', '3')
    assert code == 0
    assert [entry['value'] for entry in payload['entries']] == [8, 16, 1160]


def test_enum_budget_exit_code(capsys):
    code, payload = run_json(capsys, 'enum', '--count', '5', '--max-bits', '12')
    assert code == 2
    assert payload['error'] == 'BudgetExceeded'


def test_simulate_russell(capsys):
    code, payload = run_json(capsys, 'simulate', RUSSELL)
    assert code == 0
    assert payload['converged'] is True
    assert payload['closure']['block'] == 1
    assert payload['sentences']['$r in $r']['status'] == 'MinorThesis'


def test_simulate_out_of_budget(capsys):
    code, payload = run_json(capsys, '--budget-steps', '2', 'simulate', RUSSELL)
    assert code == 2
    assert payload['error'] == 'NotConverged'
    assert payload['trace']['converged'] is False


def test_classify_extra_sentences(capsys):
    code, payload = run_json(capsys, 'classify', RUSSELL, '$r in $r')
    assert code == 0
    assert list(payload['sentences']) == ['$r in $r']


def test_relations(capsys):
    code, payload = run_json(capsys, 'relations', RUSSELL, '$r in $r', 'not $r in $r')
    assert code == 0
    assert payload['contravalent'] is True
    assert payload['parivalent'] is False
    assert payload['first'] == '$r in $r'


def test_audit_text_output(capsys):
    code, out = run(capsys, '--text', 'audit', RUSSELL)
    assert code == 0
    assert 'curry-triad' in out


def test_output_file(capsys, tmp_path):
    target = tmp_path / 'enum.json'
    code, payload = run_json(capsys, '--output', str(target), 'enum', '--count', '2')
    assert code == 0
    assert json.loads(target.read_text(encoding='utf-8')) == payload


def test_scenario_list(capsys):
    _, payload = run_json(capsys, 'scenario', 'list')
    assert 'russell' in payload['scenarios']


def test_scenario_run(capsys):
    code, payload = run_json(capsys, 'scenario', 'run', 'enumeration-smoke')
    assert code == 0
    assert payload['passed'] is True


def test_scenario_run_needs_a_name(capsys):
    code, payload = run_json(capsys, 'scenario', 'run')
    assert code == 1
    assert payload['error'] == 'LibraError'


@pytest.mark.parametrize('argv, error', [
    (['parse', '|x'], 'MalformedFormation'),
    (['decode', '0'], 'ZeroNotFormation'),
    (['simulate', 'absent.json'], 'FileNotFound'),
    (['print', 'T union'], 'PresentableSyntaxError'),
])
def test_domain_errors_exit_with_one(capsys, argv, error):
    code, payload = run_json(capsys, *argv)
    assert code == 1
    assert payload['error'] == error


def test_global_flags_update_the_config(capsys):
    from config import get_config
    run(capsys, '--threads', '3', '--scheme', 'presentable', 'scenario', 'list')
    settings = get_config()
    assert settings.threads == 3
    assert settings.goedel_scheme == 'presentable'


def test_run_scenario_records_checks():
    result = run_scenario('diagonal-smoke')
    assert result.passed
    assert result.checks == [{'check': 'certificate verified', 'expected': True, 'actual': True, 'ok': True}]
