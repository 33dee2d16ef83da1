import json

import pytest

import syntax
from errors import FileNotFound, FragmentFileError, PresentableSyntaxError, UnresolvedTerm
from fragments import (FRAGMENT_DIR, dumps, fragment_from_dict, list_scenarios, load_fragment, load_scenario,
                       parse_in, render_in, write_report)
from revision_engine import LEIBNIZ, Budget


@pytest.mark.parametrize('path', sorted(FRAGMENT_DIR.glob('*.json')), ids=lambda p: p.stem)
def test_shipped_fragments_load(path):
    fragment = load_fragment(path)
    assert fragment.universe
    assert fragment.description


def test_names_resolve_in_order(make_fragment):
    fragment = make_fragment(
        names={'r': '{v0 | not v0 in v0}', 'c': 'curry($r in $r)'},
        terms=['$c'],
        formulas=['$c in $c'],
    )
    r = fragment.names['r']
    assert fragment.names['c'] is syntax.curry(syntax.member(r, r))
    assert fragment.universe == (fragment.names['c'],)
    assert render_in(fragment, syntax.member(r, r)) == '$r in $r'


def test_tracked_sentences_include_negjunctions(make_fragment):
    fragment = make_fragment(terms=['T'], formulas=['T in T'])
    A = parse_in(fragment, 'T in T')
    assert fragment.tracked == (A, syntax.neg(A))


def test_options(make_fragment):
    fragment = make_fragment(terms=['T'], identity_mode='leibniz', budget={'max_blocks': 3})
    assert fragment.identity_mode == LEIBNIZ
    assert fragment.budget == Budget(fragment.budget.max_steps_per_block, 3)
    assert not fragment.euro_enabled


def test_registry_term_defaults_to_the_presentable_code(make_fragment):
    fragment = make_fragment(terms=['T'], registry=[{'formula': 'T in T'}, {'formula': 'E in E', 'term': 'E'}])
    first, second = fragment.registry
    assert first.term.kind is syntax.Kind.NUMERAL
    assert first.term.index == syntax.formation_value(syntax.member(syntax.alethizor(), syntax.alethizor()))
    assert second.term is syntax.enumerator()


@pytest.mark.parametrize('document, where', [
    ({}, '(root)'),
    ({'terms': []}, 'terms'),
    ({'terms': ['T'], 'identity_mode': 'extensional'}, 'identity_mode'),
    ({'terms': ['T'], 'colour': 'red'}, '(root)'),
    ({'terms': ['T'], 'budget': {'max_blocks': 0}}, 'budget/max_blocks'),
])
def test_schema_violations(document, where):
    with pytest.raises(FragmentFileError) as info:
        fragment_from_dict(document, 'inline.json')
    assert info.value.details['at'] == where


def test_bad_presentable_text_names_the_file(make_fragment):
    with pytest.raises(PresentableSyntaxError) as info:
        fragment_from_dict({'terms': ['T union']}, 'broken.json')
    assert info.value.details['path'] == 'broken.json'


def test_unresolved_noemata(make_fragment):
    with pytest.raises(UnresolvedTerm):
        make_fragment(terms=['T'], formulas=['v0 in T'])


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(FileNotFound):
        load_fragment(tmp_path / 'absent.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"terms": [', encoding='utf-8')
    with pytest.raises(FragmentFileError) as info:
        load_fragment(broken)
    assert info.value.details['line'] == 1


def test_scenarios_are_listed_and_resolve_their_fragments():
    names = list_scenarios()
    assert {'russell', 'curry-false', 'tautology-kind', 'enumeration-smoke', 'diagonal-smoke'} <= set(names)
    document = load_scenario('russell')
    assert document['fragment'].endswith('russell.json')
    assert load_fragment(document['fragment']).names


def test_dumps_is_deterministic(tmp_path):
    payload = {'b': 1, 'a': ['ω', 2]}
    assert dumps(payload) == '{\n  "a": [\n    "ω",\n    2\n  ],\n  "b": 1\n}'
    target = tmp_path / 'report.json'
    write_report(payload, target)
    assert json.loads(target.read_text(encoding='utf-8')) == payload
