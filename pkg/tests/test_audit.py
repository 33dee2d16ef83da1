import pytest
from structlog.testing import capture_logs

import syntax
from audit import (MAXIM, AuditPlan, CheckResult, Witness, base_sentences, check_stage_zero, disconnected_sentences,
                   find_mp_failure, kind_formula, prepare, run_audit, run_checks)
from config import TestingConfig, set_config
from errors import NotConverged
from fragments import FRAGMENT_DIR, load_fragment, parse_in
from revision_engine import Budget


@pytest.fixture(scope='module')
def russell_audit():
    set_config(TestingConfig())
    fragment = load_fragment(FRAGMENT_DIR / 'russell.json')
    report, trace = run_audit(fragment)
    return fragment, report, trace


def test_russell_audit_passes(russell_audit):
    fragment, report, trace = russell_audit
    assert report.ok
    outcomes = report.outcomes
    for name in ('posits', 'alethic-comprehension', 'set-prescripts', 'regulations', 'ex-falso',
                 'disconnection', 'semantic-laws', 'stage-zero', 'curry-triad', 'kind'):
        assert outcomes[name] == 'pass', name
    assert report.get('posits').instances > 0


def test_missing_features_are_skipped(russell_audit):
    fragment, report, trace = russell_audit
    assert report.outcomes['bivalence'] == 'skip'
    assert report.outcomes['euro-prescripts'] == 'skip'
    assert report.outcomes['truth-prescription'] == 'skip'
    assert report.outcomes['identity-surprise'] == 'skip'


def test_russell_has_no_mp_failure(russell_audit):
    fragment, report, trace = russell_audit
    assert report.mp_failure is None


def test_both_russell_sentences_are_disconnected(russell_audit):
    fragment, report, trace = russell_audit
    rr = parse_in(fragment, '$r in $r')
    plan = AuditPlan(fragment)
    assert set(disconnected_sentences(trace, plan)) == {rr, syntax.neg(rr)}


def test_report_payloads(russell_audit):
    fragment, report, trace = russell_audit
    payload = report.to_dict(dict(fragment.names))
    assert payload['ok'] is True
    assert [check['name'] for check in payload['checks']][0] == 'posits'
    text = report.to_text()
    assert text.splitlines()[0] == fragment.banner
    assert 'regulations' in text


def test_plan_is_stable_under_prepare(fragments_dir):
    fragment = load_fragment(fragments_dir / 'russell.json')
    plan = AuditPlan(fragment)
    prepared = prepare(fragment, plan)
    assert set(plan.formulas()) <= set(prepared.tracked)
    assert base_sentences(fragment) == plan.base


def test_audit_base_takes_every_sentence_unless_capped(fragments_dir):
    fragment = load_fragment(fragments_dir / 'curry-false.json')
    everything = base_sentences(fragment)
    assert parse_in(fragment, '$r in $r') in everything
    assert len(everything) == 3
    with capture_logs() as logs:
        capped = AuditPlan(fragment, limit=1)
    assert capped.base == everything[:1]
    assert len(capped.open_base) == 1
    truncated = [entry for entry in logs if entry['event'] == 'audit base truncated']
    assert truncated[0]['dropped'] == 2


def test_curry_false_breaks_modus_ponens(fragments_dir):
    fragment = load_fragment(fragments_dir / 'curry-false.json')
    report, trace = run_audit(fragment)
    failure = report.mp_failure
    assert failure['A'] == '$c in $c'
    F = parse_in(fragment, 'not all v0. v0 in $r -> v0 in $r')
    assert parse_in(fragment, failure['B']) is F
    assert parse_in(fragment, failure['A->B']) is syntax.implies(parse_in(fragment, '$c in $c'), F)
    assert report.outcomes['regulations'] == 'pass'
    assert report.outcomes['curry-triad'] == 'pass'
    assert report.outcomes['ex-falso'] == 'pass'


def test_truth_prescription_with_a_registry(fragments_dir):
    fragment = load_fragment(fragments_dir / 'tautology-kind.json')
    report, trace = run_audit(fragment)
    check = report.get('truth-prescription')
    assert check.outcome == 'pass'
    assert check.instances == 1
    assert report.outcomes['kind'] == 'pass'


def test_identity_deviations_are_not_failures(fragments_dir):
    fragment = load_fragment(fragments_dir / 'identity-surprise.json')
    report, trace = run_audit(fragment)
    surprise = report.get('identity-surprise')
    assert surprise.outcome == 'pass'
    assert surprise.instances == len(fragment.abstractions)
    assert report.outcomes['stage-zero'] == 'pass'


def test_stage_zero_needs_no_closure(fragments_dir):
    fragment = load_fragment(fragments_dir / 'russell.json')
    result = check_stage_zero(fragment.engine.run())
    assert result.outcome == 'pass'
    assert result.instances == 2


def test_checks_need_a_converged_trace(fragments_dir):
    fragment = load_fragment(fragments_dir / 'russell.json')
    with pytest.raises(NotConverged) as info:
        fragment.engine.run(Budget(max_steps_per_block=2, max_blocks=1))
    with pytest.raises(NotConverged):
        run_checks(info.value.trace)
    with pytest.raises(NotConverged):
        find_mp_failure(info.value.trace)


def test_check_result_outcomes():
    result = CheckResult('demo')
    assert result.outcome == 'pass'
    result.skip('nothing to check')
    assert result.outcome == 'skip'
    A = syntax.member(syntax.alethizor(), syntax.alethizor())
    result.record(False, Witness('demo', 'label', A, 'OUT', MAXIM))
    assert result.outcome == 'fail'
    assert result.failures[0].to_dict()['sentence'] == 'T in T'


def test_witness_replay(fragments_dir):
    fragment = load_fragment(fragments_dir / 'russell.json')
    rr = parse_in(fragment, '$r in $r')
    assert Witness('demo', 'replay', rr, 'UNSTAB', MAXIM).replay(fragment)
    assert not Witness('demo', 'replay', rr, 'IN', MAXIM).replay(fragment)


def test_kind_formula_shape():
    a = syntax.alethizor()
    formula = kind_formula(a, 3)
    assert formula.kind is syntax.Kind.UNIVERSAL
    assert formula.binder == 3
    assert formula.noemata == frozenset()


@pytest.mark.slow
def test_euro_prescripts_hold_on_declared_pairs(fragments_dir):
    report, _ = run_audit(load_fragment(fragments_dir / 'euro-small.json'))
    euro = report.get('euro-prescripts')
    assert euro.outcome == 'pass'
    assert euro.failures == []
    assert euro.instances == 6
    assert '€1 needs a term for ℕ' in euro.skips


def test_euro_membership_is_fixed_from_stage_zero(fragments_dir):
    fragment = load_fragment(fragments_dir / 'euro-small.json')
    trace = fragment.engine.run()
    first, second = fragment.euro_pairs()
    E = syntax.enumerator()
    assert trace.status(syntax.member(first, E)) == 'IN'
    assert all(value for _, value in trace.truths(syntax.member(second, E)))
    assert not any(value for _, value in trace.truths(syntax.member(syntax.alethizor(), E)))
