import pytest

import goedel
import syntax
from codec import formation_of
from errors import NotTermCode, WrongNoemata
from presentable import parse
from substitution import SUB, CodedExpr, Sub, check_diagonal, diagonal, dotted, splice, sub, sub_simultaneous
from syntax import alethizor, enumerator, member, noema

T = alethizor()
E = enumerator()
v0, v1, v2 = noema(0), noema(1), noema(2)


def test_sub_replaces_free_noema():
    result = sub(member(v0, T), 0, E)
    assert result.expr is member(E, T)


def test_sub_leaves_bound_occurrences():
    A = syntax.universal(0, member(v0, T))
    assert sub(A, 0, E).expr is A


def test_sub_on_numbers_round_trips_through_codes():
    A = member(v0, T)
    n = syntax.formation_value(A)
    result = sub(n, 0, syntax.formation_value(E))
    assert result.number == syntax.formation_value(member(E, T))


def test_inserted_code_must_be_a_term():
    with pytest.raises(NotTermCode):
        sub(member(v0, T), 0, member(T, T))


def test_raw_numbers_fall_through():
    raw = CodedExpr.from_number(3)
    assert not raw.decodes
    assert Sub(raw, T).number == 3


def test_big_sub_uses_the_least_noema():
    A = member(v2, v1)
    assert Sub(A, T).expr is member(v2, T)


def test_big_sub_on_closed_formulas_is_identity():
    A = member(T, T)
    assert Sub(A, E).expr is A


def test_dotted_inserts_a_numeral():
    A = member(v0, T)
    assert SUB(A, 4).expr is member(goedel.goedel_code(4).node, T)
    assert dotted(A, 4) is SUB(A, 4).expr


def test_simultaneous_substitution_swaps():
    A = member(v0, v1)
    swapped = sub_simultaneous(A, {0: v1, 1: v0})
    assert swapped.expr is member(v1, v0)
    chained = Sub(Sub(A, v1), v0)
    assert chained.expr is not swapped.expr


def test_diagonal_certificate():
    A = parse('v0 in T')
    certificate = diagonal(A)
    assert certificate.m == 544
    assert certificate.verified
    assert certificate.sentence is member(goedel.goedel_code(544).node, T)
    assert certificate.evaluated is certificate.sentence


def test_diagonal_under_the_presentable_scheme():
    certificate = diagonal(parse('not v0 in T'), 'presentable')
    assert certificate.verified
    assert certificate.sentence.noemata == frozenset()


def test_diagonal_needs_exactly_v0():
    with pytest.raises(WrongNoemata):
        diagonal(parse('T in T'))
    with pytest.raises(WrongNoemata):
        diagonal(parse('v0 in v1'))


def test_certificate_payload():
    payload = diagonal(parse('v0 in T')).to_dict()
    assert payload['m'] == 544
    assert payload['verified'] is True
    assert payload['sentence'] == 'code(544) in T'


def test_diagonal_is_rederived_from_m_alone():
    certificate = diagonal(parse('v0 in T'))
    assert certificate.problems == []
    assert check_diagonal(544, certificate.sentence, 'literal') == []
    assert any(step.startswith('formation splice skipped') for step in certificate.trail)
    assert diagonal(parse('v0 in T')).to_dict()['problems'] == []


def test_check_diagonal_rejects_other_sentences():
    assert check_diagonal(544, member(goedel.goedel_code(545, 'literal').node, T), 'literal')
    assert check_diagonal(544, member(goedel.goedel_code(544, 'presentable').node, T), 'literal')
    assert check_diagonal(544, member(T, T), 'literal')
    assert check_diagonal(544, member(T, goedel.goedel_code(544, 'literal').node), 'literal')


def test_splice_matches_sub_on_a_small_numeral():
    A = parse('(all v0. v0 in v0) and v0 in T')
    zero = goedel.goedel_code(0, 'literal')
    inserted = formation_of(goedel.materialize(zero)).symbols
    assert splice(A, inserted).value == syntax.formation_value(sub(A, 0, zero.node).expr)
    assert splice(A, inserted).value != syntax.formation_value(A)
