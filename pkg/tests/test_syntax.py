import pytest
from hypothesis import given, settings

import syntax
from codec import value_of
from errors import Ambiguous, NotCognomen, NotInCategory
from syntax import Category, Kind, alethizor, enumerator, member, noema
from tests.strategies import expressions

T = alethizor()
E = enumerator()


def test_praenomina_parse():
    assert syntax.parse('|...') is T
    assert syntax.parse('|....') is E
    assert syntax.parse('|.....', 'term') is noema(0)


def test_joint_term_parse():
    assert syntax.parse('|..|...|...') is syntax.joint_term(T, T)


def test_atom_reads_container_first():
    A = syntax.parse('|...|....')
    assert A.kind is Kind.ATOM
    assert A is member(E, T)
    assert A.container is T and A.element is E


def test_lone_symbols_are_not_expressions():
    with pytest.raises(NotInCategory):
        syntax.parse('|')
    with pytest.raises(NotInCategory):
        syntax.parse('|...', 'formula')


def test_interning_gives_identity():
    assert syntax.joint_term(T, E) is syntax.joint_term(T, E)
    assert syntax.neg(member(T, T)) is syntax.joint_formula(member(T, T), member(T, T))


def test_noemata_skip_bound_occurrences():
    body = member(noema(0), noema(1))
    assert syntax.abstraction(0, body).noemata == frozenset({1})
    assert syntax.universal(1, body).noemata == frozenset({0})


def test_substitute_replaces_free_occurrences_only():
    A = syntax.conj(member(noema(0), T), syntax.universal(0, member(noema(0), E)))
    result = syntax.substitute(E, 0, A)
    assert result is syntax.conj(member(E, T), syntax.universal(0, member(noema(0), E)))


def test_substitutable_detects_capture():
    A = syntax.universal(1, member(noema(0), noema(1)))
    assert not syntax.substitutable(noema(1), 0, A)
    assert syntax.substitutable(noema(2), 0, A)
    assert syntax.substitutable(T, 0, A)


def test_caliber():
    assert syntax.caliber(T) == 0
    assert syntax.caliber(syntax.joint_term(T, T)) == 1
    assert syntax.caliber(syntax.joint_term(syntax.joint_term(T, T), E)) == 2
    assert syntax.caliber(syntax.abstraction(0, member(noema(0), noema(0)))) == 0


def test_caliber_needs_a_cognomen():
    with pytest.raises(NotCognomen):
        syntax.caliber(noema(0))


def test_term_classes():
    assert syntax.classify_term(T) == frozenset({'praenomen', 'cognomen'})
    assert syntax.classify_term(noema(0)) == frozenset({'praenomen', 'nomen-with-noemata'})
    russell = syntax.abstraction(0, syntax.neg(member(noema(0), noema(0))))
    assert syntax.classify_term(russell) == frozenset({'cognomen', 'pronomen'})
    assert syntax.is_pronomen(russell)
    assert not syntax.is_pronomen(syntax.joint_term(russell, T))


def test_truth_binds_the_least_absent_noema():
    A = member(noema(0), T)
    TA = syntax.truth(A)
    assert TA is syntax.exists(1, member(noema(1), syntax.abstraction(1, A)))
    assert TA.noemata == A.noemata


def test_identity_quantifies_a_fresh_noema():
    formula = syntax.identity(noema(0), noema(1))
    assert formula.kind is Kind.UNIVERSAL
    assert formula.binder == 2
    assert formula.noemata == frozenset({0, 1})


def test_curry_set_shape():
    F = member(T, T)
    c = syntax.curry(F)
    assert c is syntax.abstraction(0, syntax.implies(member(noema(0), noema(0)), F))


def test_set_operations_reduce_to_joint():
    a, b = T, E
    assert syntax.complement(a) is syntax.joint_term(a, a)
    assert syntax.union(a, b) is syntax.complement(syntax.joint_term(a, b))
    assert syntax.difference(a, b) is syntax.intersection(a, syntax.complement(b))


def test_austere_and_bare_rendering():
    e = syntax.joint_term(T, T)
    assert syntax.render(e, 'austere') == '|..|...|...'
    assert syntax.render(e, 'bare') == '|₂|₃|₃'
    with pytest.raises(ValueError):
        syntax.render(e, 'fancy')


def test_parse_number_matches_parse():
    assert syntax.parse_number(1160) is syntax.parse('|..|...|...')


@settings(max_examples=150, deadline=None)
@given(expressions)
def test_formation_value_matches_flatten(e):
    assert syntax.formation_value(e) == syntax.flatten(e).value
    assert syntax.flatten(e).bit_length == e.bit_length


@settings(max_examples=150, deadline=None)
@given(expressions)
def test_flattened_expressions_parse_back(e):
    category = Category.TERM if e.is_term else Category.FORMULA
    tokens = syntax.flatten(e).symbols
    try:
        assert syntax.parse_tokens(tokens, category) is e
    except Ambiguous as clash:
        readings = {clash.first, clash.second}
        assert len(readings) == 2
        assert all(tuple(syntax.symbols(reading)) == tokens for reading in readings)


def test_one_formation_can_read_as_two_formulas():
    tt = member(T, T)
    nested = syntax.atom(syntax.joint_term(T, T), syntax.abstraction(0, syntax.joint_formula(tt, tt)))
    joined = syntax.joint_formula(tt, syntax.atom(syntax.abstraction(0, syntax.atom(syntax.joint_term(T, T), T)), T))
    tokens = (2, 3, 3, 0, 5, 2, 3, 3, 3, 3)
    assert syntax.flatten(nested).symbols == syntax.flatten(joined).symbols == tokens
    with pytest.raises(Ambiguous) as info:
        syntax.parse_tokens(tokens, Category.FORMULA)
    assert {info.value.first, info.value.second} == {nested, joined}
    with pytest.raises(NotInCategory):
        syntax.parse_tokens(tokens, Category.TERM)


def test_long_formations_parse_without_recursion():
    tokens = (2, 3) * 4000 + (3,)
    chain = syntax.parse_tokens(tokens, Category.TERM)
    assert chain.kind is Kind.JOINT_TERM
    assert tuple(syntax.symbols(chain)) == tokens


def test_categories_are_disjoint_on_short_formations():
    census = syntax.category_census(10)
    assert census['ambiguous'] == []
    assert census['clashes'] == {'term': [], 'formula': []}
    assert sum(census['counts'].values()) == (1 << 10) - 1


def test_auto_category_picks_the_only_reading():
    A = syntax.parse("|...|...")
    assert A.is_formula
    assert syntax.formation_value(A) == value_of("|...|...") == 136
