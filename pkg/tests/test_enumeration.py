import pytest

import syntax
from enumeration import (EnumPrefix, Verdict, cached_prefix, enumerate_cognomina, order_le, order_lt,
                         variant, variant_formulas)
from errors import BudgetExceeded, NotCognomen, NotEnumerated
from presentable import parse
from syntax import alethizor, enumerator

T = alethizor()
E = enumerator()

FIRST_FIVE = ['|...', '|....', '|..|...|...', '|..|....|...', '|..|....|....']


@pytest.fixture(scope='module')
def prefix():
    return enumerate_cognomina(5, max_bits=14, threads=1)


def test_first_five_cognomina(prefix):
    assert [entry.austere for entry in prefix.entries] == FIRST_FIVE
    assert [entry.value for entry in prefix.entries] == [8, 16, 1160, 2312, 4624]
    assert prefix.coercions == []


def test_threads_do_not_change_the_order(prefix):
    again = enumerate_cognomina(5, max_bits=14, threads=3, chunk=256)
    assert again.terms == prefix.terms


def test_joint_terms_are_unordered_for_variance():
    assert variant(syntax.joint_term(T, E), syntax.joint_term(E, T)) is Verdict.VARIANT
    assert variant(syntax.joint_term(T, T), syntax.joint_term(T, E)) is Verdict.NOT_VARIANT


def test_abstractions_vary_with_their_binders():
    a = parse('{v0 | v0 in T}', 'term')
    b = parse('{v1 | v1 in T}', 'term')
    assert variant(a, b) is Verdict.VARIANT


def test_truth_table_core():
    a = parse('{v0 | v0 in T and E in E}', 'term')
    b = parse('{v0 | E in E and v0 in T}', 'term')
    c = parse('{v0 | T in T}', 'term')
    d = parse('{v0 | E in E}', 'term')
    assert variant(a, b) is Verdict.VARIANT
    assert variant(c, d) is Verdict.NOT_VARIANT


def test_variant_formulas_on_propositions():
    A = parse('T in T or E in E')
    B = parse('E in E or T in T')
    assert variant_formulas(A, B) is Verdict.VARIANT


def test_variance_needs_cognomina():
    with pytest.raises(NotCognomen):
        variant(syntax.noema(0), T)


def test_alias_and_index(prefix):
    assert prefix.alias(0) is T
    assert prefix.index_of(syntax.joint_term(T, E)) == 3
    with pytest.raises(NotEnumerated):
        prefix.alias(5)
    with pytest.raises(NotEnumerated):
        prefix.index_of(parse('{v0 | v0 in v0}', 'term'))


def test_enumeration_order(prefix):
    assert order_lt(T, E, prefix)
    assert not order_lt(E, T, prefix)
    assert order_le(E, E, prefix)
    assert order_le(syntax.joint_term(E, T), syntax.joint_term(T, E), prefix) is False


def test_budget_stops_the_scan():
    with pytest.raises(BudgetExceeded):
        enumerate_cognomina(5, max_bits=12, threads=1)


def test_prefix_slices():
    full = cached_prefix(5, 14)
    assert cached_prefix(5, 14) is full
    assert isinstance(full.prefix(2), EnumPrefix)
    assert len(full.prefix(2)) == 2
    payload = full.to_dict()
    assert payload['count'] == 5
    assert payload['entries'][2]['presentable'] == 'comp(T)'
