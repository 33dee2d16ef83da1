import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import goedel
import syntax
from errors import PresentableSyntaxError
from presentable import parse, render
from syntax import alethizor, enumerator, member, noema
from tests.strategies import expressions, flat_formulas

T = alethizor()
E = enumerator()
v0, v1 = noema(0), noema(1)


def test_atoms_and_identity():
    assert parse('T in E') is member(T, E)
    assert parse('v0 = v1') is syntax.identity(v0, v1)


def test_abstraction_and_sugar():
    russell = syntax.abstraction(0, syntax.neg(member(v0, v0)))
    assert parse('{v0 | not v0 in v0}', 'term') is russell
    assert parse('comp(T)', 'term') is syntax.complement(T)
    assert parse('T union E', 'term') is syntax.union(T, E)
    assert parse('T inter E', 'term') is syntax.intersection(T, E)
    assert parse('T minus E', 'term') is syntax.difference(T, E)
    assert parse('nor(T, E)', 'term') is syntax.joint_term(T, E)
    assert parse('pair(T, E)', 'term') is syntax.pair(T, E)
    assert parse('curry(T in T)', 'term') is syntax.curry(member(T, T))


def test_truth_and_quantifiers():
    A = member(T, T)
    assert parse('TT(T in T)') is syntax.truth(A)
    assert parse('exists v0. v0 in T') is syntax.exists(0, member(v0, T))
    assert parse('all v0. v0 in T') is syntax.universal(0, member(v0, T))


def test_codes():
    assert parse('code(3)', 'term') is goedel.LITERAL.numeral(3)
    assert parse('pcode(3)', 'term') is goedel.PRESENTABLE.numeral(3)


def test_connective_precedence():
    A, B, C = member(T, T), member(E, E), member(T, E)
    assert parse('T in T or E in E and T in E') is syntax.disj(A, syntax.conj(B, C))
    assert parse('T in T -> E in E -> T in E') is syntax.implies(A, syntax.implies(B, C))
    assert parse('not T in T and E in E') is syntax.conj(syntax.neg(A), B)
    assert parse('T in T <-> E in E') is syntax.iff(A, B)


def test_quantifier_scope_extends_right():
    A = parse('all v0. v0 in T -> v0 in E')
    assert A is syntax.universal(0, syntax.implies(member(v0, T), member(v0, E)))


def test_names():
    r = parse('{v0 | not v0 in v0}', 'term')
    assert parse('$r in $r', names={'r': r}) is member(r, r)
    with pytest.raises(PresentableSyntaxError):
        parse('$r in $r')


def test_syntax_errors():
    with pytest.raises(PresentableSyntaxError):
        parse('T in', 'formula')
    with pytest.raises(PresentableSyntaxError):
        parse('{v0 | T}', 'term')


def test_render_uses_names_and_sugar():
    r = parse('{v0 | not v0 in v0}', 'term')
    assert render(member(r, r), {'r': r}) == '$r in $r'
    assert render(syntax.identity(v0, v1)) == 'v0 = v1'
    assert render(syntax.truth(member(T, T))) == 'TT(T in T)'
    assert render(syntax.pair(T, E)) == 'pair(T, E)'


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_rendered_text_reads_back(e):
    category = 'term' if e.is_term else 'formula'
    assert parse(render(e), category) is e


def test_biconditional_keeps_both_sides():
    A, B, C = member(T, T), member(E, E), member(T, E)
    assert parse('(T in T) <-> (E in E)') is syntax.iff(A, B)
    assert parse('T in T and E in E <-> T in E') is syntax.iff(syntax.conj(A, B), C)
    assert parse('T in T <-> E in E <-> T in E') is syntax.iff(A, syntax.iff(B, C))
    assert parse('T in T -> E in E <-> T in E') is syntax.iff(syntax.implies(A, B), C)
    assert render(syntax.iff(A, B)) == 'T in T <-> E in E'


biconditionals = st.recursive(
    flat_formulas,
    lambda inner: st.builds(syntax.iff, inner, inner) | st.builds(syntax.implies, inner, inner),
    max_leaves=4,
)


@given(biconditionals)
def test_biconditionals_read_back(A):
    assert parse(render(A), 'formula') is A
