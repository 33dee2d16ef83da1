import pytest
from hypothesis import given

from codec import Formation, concat, fold_concat, formation_of, length, parse_number, split_symbols, value_of
from errors import MalformedFormation, ZeroNotFormation, ZeroOperand
from tests.strategies import formation_numbers


def test_sort_constants_have_their_values():
    assert value_of('|...') == 8
    assert value_of('|....') == 16


def test_joint_of_two_alethizors():
    assert value_of('|..|...|...') == 1160
    assert formation_of(1160).austere == '|..|...|...'


def test_bare_and_austere_agree():
    assert list(split_symbols('|_2|_3|₃')) == [2, 3, 3]
    assert Formation.from_text('|₂|₃|₃').austere == '|..|...|...'
    assert Formation.from_text('|..|...|...').bare == '|₂|₃|₃'


def test_whitespace_is_ignored():
    assert value_of('|.. |... |...') == 1160


@pytest.mark.parametrize('text', ['', '.|', 'abc', '|x'])
def test_malformed_text(text):
    with pytest.raises(MalformedFormation):
        value_of(text)


def test_zero_is_not_a_formation():
    with pytest.raises(ZeroNotFormation):
        formation_of(0)


@given(formation_numbers)
def test_every_positive_number_is_one_formation(n):
    formation = formation_of(n)
    assert formation.value == n
    assert formation.bit_length == n.bit_length()


@given(formation_numbers, formation_numbers)
def test_concat_is_string_concatenation(m, n):
    joined = formation_of(m).austere + formation_of(n).austere
    assert concat(m, n) == value_of(joined)


def test_concat_rejects_zero():
    with pytest.raises(ZeroOperand):
        concat(0, 5)


def test_length():
    assert length(0) == 0
    assert length(8) == 4
    assert length(1160) == 11


def test_fold_concat():
    assert fold_concat([4, 8, 8]) == 1160
    with pytest.raises(MalformedFormation):
        fold_concat([])


def test_parse_number_accepts_three_notations():
    assert parse_number('16') == 16
    assert parse_number('0x10') == 16
    assert parse_number('|....') == 16
