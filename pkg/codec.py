"""
Formations as numbers.

A formation is a nonempty sequence of symbols |_k (one bar, k dots). Read with
bar = 1 and dot = 0 it is a binary numeral, so every formation is a natural
number and every natural number n >= 1 is exactly one formation.
"""
import re
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import structlog

from errors import MalformedFormation, ZeroNotFormation, ZeroOperand

logger = structlog.get_logger(__name__)

_AUSTERE = re.compile(r'\|\.*')
_SUBSCRIPTS = '₀₁₂₃₄₅₆₇₈₉'
_BARE_TOKEN = re.compile(r'\|(?:_(\d+)|([₀-₉]+))?')


@dataclass(frozen=True)
class Formation:
    """A symbol sequence; ``symbols`` holds the dot counts k of each |_k"""

    symbols: Tuple[int, ...]

    def __post_init__(self):
        if not self.symbols:
            raise MalformedFormation("a formation has at least one symbol")
        if any(k < 0 for k in self.symbols):
            raise MalformedFormation("symbol indices are natural numbers")

    @property
    def austere(self) -> str:
        return ''.join('|' + '.' * k for k in self.symbols)

    @property
    def bare(self) -> str:
        return ''.join('|' + to_subscript(k) for k in self.symbols)

    @property
    def value(self) -> int:
        return value_of(self)

    @property
    def bit_length(self) -> int:
        return sum(k + 1 for k in self.symbols)

    @classmethod
    def from_text(cls, text: str) -> 'Formation':
        return cls(tuple(split_symbols(text)))


def to_subscript(k: int) -> str:
    return ''.join(_SUBSCRIPTS[int(d)] for d in str(k))


def _from_subscript(digits: str) -> int:
    return int(''.join(str(_SUBSCRIPTS.index(ch)) for ch in digits))


def split_symbols(text: str) -> Iterable[int]:
    """
    Splits an austere (``|...``) or bare (``|_3`` / ``|₃``) string into symbol indices

    Raises:
        MalformedFormation: when the text is not a symbol sequence
    """
    compact = ''.join(text.split())
    if not compact:
        raise MalformedFormation("empty formation")
    if '_' in compact or any(ch in _SUBSCRIPTS for ch in compact):
        symbols = []
        position = 0
        for match in _BARE_TOKEN.finditer(compact):
            if match.start() != position:
                break
            if match.group(1) is not None:
                symbols.append(int(match.group(1)))
            elif match.group(2) is not None:
                symbols.append(_from_subscript(match.group(2)))
            else:
                symbols.append(0)
            position = match.end()
        if position != len(compact):
            raise MalformedFormation(f"not a bare symbol sequence at offset {position}", text=text)
        return symbols
    if compact[0] != '|' or set(compact) - {'|', '.'}:
        raise MalformedFormation("an austere formation is bars and dots starting with a bar", text=text)
    return [len(chunk) - 1 for chunk in _AUSTERE.findall(compact)]


def value_of(formation: Union[Formation, str]) -> int:
    """Reads a formation as a binary numeral (bar = 1, dot = 0)"""
    if isinstance(formation, str):
        formation = Formation.from_text(formation)
    value = 0
    for k in formation.symbols:
        value = (value << (k + 1)) | (1 << k)
    return value


def formation_of(n: int) -> Formation:
    """
    Inverse of value_of: splits the binary numeral of n into maximal 1·0^k blocks

    Raises:
        ZeroNotFormation: for n = 0
    """
    if n < 1:
        raise ZeroNotFormation("0 is not a formation (a lone dot is not a symbol)", n=n)
    bits = bin(n)[2:]
    return Formation(tuple(len(block) - 1 for block in _AUSTERE.findall(bits.replace('1', '|').replace('0', '.'))))


def length(n: int) -> int:
    """l(n) = μy(2^y > n); l(0) = 0"""
    return n.bit_length()


def concat(m: int, n: int) -> int:
    """
    m⌢n = m·2^l(n) + n, the number of the concatenated formation

    Raises:
        ZeroOperand: when either operand is 0
    """
    if m < 1 or n < 1:
        raise ZeroOperand("concatenation needs two formations", m=m, n=n)
    return (m << length(n)) | n


def fold_concat(values: Iterable[int]) -> int:
    """Left fold of ⌢ over a nonempty sequence of formation numbers"""
    result = None
    for value in values:
        result = value if result is None else concat(result, value)
    if result is None:
        raise MalformedFormation("empty formation")
    return result


def parse_number(text: str) -> int:
    """Accepts decimal, 0x-hexadecimal or an austere/bare formation string"""
    stripped = text.strip()
    if re.fullmatch(r'\d+', stripped):
        return int(stripped)
    if re.fullmatch(r'0[xX][0-9a-fA-F]+', stripped):
        return int(stripped, 16)
    return value_of(stripped)
