"""
Gödel codes ⌜n⌝ as shared-structure numerals.

A numeral is interned once as a NUMERAL node whose body is rebuilt from the
coding recursion's symbol templates on demand, so ⌜n⌝ never exists as a string
unless someone materializes it under a bit budget.
"""
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import structlog

import syntax
from codec import concat
from config import get_config
from errors import BudgetExceeded, ZeroOperand
from syntax import Category, Expression, Kind

logger = structlog.get_logger(__name__)

# Template markers: the inner numeral ⌜n⌝ and the △ block
N = 'N'
D = 'D'

# Noema index used as the hole for ⌜n⌝ while the successor template is parsed
_HOLE = 1 << 24

# Exponent of the usual size estimate for ⌜0⌝
ZERO_SIZE_ESTIMATE = 111

LITERAL_ZERO = (0, 5, 1, 6, 2, 2, 2, 6, 5, 6, 5, 6, 5, 2, 2, 6, 5, 6, 5, 6, 5)
SUCCESSOR = (0, 5, 2, 2, N, 5, D, 2, N, 5, D)
LITERAL_DELTA = (1, 5, 2, 2, 2, 5, 6, 5, 6, 5, N, 2, 2, 5, 6, 5, 6, 5, N)

# {v0 | ¬∀v1(v0∈v1 → v0∈v1)}: the literal body under a norifyer, binder v1 kept
PRESENTABLE_ZERO = (0, 5, 2) + LITERAL_ZERO[2:] + LITERAL_ZERO[2:]
# ∀v1(v0∈v1 → ⌜n⌝∈v1): the literal △ with v0 and v1 exchanged
PRESENTABLE_DELTA = tuple({5: 6, 6: 5}.get(k, k) if isinstance(k, int) else k for k in LITERAL_DELTA)


def _bits(tokens: Sequence[Union[int, str]]) -> int:
    return sum(k + 1 for k in tokens if isinstance(k, int))


class GoedelScheme:
    """
    One reading of the coding recursion.

    ``zero`` is the base-case symbol list, ``successor`` the wrapper with N / D
    markers and ``delta`` the △ block with N markers.
    """

    def __init__(self, name: str, zero: Sequence[int], successor: Sequence[Union[int, str]],
                 delta: Sequence[Union[int, str]]):
        self.name = name
        self.zero_tokens = tuple(zero)
        self.successor_tokens = tuple(successor)
        self.delta_tokens = tuple(delta)
        self._noemata_seq: List[FrozenSet[int]] = []
        self._lock = threading.RLock()

        # Symbol-sum constants
        self.base_bits = _bits(self.zero_tokens)
        self.wrapper_bits = _bits(self.successor_tokens)
        self.delta_bits = _bits(self.delta_tokens)
        deltas = self.successor_tokens.count(D)
        self.copies = self.successor_tokens.count(N) + deltas * self.delta_tokens.count(N)
        self.fixed_bits = self.wrapper_bits + deltas * self.delta_bits
        self.max_noema_index = max(k for k in self.zero_tokens + self.successor_tokens + self.delta_tokens
                                   if isinstance(k, int)) - syntax.NOEMA_BASE

    def __repr__(self) -> str:
        return f"GoedelScheme({self.name})"

    def expanded_successor(self) -> List[Union[int, str]]:
        """The successor symbol list with every △ spelled out"""
        out: List[Union[int, str]] = []
        for token in self.successor_tokens:
            if token == D:
                out.extend(self.delta_tokens)
            else:
                out.append(token)
        return out

    @cached_property
    def zero_body(self) -> Expression:
        return syntax.parse_tokens(self.zero_tokens[2:], Category.FORMULA)

    @cached_property
    def successor_template(self) -> Expression:
        hole = syntax.noema(_HOLE)
        tokens = [hole if token == N else token for token in self.expanded_successor()]
        return syntax.parse_tokens(tokens[2:], Category.FORMULA)

    @cached_property
    def _hole_path(self) -> Tuple[int, ...]:
        """Child positions leading to the first ⌜n⌝ in the successor body"""
        def search(e: Expression, path: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
            if e.kind is Kind.NOEMA and e.index == _HOLE:
                return path
            for position, child in enumerate(e.children):
                if _HOLE in child.noemata:
                    return search(child, path + (position,))
            return None
        return search(self.successor_template, ())

    def numeral(self, n: int) -> Expression:
        return syntax.numeral(n, self)

    def successor_body(self, inner: Expression) -> Expression:
        return syntax.substitute(inner, _HOLE, self.successor_template)

    def numeral_body(self, n: int) -> Expression:
        if n == 0:
            return self.zero_body
        return self.successor_body(self.numeral(n - 1))

    def match_numeral_body(self, body: Expression) -> Optional[int]:
        """n when {v0 | body} is exactly ⌜n⌝ of this scheme, else None"""
        if body is self.zero_body:
            return 0
        node = body
        for position in self._hole_path:
            if position >= len(node.children):
                return None
            node = node.children[position]
        if node.kind is not Kind.NUMERAL or node.scheme is not self:
            return None
        if self.successor_body(node) is body:
            return node.index + 1
        return None

    def numeral_noemata(self, n: int) -> FrozenSet[int]:
        """ℵ(⌜n⌝); the sequence is eventually constant, so only its head is computed"""
        seq = self._noemata_seq
        with self._lock:
            while len(seq) <= n:
                if len(seq) >= 2 and seq[-1] == seq[-2]:
                    return seq[-1]
                k = len(seq)
                body = self.numeral_body(k)
                seq.append(body.noemata - {0})
            return seq[n]

    def bit_length(self, n: int) -> int:
        """
        L(n) = k^n·L0 + C·(k^n − 1)/(k − 1), k copies of ⌜n−1⌝ per successor

        Raises:
            BudgetExceeded: when n is above max_code_source
        """
        limit = get_config().max_code_source
        if n > limit:
            raise BudgetExceeded(f"closed-form length of ⌜{n}⌝ is above the source guard",
                                 required=n, budget=limit)
        k = self.copies
        power = k ** n
        return power * self.base_bits + self.fixed_bits * ((power - 1) // (k - 1))

    def bit_length_by_recurrence(self, n: int) -> int:
        """Same value by iterating L(n+1) = C + k·L(n)"""
        bits = self.base_bits
        for _ in range(n):
            bits = self.fixed_bits + self.copies * bits
        return bits

    def constants(self) -> Dict[str, int]:
        return {
            'base_bits': self.base_bits,
            'wrapper_bits': self.wrapper_bits,
            'delta_bits': self.delta_bits,
            'copies': self.copies,
            'fixed_bits': self.fixed_bits,
        }


LITERAL = GoedelScheme('literal', LITERAL_ZERO, SUCCESSOR, LITERAL_DELTA)
PRESENTABLE = GoedelScheme('presentable', PRESENTABLE_ZERO, SUCCESSOR, PRESENTABLE_DELTA)

SCHEMES = {scheme.name: scheme for scheme in (LITERAL, PRESENTABLE)}

for _scheme in SCHEMES.values():
    syntax.register_numeral_scheme(_scheme)


def get_scheme(name: Optional[str] = None) -> GoedelScheme:
    key = name or get_config().goedel_scheme
    try:
        return SCHEMES[key]
    except KeyError:
        raise ValueError(f"unknown coding scheme {key!r}; expected one of {sorted(SCHEMES)}") from None


@dataclass(frozen=True)
class CodeDag:
    """⌜source⌝ over the shared DAG; bit_length is exact and never materializes"""

    node: Expression

    @property
    def source(self) -> int:
        return self.node.index

    @property
    def scheme(self) -> GoedelScheme:
        return self.node.scheme

    @property
    def bit_length(self) -> int:
        return self.node.bit_length

    @property
    def inner(self) -> Optional['CodeDag']:
        if self.source == 0:
            return None
        return CodeDag(self.scheme.numeral(self.source - 1))

    @property
    def term(self) -> Expression:
        return self.node

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {'source': self.source, 'scheme': self.scheme.name}
        try:
            payload['bit_length'] = self.bit_length
        except BudgetExceeded as exc:
            payload['bit_length'] = None
            payload['note'] = exc.message
        return payload


def goedel_code(n: int, scheme: Optional[Union[GoedelScheme, str]] = None) -> CodeDag:
    if n < 0:
        raise ValueError("codes are defined on natural numbers")
    if not isinstance(scheme, GoedelScheme):
        scheme = get_scheme(scheme)
    return CodeDag(scheme.numeral(n))


def code_of(e: Expression, scheme: Optional[Union[GoedelScheme, str]] = None) -> CodeDag:
    """⌜e⌝ for an expression, through its formation number"""
    return goedel_code(syntax.formation_value(e), scheme)


def materialize(c: CodeDag, budget_bits: Optional[int] = None) -> int:
    """
    The number whose binary string is the code's austere string

    Raises:
        BudgetExceeded: carries the required bit count
    """
    budget = get_config().budget_materialize_bits if budget_bits is None else budget_bits
    required = c.bit_length
    if required > budget:
        raise BudgetExceeded(f"⌜{c.source}⌝ needs {required} bits", required=required, budget=budget)
    return syntax.formation_value(c.node, budget)


def code_concat(e: int, f: int, scheme: Optional[Union[GoedelScheme, str]] = None) -> CodeDag:
    """⌜e⌝⌜⌢⌝⌜f⌝ ≜ ⌜e⌢f⌝"""
    if e < 1 or f < 1:
        raise ZeroOperand("code concatenation needs two formations", e=e, f=f)
    return goedel_code(concat(e, f), scheme)


def decode_numeral(term: Expression) -> Optional[Tuple[int, GoedelScheme]]:
    """(n, scheme) when the term is exactly some ⌜n⌝, else None"""
    if term.kind is Kind.NUMERAL:
        return term.index, term.scheme
    return None


def shifted_zero() -> Expression:
    """The base-case formation with every noema moved up by three (an alphabetic variant of ⌜0⌝)"""
    shifted = [k + 3 if k >= syntax.NOEMA_BASE else k for k in LITERAL_ZERO]
    return syntax.parse_tokens(shifted, Category.TERM)


_remark_logged = False


def size_remark_delta() -> Dict[str, int]:
    """Own bit count of ⌜0⌝ against the 2^111 estimate"""
    global _remark_logged
    bits = LITERAL.base_bits
    result = {
        'bits': bits,
        'leading_power': bits - 1,
        'estimate_power': ZERO_SIZE_ESTIMATE,
        'delta': ZERO_SIZE_ESTIMATE - (bits - 1),
    }
    if not _remark_logged:
        _remark_logged = True
        logger.info("zero code size differs from the estimate", **result)
    return result


_noema_note_logged = False


def note_free_noemata(scheme: GoedelScheme) -> FrozenSet[int]:
    """Logs, once, that literal successor numerals keep a free noema"""
    global _noema_note_logged
    present = scheme.numeral_noemata(1)
    if present and not _noema_note_logged:
        _noema_note_logged = True
        logger.info("successor numerals are not cognomina under this scheme",
                    scheme=scheme.name, noemata=sorted(present))
    return present
