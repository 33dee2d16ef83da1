"""
Code-level substitution: sub, Sub, SUB (the dotted ⌜A(ẏ)⌝) and the diagonal constructor.

Everything works on decoded structure and re-encodes through the shared DAG.
Only the diagonal's formation splice reads a materialized code, and only when
it fits the materialization budget.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Union

import structlog

import goedel
import syntax
from codec import Formation, formation_of
from config import get_config
from errors import BudgetExceeded, LibraError, NotTermCode, WrongNoemata
from goedel import CodeDag
from syntax import Category, Expression, Kind

logger = structlog.get_logger(__name__)


class CodedExpr:
    """
    An expression together with its code, or a raw number that decodes to nothing.

    The formation number and the code are computed on first use; both are
    subject to the materialization budget.
    """

    __slots__ = ('expr', '_number')

    def __init__(self, expr: Optional[Expression] = None, number: Optional[int] = None):
        if expr is None and number is None:
            raise ValueError("CodedExpr needs an expression or a number")
        self.expr = expr
        self._number = number

    @classmethod
    def of(cls, expr: Expression) -> 'CodedExpr':
        return cls(expr=expr)

    @classmethod
    def from_number(cls, n: int) -> 'CodedExpr':
        """Decodes n; numbers that are not whole expressions stay raw"""
        try:
            expr = syntax.parse_number(n)
        except LibraError:
            logger.debug("number does not decode to an expression", n=n)
            return cls(number=n)
        return cls(expr=expr, number=n)

    @property
    def number(self) -> int:
        if self._number is None:
            self._number = syntax.formation_value(self.expr)
        return self._number

    @property
    def code(self) -> CodeDag:
        return goedel.goedel_code(self.number)

    @property
    def decodes(self) -> bool:
        return self.expr is not None

    @property
    def is_term_code(self) -> bool:
        return self.expr is not None and self.expr.is_term

    @property
    def is_formula_code(self) -> bool:
        return self.expr is not None and self.expr.is_formula

    def __eq__(self, other) -> bool:
        if not isinstance(other, CodedExpr):
            return NotImplemented
        if self.expr is not None and other.expr is not None:
            return self.expr is other.expr
        if self.expr is None and other.expr is None:
            return self._number == other._number
        return False

    def __hash__(self) -> int:
        return hash(id(self.expr)) if self.expr is not None else hash(self._number)

    def __repr__(self) -> str:
        if self.expr is None:
            return f"CodedExpr(raw {self._number})"
        return f"CodedExpr({syntax.sketch(self.expr)})"


def _as_coded(value: Union[CodedExpr, Expression, int]) -> CodedExpr:
    if isinstance(value, CodedExpr):
        return value
    if isinstance(value, Expression):
        return CodedExpr.of(value)
    return CodedExpr.from_number(value)


def sub(x: Union[CodedExpr, Expression, int], i: int, y: Union[CodedExpr, Expression, int]) -> CodedExpr:
    """
    sub(x, i, y): y put for the free v_i throughout the expression x codes

    Bound occurrences (∀v_i A, {v_i|A}) are left alone; shapes that are not
    expressions fall through unchanged.

    Raises:
        NotTermCode: y does not code a term
    """
    x, y = _as_coded(x), _as_coded(y)
    if not y.is_term_code:
        raise NotTermCode("the inserted code must be the code of a term")
    if x.expr is None:
        return x
    result = syntax.substitute(y.expr, i, x.expr)
    if result is x.expr:
        return x
    return CodedExpr.of(result)


def least_noema(x: CodedExpr) -> Optional[int]:
    """Index Sub substitutes at, or None when x is not a formula with a noema"""
    if not x.is_formula_code or not x.expr.noemata:
        return None
    return min(x.expr.noemata)


def Sub(x: Union[CodedExpr, Expression, int], y: Union[CodedExpr, Expression, int]) -> CodedExpr:
    """sub(x, i, y) at the least noema index i of the formula x codes; otherwise x"""
    x, y = _as_coded(x), _as_coded(y)
    i = least_noema(x)
    if i is None:
        return x
    return sub(x, i, y)


def SUB(x: Union[CodedExpr, Expression, int], y: int) -> CodedExpr:
    """Sub(x, ⌜y⌝), the dotted ⌜A(ẏ)⌝"""
    return Sub(x, CodedExpr.of(goedel.goedel_code(y).node))


def dotted(A: Expression, y: int) -> Expression:
    """⌜A(ẏ)⌝ as an expression"""
    return SUB(CodedExpr.of(A), y).expr


def sub_simultaneous(x: Union[CodedExpr, Expression, int], assignment: Mapping[int, Union[CodedExpr, Expression]]) -> CodedExpr:
    """Puts every y_i for v_i at once; the oracle for chained Sub calls"""
    x = _as_coded(x)
    if x.expr is None:
        return x
    replacements: Dict[int, Expression] = {}
    for index, value in assignment.items():
        coded = _as_coded(value)
        if not coded.is_term_code:
            raise NotTermCode("the inserted code must be the code of a term", index=index)
        replacements[index] = coded.expr
    memo: Dict[tuple, Expression] = {}

    def go(e: Expression, active: frozenset) -> Expression:
        live = active & e.noemata
        if not live:
            return e
        key = (id(e), live)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if e.kind is Kind.NOEMA:
            result = replacements[e.index]
        elif e.is_binder:
            result = syntax.rebuild(e, (go(e.body, live - {e.binder}),))
        else:
            result = syntax.rebuild(e, [go(child, live) for child in e.children])
        memo[key] = result
        return result

    return CodedExpr.of(go(x.expr, frozenset(replacements)))


@dataclass
class Certificate:
    """Replayable record that Sub(m, ⌜m⌝) lands exactly on the diagonal sentence"""

    m: int
    scheme: str
    sentence: Expression
    evaluated: Expression
    verified: bool
    trail: List[str] = field(default_factory=list)
    note: str = ''
    problems: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        from presentable import render
        payload: Dict[str, object] = {
            'm': self.m,
            'scheme': self.scheme,
            'inserted': f'⌜{self.m}⌝',
            'verified': self.verified,
            'sentence': render(self.sentence),
            'sentence_noemata': sorted(self.sentence.noemata),
            'trail': list(self.trail),
            'problems': list(self.problems),
            'note': self.note,
        }
        try:
            payload['sentence_bits'] = self.sentence.bit_length
        except BudgetExceeded:
            payload['sentence_bits'] = None
        return payload


NUMERAL_NOTE = ("£ has no function symbols, so Sub(m, m) cannot stand inside the sentence; "
                "it is evaluated to the numeral it denotes and the sentence carries ⌜m⌝, "
                "the code of the formula Sub is applied to.")


def _inserted_terms(pattern: Expression, image: Expression, found: List[Expression]) -> bool:
    """True when image is pattern with something put for each free v0; collects those terms"""
    if 0 not in pattern.noemata:
        return image is pattern
    if pattern.kind is Kind.NOEMA:
        found.append(image)
        return True
    if pattern.is_binder:
        if (not image.is_binder or image.binder != pattern.binder
                or (image.kind is Kind.UNIVERSAL) != (pattern.kind is Kind.UNIVERSAL)):
            return False
        return _inserted_terms(pattern.body, image.body, found)
    if image.kind is not pattern.kind:
        return False
    return all(_inserted_terms(p, i, found) for p, i in zip(pattern.children, image.children))


def check_diagonal(m: int, sentence: Expression, scheme: Union[goedel.GoedelScheme, str, None] = None) -> List[str]:
    """
    Re-derives the diagonal sentence from m alone: decode m to A(v0), match the
    sentence against it and read every inserted term back as a numeral.

    Returns the problems found; an empty list means the sentence is A(⌜m⌝).
    """
    chosen = scheme if isinstance(scheme, goedel.GoedelScheme) else goedel.get_scheme(scheme)
    try:
        A = syntax.parse_number(m, Category.FORMULA)
    except LibraError as exc:
        return [f"m does not decode to a formula ({exc.code})"]
    found: List[Expression] = []
    if not _inserted_terms(A, sentence, found):
        return ["the sentence does not have the shape of the decoded formula"]
    if not found:
        return ["the decoded formula has no free v0"]
    problems = []
    for term in found:
        decoded = goedel.decode_numeral(term)
        if decoded is None or decoded[0] != m or decoded[1] is not chosen:
            problems.append(f"an inserted term is not ⌜{m}⌝ of the {chosen.name} scheme")
            break
    return problems


def splice(A: Expression, inserted: Sequence[int]) -> Formation:
    """A's formation with the symbols ``inserted`` standing at every free v0"""
    out: List[int] = []
    stack = [A]
    while stack:
        item = stack.pop()
        if 0 not in item.noemata:
            out.extend(syntax.symbols(item))
        elif item.kind is Kind.NOEMA:
            out.extend(inserted)
        elif item.kind in (Kind.JOINT_TERM, Kind.JOINT_FORMULA):
            out.append(syntax.NORIFYER)
            stack.extend(reversed(item.children))
        elif item.kind is Kind.ATOM:
            stack.extend(reversed(item.children))
        else:
            out.append(syntax.UNIVERSALIZOR if item.kind is Kind.UNIVERSAL else syntax.SORTIFIER)
            out.append(item.binder + syntax.NOEMA_BASE)
            stack.append(item.body)
    return Formation(tuple(out))


def _splice_check(A: Expression, m: int, sentence: Expression, scheme: goedel.GoedelScheme) -> Optional[bool]:
    """Number-level comparison through the materialized ⌜m⌝; None when it does not fit the budget"""
    budget = get_config().budget_materialize_bits
    try:
        if sentence.bit_length > budget:
            return None
        inserted = formation_of(goedel.materialize(goedel.goedel_code(m, scheme), budget)).symbols
    except BudgetExceeded:
        return None
    return splice(A, inserted).value == syntax.formation_value(sentence, budget)


def diagonal(A: Union[CodedExpr, Expression], scheme: Optional[str] = None) -> Certificate:
    """
    B = A(⌜m⌝) with m = ⌜A(v0)⌝'s formation number, plus the check that
    Sub(m, ⌜m⌝) evaluates to B itself

    B is then re-derived from m alone (``check_diagonal``) and, when ⌜m⌝ fits the
    materialization budget, compared number for number with the spliced formation.

    Raises:
        WrongNoemata: A is not a formula whose only noema is v0
    """
    coded = _as_coded(A)
    if not coded.is_formula_code or coded.expr.noemata != frozenset({0}):
        raise WrongNoemata("the diagonal needs a formula with exactly the noema v0",
                           noemata=str(sorted(coded.expr.noemata)) if coded.expr is not None else None)
    chosen = goedel.get_scheme(scheme)
    m = coded.number
    numeral = goedel.goedel_code(m, chosen).node
    sentence = syntax.substitute(numeral, 0, coded.expr)
    restored = CodedExpr.from_number(m)
    evaluated = Sub(restored, CodedExpr.of(numeral)).expr
    problems = check_diagonal(m, sentence, chosen)
    if evaluated is not sentence:
        problems.append("Sub(m, ⌜m⌝) evaluates to another sentence")
    trail = [
        f"m = value of A(v0) = {m}",
        "decode m back to A(v0)",
        "Sub at the least noema v0 with the numeral of m",
        "compare with the sentence node",
        "match the sentence against the decoded formula and read the inserted numerals back",
    ]
    spliced = _splice_check(coded.expr, m, sentence, chosen)
    if spliced is None:
        trail.append("formation splice skipped: ⌜m⌝ does not fit the materialization budget")
    else:
        trail.append("formation splice compared with the sentence's number")
        if not spliced:
            problems.append("the spliced formation differs from the sentence's number")
    verified = not problems
    if not verified:
        logger.warning("diagonal certificate failed", m=m, problems=problems)
    else:
        logger.info("diagonal certificate verified", m=m, scheme=chosen.name)
    return Certificate(m=m, scheme=chosen.name, sentence=sentence, evaluated=evaluated,
                       verified=verified, trail=trail, note=NUMERAL_NOTE, problems=problems)
