"""
Presentable ASCII surface for £ expressions.

Grammar (loosest binding first):

    F := F <-> F | F -> F | F or F | F and F | not F
       | all vk. F | exists vk. F | TT(F) | nor(F, F) | (F) | t in t | t = t
    t := t union t | t inter t | t minus t | nor(t, t) | comp(t) | pair(t, t)
       | curry(F) | {vk | F} | code(n) | pcode(n) | $name | T | E | vk | (t)

``<->`` and ``->`` group to the right, the rest to the left.
"""
import threading
from enum import Enum
from typing import Dict, List, Optional, Tuple

import structlog
from arpeggio import EOF, NoMatch, Optional as Maybe, ParserPython, PTNodeVisitor, ZeroOrMore, visit_parse_tree
from arpeggio import RegExMatch as _

import goedel
import syntax
from errors import Ambiguous, PresentableSyntaxError
from syntax import Expression, Kind

logger = structlog.get_logger(__name__)


class Op(Enum):
    NOT = 'not'
    AND = 'and'
    OR = 'or'
    IMPLIES = '->'
    IFF = '<->'
    ALL = 'all'
    EXISTS = 'exists'
    IN = 'in'
    EQUALS = '='
    UNION = 'union'
    INTER = 'inter'
    MINUS = 'minus'


# Formula precedence levels
QUANTIFIED, IFF, IMPLIES, OR, AND, ATOM, UNARY = range(7)
# Term levels
BINARY_TERM, TERM_PRIMARY = range(2)


# --- grammar ----------------------------------------------------------------

def number():
    return _(r'\d+')


def noema_ref():
    return _(r'v\d+\b')


def name_ref():
    return _(r'\$[A-Za-z_][A-Za-z0-9_\-]*')


def alethizor_kw():
    return _(r'T\b')


def enumerator_kw():
    return _(r'E\b')


def not_kw():
    return _(r'not\b')


def quantifier():
    return _(r'(all|exists)\b')


def and_op():
    return _(r'and\b')


def or_op():
    return _(r'or\b')


def imp_op():
    return _(r'->')


def iff_op():
    return _(r'<->')


def rel_op():
    return _(r'(in\b|=)')


def set_op():
    return _(r'(union|inter|minus)\b')


def code_call():
    return _(r'code\b'), '(', number, ')'


def pcode_call():
    return _(r'pcode\b'), '(', number, ')'


def nor_term():
    return _(r'nor\b'), '(', term, ',', term, ')'


def comp_call():
    return _(r'comp\b'), '(', term, ')'


def pair_call():
    return _(r'pair\b'), '(', term, ',', term, ')'


def curry_call():
    return _(r'curry\b'), '(', formula, ')'


def abstraction_term():
    return '{', noema_ref, '|', formula, '}'


def paren_term():
    return '(', term, ')'


def term_primary():
    return [code_call, pcode_call, nor_term, comp_call, pair_call, curry_call, abstraction_term,
            name_ref, alethizor_kw, enumerator_kw, noema_ref, paren_term]


def term():
    return term_primary, ZeroOrMore(set_op, term_primary)


def truth_call():
    return _(r'TT\b'), '(', formula, ')'


def nor_formula():
    return _(r'nor\b'), '(', formula, ',', formula, ')'


def paren_formula():
    return '(', formula, ')'


def atom_formula():
    return term, rel_op, term


def primary_formula():
    return [truth_call, nor_formula, paren_formula, atom_formula]


def negation():
    return not_kw, unary


def quantified():
    return quantifier, noema_ref, '.', formula


def unary():
    return [negation, quantified, primary_formula]


def and_level():
    return unary, ZeroOrMore(and_op, unary)


def or_level():
    return and_level, ZeroOrMore(or_op, and_level)


def imp_level():
    return or_level, Maybe(imp_op, imp_level)


def formula():
    return imp_level, Maybe(iff_op, formula)


def formula_input():
    return formula, EOF


def term_input():
    return term, EOF


# --- visitor ----------------------------------------------------------------

def _values(children) -> List[object]:
    """Flattens nested results and drops literal punctuation"""
    out: List[object] = []
    for child in children:
        if isinstance(child, (list, tuple)):
            out.extend(_values(child))
        elif child is None or isinstance(child, str):
            continue
        else:
            out.append(child)
    return out


class ExpressionBuilder(PTNodeVisitor):
    """Builds interned expressions from the parse tree"""

    def __init__(self, names: Optional[Dict[str, Expression]] = None, **kwargs):
        super().__init__(**kwargs)
        self.names = names or {}

    def visit_number(self, node, children):
        return int(node.value)

    def visit_noema_ref(self, node, children):
        return syntax.noema(int(node.value[1:]))

    def visit_name_ref(self, node, children):
        name = node.value[1:]
        if name not in self.names:
            raise PresentableSyntaxError(f"unknown name ${name}", position=node.position)
        return self.names[name]

    def visit_alethizor_kw(self, node, children):
        return syntax.alethizor()

    def visit_enumerator_kw(self, node, children):
        return syntax.enumerator()

    def visit_not_kw(self, node, children):
        return Op.NOT

    def visit_quantifier(self, node, children):
        return Op(node.value)

    def visit_and_op(self, node, children):
        return Op.AND

    def visit_or_op(self, node, children):
        return Op.OR

    def visit_imp_op(self, node, children):
        return Op.IMPLIES

    def visit_iff_op(self, node, children):
        return Op.IFF

    def visit_rel_op(self, node, children):
        return Op(node.value)

    def visit_set_op(self, node, children):
        return Op(node.value)

    def visit_code_call(self, node, children):
        return goedel.LITERAL.numeral(_values(children)[0])

    def visit_pcode_call(self, node, children):
        return goedel.PRESENTABLE.numeral(_values(children)[0])

    def visit_nor_term(self, node, children):
        left, right = _values(children)
        return syntax.joint_term(left, right)

    def visit_comp_call(self, node, children):
        return syntax.complement(_values(children)[0])

    def visit_pair_call(self, node, children):
        left, right = _values(children)
        return syntax.pair(left, right)

    def visit_curry_call(self, node, children):
        return syntax.curry(_values(children)[0])

    def visit_abstraction_term(self, node, children):
        binder, body = _values(children)
        return syntax.abstraction(binder.index, body)

    def visit_paren_term(self, node, children):
        return _values(children)[0]

    def visit_term_primary(self, node, children):
        return _values(children)[0]

    def visit_term(self, node, children):
        values = _values(children)
        result = values[0]
        for op, operand in zip(values[1::2], values[2::2]):
            if op is Op.UNION:
                result = syntax.union(result, operand)
            elif op is Op.INTER:
                result = syntax.intersection(result, operand)
            else:
                result = syntax.difference(result, operand)
        return result

    def visit_truth_call(self, node, children):
        return syntax.truth(_values(children)[0])

    def visit_nor_formula(self, node, children):
        left, right = _values(children)
        return syntax.joint_formula(left, right)

    def visit_paren_formula(self, node, children):
        return _values(children)[0]

    def visit_atom_formula(self, node, children):
        left, op, right = _values(children)
        if op is Op.EQUALS:
            return syntax.identity(left, right)
        return syntax.member(left, right)

    def visit_primary_formula(self, node, children):
        return _values(children)[0]

    def visit_negation(self, node, children):
        return syntax.neg(_values(children)[-1])

    def visit_quantified(self, node, children):
        op, binder, body = _values(children)
        if op is Op.ALL:
            return syntax.universal(binder.index, body)
        return syntax.exists(binder.index, body)

    def visit_unary(self, node, children):
        return _values(children)[0]

    def visit_and_level(self, node, children):
        values = _values(children)
        result = values[0]
        for operand in values[2::2]:
            result = syntax.conj(result, operand)
        return result

    def visit_or_level(self, node, children):
        values = _values(children)
        result = values[0]
        for operand in values[2::2]:
            result = syntax.disj(result, operand)
        return result

    def visit_imp_level(self, node, children):
        values = _values(children)
        if len(values) == 1:
            return values[0]
        return syntax.implies(values[0], values[2])

    def visit_formula(self, node, children):
        values = _values(children)
        if len(values) == 1:
            return values[0]
        return syntax.iff(values[0], values[2])

    def visit_formula_input(self, node, children):
        return _values(children)[0]

    def visit_term_input(self, node, children):
        return _values(children)[0]


_PARSER_LOCK = threading.Lock()
_PARSERS: Dict[str, ParserPython] = {}


def _get_parser(category: str) -> ParserPython:
    with _PARSER_LOCK:
        parser = _PARSERS.get(category)
        if parser is None:
            root = formula_input if category == 'formula' else term_input
            parser = ParserPython(root, ignore_case=False, memoization=True)
            _PARSERS[category] = parser
    return parser


def _parse_as(text: str, category: str, names: Optional[Dict[str, Expression]]) -> Expression:
    parser = _get_parser(category)
    try:
        with _PARSER_LOCK:
            tree = parser.parse(text)
    except NoMatch as exc:
        raise PresentableSyntaxError(f"not a presentable {category}: {exc}", position=exc.position) from None
    return visit_parse_tree(tree, ExpressionBuilder(names))


def parse(text: str, category: str = 'auto', names: Optional[Dict[str, Expression]] = None) -> Expression:
    """
    Parses presentable text into an expression

    Raises:
        PresentableSyntaxError: no reading in the requested category
        Ambiguous: auto mode found both a term and a formula
    """
    if category in ('term', 'formula'):
        return _parse_as(text, category, names)
    as_formula = as_term = None
    failures = []
    for kind in ('formula', 'term'):
        try:
            value = _parse_as(text, kind, names)
        except PresentableSyntaxError as exc:
            failures.append(exc)
            continue
        if kind == 'formula':
            as_formula = value
        else:
            as_term = value
    if as_formula is not None and as_term is not None:
        raise Ambiguous("presentable text reads as both a term and a formula", first=as_term, second=as_formula)
    if as_formula is None and as_term is None:
        raise failures[0]
    return as_formula if as_formula is not None else as_term


# --- printer ----------------------------------------------------------------

def _negated(e: Expression) -> Optional[Expression]:
    if e.kind is Kind.JOINT_FORMULA and e.children[0] is e.children[1]:
        return e.children[0]
    return None


def _as_implies(e: Expression) -> Optional[Tuple[Expression, Expression]]:
    inner = _negated(e)
    if inner is None or inner.kind is not Kind.JOINT_FORMULA:
        return None
    antecedent = _negated(inner.children[0])
    if antecedent is None:
        return None
    return antecedent, inner.children[1]


def _as_or(e: Expression) -> Optional[Tuple[Expression, Expression]]:
    inner = _negated(e)
    if inner is None or inner.kind is not Kind.JOINT_FORMULA or inner.children[0] is inner.children[1]:
        return None
    return inner.children[0], inner.children[1]


def _as_and(e: Expression) -> Optional[Tuple[Expression, Expression]]:
    if e.kind is not Kind.JOINT_FORMULA or e.children[0] is e.children[1]:
        return None
    left, right = _negated(e.children[0]), _negated(e.children[1])
    if left is None or right is None:
        return None
    return left, right


def _as_iff(e: Expression) -> Optional[Tuple[Expression, Expression]]:
    parts = _as_and(e)
    if parts is None:
        return None
    forward, backward = _as_implies(parts[0]), _as_implies(parts[1])
    if forward is None or backward is None:
        return None
    if syntax.iff(forward[0], forward[1]) is e:
        return forward
    return None


def _as_exists(e: Expression) -> Optional[Tuple[int, Expression]]:
    inner = _negated(e)
    if inner is None or inner.kind is not Kind.UNIVERSAL:
        return None
    body = _negated(inner.children[0])
    if body is None:
        return None
    return inner.index, body


def as_identity(e: Expression) -> Optional[Tuple[Expression, Expression]]:
    """(a, b) when e is exactly the defined a = b"""
    if e.kind is not Kind.UNIVERSAL:
        return None
    parts = _as_implies(e.children[0])
    if parts is None:
        return None
    left, right = parts
    if left.kind is not Kind.ATOM or right.kind is not Kind.ATOM:
        return None
    u = e.index
    if left.container is not syntax.noema(u) or right.container is not syntax.noema(u):
        return None
    a, b = left.element, right.element
    if syntax.identity(a, b) is e:
        return a, b
    return None


def as_truth(e: Expression) -> Optional[Expression]:
    """A when e is exactly 𝕋A"""
    parts = _as_exists(e)
    if parts is None:
        return None
    y, body = parts
    if body.kind is not Kind.ATOM or body.container.kind is not Kind.ABSTRACTION:
        return None
    A = body.container.body
    if syntax.truth(A) is e:
        return A
    return None


def _as_complement(a: Expression) -> Optional[Expression]:
    if a.kind is Kind.JOINT_TERM and a.children[0] is a.children[1]:
        return a.children[0]
    return None


def _as_pair(a: Expression) -> Optional[Tuple[Expression, Expression]]:
    if a.kind is not Kind.ABSTRACTION:
        return None
    parts = _as_or(a.body)
    if parts is None:
        return None
    first, second = as_identity(parts[0]), as_identity(parts[1])
    if first is None or second is None or first[1].kind is not Kind.ABSTRACTION:
        return None
    single = as_identity(first[1].body)
    double = second[1]
    if single is None or double.kind is not Kind.ABSTRACTION:
        return None
    options = _as_or(double.body)
    if options is None:
        return None
    other = as_identity(options[1])
    if other is None:
        return None
    x, y = single[1], other[1]
    if syntax.pair(x, y) is a:
        return x, y
    return None


def _as_curry(a: Expression) -> Optional[Expression]:
    if a.kind is not Kind.ABSTRACTION:
        return None
    parts = _as_implies(a.body)
    if parts is None:
        return None
    F = parts[1]
    if syntax.curry(F) is a:
        return F
    return None


class Printer:
    """Minimal-parenthesis renderer; ``names`` maps $names back onto terms"""

    def __init__(self, names: Optional[Dict[str, Expression]] = None):
        self.by_node = {id(node): name for name, node in (names or {}).items()}

    def render(self, e: Expression) -> str:
        if e.is_term:
            return self.term(e)[0]
        return self.formula(e)[0]

    def _wrap(self, rendered: Tuple[str, int], minimum: int) -> str:
        text, level = rendered
        return f'({text})' if level < minimum else text

    def term(self, a: Expression) -> Tuple[str, int]:
        name = self.by_node.get(id(a))
        if name is not None:
            return f'${name}', TERM_PRIMARY
        kind = a.kind
        if kind is Kind.NOEMA:
            return f'v{a.index}', TERM_PRIMARY
        if kind is Kind.ALETHIZOR:
            return 'T', TERM_PRIMARY
        if kind is Kind.ENUMERATOR:
            return 'E', TERM_PRIMARY
        if kind is Kind.NUMERAL:
            prefix = 'pcode' if a.scheme is goedel.PRESENTABLE else 'code'
            return f'{prefix}({a.index})', TERM_PRIMARY
        if kind is Kind.ABSTRACTION:
            pair = _as_pair(a)
            if pair is not None:
                return f'pair({self.term(pair[0])[0]}, {self.term(pair[1])[0]})', TERM_PRIMARY
            F = _as_curry(a)
            if F is not None:
                return f'curry({self.formula(F)[0]})', TERM_PRIMARY
            return f'{{v{a.index} | {self.formula(a.body)[0]}}}', TERM_PRIMARY
        left, right = a.children
        if left is right:
            inner = left
            if inner.kind is Kind.JOINT_TERM and inner.children[0] is not inner.children[1]:
                return self._binary_term(inner.children[0], Op.UNION, inner.children[1])
            return f'comp({self.term(inner)[0]})', TERM_PRIMARY
        first, second = _as_complement(left), _as_complement(right)
        if first is not None and second is not None:
            subtracted = _as_complement(second)
            if subtracted is not None:
                return self._binary_term(first, Op.MINUS, subtracted)
            return self._binary_term(first, Op.INTER, second)
        return f'nor({self.term(left)[0]}, {self.term(right)[0]})', TERM_PRIMARY

    def _binary_term(self, left: Expression, op: Op, right: Expression) -> Tuple[str, int]:
        return (f'{self._wrap(self.term(left), TERM_PRIMARY)} {op.value} '
                f'{self._wrap(self.term(right), TERM_PRIMARY)}'), BINARY_TERM

    def formula(self, A: Expression) -> Tuple[str, int]:
        kind = A.kind
        if kind is Kind.ATOM:
            return f'{self.term(A.element)[0]} in {self.term(A.container)[0]}', ATOM
        if kind is Kind.UNIVERSAL:
            identity = as_identity(A)
            if identity is not None:
                return f'{self.term(identity[0])[0]} = {self.term(identity[1])[0]}', ATOM
            return f'all v{A.index}. {self.formula(A.body)[0]}', QUANTIFIED
        inner = _negated(A)
        if inner is not None:
            truth_of = as_truth(A)
            if truth_of is not None:
                return f'TT({self.formula(truth_of)[0]})', UNARY
            found = _as_exists(A)
            if found is not None:
                return f'exists v{found[0]}. {self.formula(found[1])[0]}', QUANTIFIED
            parts = _as_implies(A)
            if parts is not None:
                return self._binary(parts[0], Op.IMPLIES, parts[1], IMPLIES, right_assoc=True)
            parts = _as_or(A)
            if parts is not None:
                return self._binary(parts[0], Op.OR, parts[1], OR, right_assoc=False)
            return f'not {self._wrap(self.formula(inner), UNARY)}', UNARY
        parts = _as_iff(A)
        if parts is not None:
            return self._binary(parts[0], Op.IFF, parts[1], IFF, right_assoc=True)
        parts = _as_and(A)
        if parts is not None:
            return self._binary(parts[0], Op.AND, parts[1], AND, right_assoc=False)
        left, right = A.children
        return f'nor({self.formula(left)[0]}, {self.formula(right)[0]})', UNARY

    def _binary(self, left: Expression, op: Op, right: Expression, level: int, right_assoc: bool) -> Tuple[str, int]:
        left_min = level + 1 if right_assoc else level
        right_min = level if right_assoc else level + 1
        return (f'{self._wrap(self.formula(left), left_min)} {op.value} '
                f'{self._wrap(self.formula(right), right_min)}'), level


def render(e: Expression, names: Optional[Dict[str, Expression]] = None) -> str:
    return Printer(names).render(e)
