"""
The £ grammar.

Symbols |_k, interned expression DAGs (terms and formulas), noemata,
substitution, substitutability, caliber, the D-defined sugar and the
austere / bare surface forms. The presentable surface lives in presentable.py.
"""
import threading
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import structlog

from codec import Formation, formation_of, split_symbols
from config import get_config
from errors import Ambiguous, BudgetExceeded, MalformedFormation, NotCognomen, NotInCategory

logger = structlog.get_logger(__name__)

SORTIFIER = 0
UNIVERSALIZOR = 1
NORIFYER = 2
ALETHIZOR = 3
ENUMERATOR = 4
NOEMA_BASE = 5


def symbol_value(k: int) -> int:
    return 1 << k


def symbol_role(k: int) -> str:
    if k == SORTIFIER:
        return 'sortifier'
    if k == UNIVERSALIZOR:
        return 'universalizor'
    if k == NORIFYER:
        return 'norifyer'
    if k == ALETHIZOR:
        return 'alethizor'
    if k == ENUMERATOR:
        return 'enumerator'
    return f'noema v{k - NOEMA_BASE}'


class Kind(Enum):
    NOEMA = 'noema'
    ALETHIZOR = 'alethizor'
    ENUMERATOR = 'enumerator'
    JOINT_TERM = 'joint_term'
    ABSTRACTION = 'abstraction'
    NUMERAL = 'numeral'
    ATOM = 'atom'
    JOINT_FORMULA = 'joint_formula'
    UNIVERSAL = 'universal'


TERM_KINDS = frozenset({Kind.NOEMA, Kind.ALETHIZOR, Kind.ENUMERATOR,
                        Kind.JOINT_TERM, Kind.ABSTRACTION, Kind.NUMERAL})
FORMULA_KINDS = frozenset({Kind.ATOM, Kind.JOINT_FORMULA, Kind.UNIVERSAL})
PRAENOMEN_KINDS = frozenset({Kind.NOEMA, Kind.ALETHIZOR, Kind.ENUMERATOR})


class Category(Enum):
    TERM = 'term'
    FORMULA = 'formula'
    AUTO = 'auto'


class Expression:
    """
    One interned node of a term or formula.

    ``index`` is the noema index for NOEMA, the bound noema for ABSTRACTION and
    UNIVERSAL, and the source number n for a NUMERAL ⌜n⌝. ATOM children are
    (b, a) for a ∈ b, applier first. Nodes are shared, so ``is`` is structural
    equality; never construct one directly, use the factories below.
    """

    __slots__ = ('kind', 'index', 'children', 'scheme', '_noemata', '_bits', '_sorts', '__weakref__')

    def __init__(self, kind: Kind, index: int, children: Tuple['Expression', ...], scheme=None):
        self.kind = kind
        self.index = index
        self.children = children
        self.scheme = scheme
        self._noemata: Optional[FrozenSet[int]] = None
        self._bits: Optional[int] = None
        self._sorts: Optional[bool] = None

    @property
    def is_term(self) -> bool:
        return self.kind in TERM_KINDS

    @property
    def is_formula(self) -> bool:
        return self.kind in FORMULA_KINDS

    @property
    def is_abstraction(self) -> bool:
        return self.kind is Kind.ABSTRACTION or self.kind is Kind.NUMERAL

    @property
    def is_binder(self) -> bool:
        return self.kind in (Kind.ABSTRACTION, Kind.NUMERAL, Kind.UNIVERSAL)

    @property
    def binder(self) -> int:
        if self.kind is Kind.NUMERAL:
            return 0
        if self.kind in (Kind.ABSTRACTION, Kind.UNIVERSAL):
            return self.index
        raise AttributeError(f"{self.kind.value} has no binder")

    @property
    def body(self) -> 'Expression':
        if self.kind is Kind.NUMERAL:
            return self.scheme.numeral_body(self.index)
        if self.kind in (Kind.ABSTRACTION, Kind.UNIVERSAL):
            return self.children[0]
        raise AttributeError(f"{self.kind.value} has no body")

    @property
    def container(self) -> 'Expression':
        """b in the atom a ∈ b"""
        return self.children[0]

    @property
    def element(self) -> 'Expression':
        """a in the atom a ∈ b"""
        return self.children[1]

    @property
    def noemata(self) -> FrozenSet[int]:
        if self._noemata is None:
            self._noemata = _compute_noemata(self)
        return self._noemata

    @property
    def bit_length(self) -> int:
        if self._bits is None:
            self._bits = _compute_bits(self)
        return self._bits

    @property
    def has_sort_constant(self) -> bool:
        """True when T or € occurs anywhere"""
        if self._sorts is None:
            self._sorts = _compute_sorts(self)
        return self._sorts

    def __repr__(self) -> str:
        return f"Expression({sketch(self)})"


def _compute_noemata(e: Expression) -> FrozenSet[int]:
    kind = e.kind
    if kind is Kind.NOEMA:
        return frozenset((e.index,))
    if kind in (Kind.ALETHIZOR, Kind.ENUMERATOR):
        return frozenset()
    if kind is Kind.NUMERAL:
        return e.scheme.numeral_noemata(e.index)
    if kind in (Kind.ABSTRACTION, Kind.UNIVERSAL):
        return e.children[0].noemata - {e.index}
    return e.children[0].noemata | e.children[1].noemata


def _compute_bits(e: Expression) -> int:
    kind = e.kind
    if kind is Kind.NOEMA:
        return e.index + NOEMA_BASE + 1
    if kind is Kind.ALETHIZOR:
        return ALETHIZOR + 1
    if kind is Kind.ENUMERATOR:
        return ENUMERATOR + 1
    if kind is Kind.NUMERAL:
        return e.scheme.bit_length(e.index)
    if kind is Kind.ABSTRACTION:
        return 1 + (e.index + NOEMA_BASE + 1) + e.children[0].bit_length
    if kind is Kind.UNIVERSAL:
        return 2 + (e.index + NOEMA_BASE + 1) + e.children[0].bit_length
    if kind in (Kind.JOINT_TERM, Kind.JOINT_FORMULA):
        return 3 + e.children[0].bit_length + e.children[1].bit_length
    return e.children[0].bit_length + e.children[1].bit_length


def _compute_sorts(e: Expression) -> bool:
    if e.kind in (Kind.ALETHIZOR, Kind.ENUMERATOR):
        return True
    if e.kind in (Kind.NOEMA, Kind.NUMERAL):
        return False
    return any(child.has_sort_constant for child in e.children)


class Interner:
    """Hash-consing table; the only shared mutable structure, insertions are locked"""

    def __init__(self):
        self._table: Dict[tuple, Expression] = {}
        self._lock = threading.Lock()

    def intern(self, kind: Kind, index: int, children: Tuple[Expression, ...], scheme=None) -> Expression:
        key = (kind, index, tuple(id(child) for child in children), id(scheme) if scheme is not None else None)
        node = self._table.get(key)
        if node is not None:
            return node
        with self._lock:
            node = self._table.get(key)
            if node is None:
                node = Expression(kind, index, children, scheme)
                self._table[key] = node
        return node

    def __len__(self) -> int:
        return len(self._table)


# Global instance
interner = Interner()

# Coding schemes whose numeral shapes abstraction() canonicalizes
_numeral_schemes: List = []


def register_numeral_scheme(scheme) -> None:
    if scheme not in _numeral_schemes:
        _numeral_schemes.append(scheme)


# --- factories -------------------------------------------------------------

def noema(i: int) -> Expression:
    if i < 0:
        raise ValueError("noema indices are natural numbers")
    return interner.intern(Kind.NOEMA, i, ())


def alethizor() -> Expression:
    return interner.intern(Kind.ALETHIZOR, ALETHIZOR, ())


def enumerator() -> Expression:
    return interner.intern(Kind.ENUMERATOR, ENUMERATOR, ())


def _require(e: Expression, term: bool, role: str) -> None:
    if not isinstance(e, Expression) or (e.is_term if term else e.is_formula) is False:
        raise NotInCategory(f"{role} must be a {'term' if term else 'formula'}")


def joint_term(b: Expression, a: Expression) -> Expression:
    _require(b, True, "joint operand")
    _require(a, True, "joint operand")
    return interner.intern(Kind.JOINT_TERM, NORIFYER, (b, a))


def abstraction(binder: int, body: Expression) -> Expression:
    _require(body, False, "abstraction body")
    if binder == 0:
        for scheme in _numeral_schemes:
            n = scheme.match_numeral_body(body)
            if n is not None:
                return numeral(n, scheme)
    return interner.intern(Kind.ABSTRACTION, binder, (body,))


def numeral(n: int, scheme) -> Expression:
    """The canonical node for the Gödel numeral ⌜n⌝ of a coding scheme"""
    if n < 0:
        raise ValueError("numerals code natural numbers")
    return interner.intern(Kind.NUMERAL, n, (), scheme)


def atom(b: Expression, a: Expression) -> Expression:
    """The formula "ba", read a ∈ b"""
    _require(b, True, "atom applier")
    _require(a, True, "atom argument")
    return interner.intern(Kind.ATOM, 0, (b, a))


def joint_formula(A: Expression, B: Expression) -> Expression:
    _require(A, False, "joint operand")
    _require(B, False, "joint operand")
    return interner.intern(Kind.JOINT_FORMULA, NORIFYER, (A, B))


def universal(binder: int, body: Expression) -> Expression:
    _require(body, False, "quantifier body")
    return interner.intern(Kind.UNIVERSAL, binder, (body,))


def rebuild(e: Expression, children: Sequence[Expression]) -> Expression:
    """Same node kind with new children"""
    if e.kind is Kind.JOINT_TERM:
        return joint_term(children[0], children[1])
    if e.kind is Kind.JOINT_FORMULA:
        return joint_formula(children[0], children[1])
    if e.kind is Kind.ATOM:
        return atom(children[0], children[1])
    if e.kind in (Kind.ABSTRACTION, Kind.NUMERAL):
        return abstraction(e.binder, children[0])
    if e.kind is Kind.UNIVERSAL:
        return universal(e.index, children[0])
    return e


def parts(e: Expression) -> Tuple[Expression, ...]:
    """Immediate subexpressions, unfolding a numeral to its body"""
    if e.kind is Kind.NUMERAL:
        return (e.body,)
    return e.children


# --- sugar (D7-D19) ---------------------------------------------------------

def neg(A: Expression) -> Expression:
    return joint_formula(A, A)


def disj(A: Expression, B: Expression) -> Expression:
    return neg(joint_formula(A, B))


def conj(A: Expression, B: Expression) -> Expression:
    return joint_formula(neg(A), neg(B))


def implies(A: Expression, B: Expression) -> Expression:
    return neg(joint_formula(neg(A), B))


def iff(A: Expression, B: Expression) -> Expression:
    return conj(implies(A, B), implies(B, A))


def complement(a: Expression) -> Expression:
    return joint_term(a, a)


def union(a: Expression, b: Expression) -> Expression:
    return complement(joint_term(a, b))


def intersection(a: Expression, b: Expression) -> Expression:
    return joint_term(complement(a), complement(b))


def difference(a: Expression, b: Expression) -> Expression:
    return intersection(a, complement(b))


def exists(y: int, A: Expression) -> Expression:
    return neg(universal(y, neg(A)))


def member(a: Expression, b: Expression) -> Expression:
    """a ∈ b, which is the atom ba"""
    return atom(b, a)


def set_of(y: int, A: Expression) -> Expression:
    return abstraction(y, A)


def least_absent(indices: Iterable[int]) -> int:
    present = set(indices)
    k = 0
    while k in present:
        k += 1
    return k


def truth_binder(A: Expression) -> int:
    """The bound noema of 𝕋A: the least index absent from ℵ(A); every smaller one is present"""
    return least_absent(A.noemata)


def truth(A: Expression) -> Expression:
    """𝕋A ≜ ∃y(y ∈ {y|A})"""
    y = truth_binder(A)
    return exists(y, member(noema(y), abstraction(y, A)))


def identity(a: Expression, b: Expression) -> Expression:
    """a = b ≜ ∀u(a∈u → b∈u), u the least noema present in neither side"""
    u = least_absent(a.noemata | b.noemata)
    return universal(u, implies(member(a, noema(u)), member(b, noema(u))))


def pair(a: Expression, b: Expression) -> Expression:
    """Kuratowski pair {z | z = {x|x=a} ∨ z = {x|x=a ∨ x=b}}"""
    x = least_absent(a.noemata | b.noemata)
    single = abstraction(x, identity(noema(x), a))
    double = abstraction(x, disj(identity(noema(x), a), identity(noema(x), b)))
    z = least_absent(single.noemata | double.noemata)
    return abstraction(z, disj(identity(noema(z), single), identity(noema(z), double)))


def curry(F: Expression) -> Expression:
    """c^F = {x | x∈x → F}"""
    x = least_absent(F.noemata)
    return abstraction(x, implies(member(noema(x), noema(x)), F))


def empty_sort() -> Expression:
    """∅ = {x | x ≠ x}"""
    return abstraction(0, neg(identity(noema(0), noema(0))))


# --- noemata, substitution, substitutability ---------------------------------

def noemata(e: Expression) -> FrozenSet[int]:
    return e.noemata


def is_proposition(e: Expression) -> bool:
    """A formula with no noemata present"""
    return e.is_formula and not e.noemata


def _unfold_guard(count: List[int]) -> None:
    count[0] += 1
    limit = get_config().max_numeral_unfold
    if count[0] > limit:
        raise BudgetExceeded("numeral unfolding exceeds max_numeral_unfold", required=count[0], budget=limit)


def substitute(a: Expression, u: int, e: Expression) -> Expression:
    """(a/u)e, clause by clause; no capture check (see substitutable)"""
    memo: Dict[int, Expression] = {}
    unfolded = [0]

    def go(x: Expression) -> Expression:
        if u not in x.noemata:
            return x
        cached = memo.get(id(x))
        if cached is not None:
            return cached
        kind = x.kind
        if kind is Kind.NOEMA:
            result = a
        elif kind is Kind.NUMERAL:
            _unfold_guard(unfolded)
            result = abstraction(0, go(x.body))
        elif kind in (Kind.ABSTRACTION, Kind.UNIVERSAL):
            result = rebuild(x, (go(x.children[0]),))
        else:
            result = rebuild(x, (go(x.children[0]), go(x.children[1])))
        memo[id(x)] = result
        return result

    return go(e)


def substitutable(a: Expression, u: int, e: Expression) -> bool:
    """F(a,u,e): no free noema of a is captured when a replaces the free u in e"""
    memo: Dict[int, bool] = {}
    free_a = a.noemata
    unfolded = [0]

    def go(x: Expression) -> bool:
        if u not in x.noemata:
            return True
        cached = memo.get(id(x))
        if cached is not None:
            return cached
        kind = x.kind
        if kind is Kind.NOEMA:
            result = True
        elif x.is_binder:
            if kind is Kind.NUMERAL:
                _unfold_guard(unfolded)
            result = x.binder not in free_a and go(x.body)
        else:
            result = go(x.children[0]) and go(x.children[1])
        memo[id(x)] = result
        return result

    return go(e)


def substitute_term(old: Expression, new: Expression, e: Expression) -> Expression:
    """Replaces every occurrence of the closed term ``old`` by ``new`` (term-for-term)"""
    memo: Dict[int, Expression] = {}

    def go(x: Expression) -> Expression:
        if x is old:
            return new
        if x.kind is Kind.NUMERAL or not x.children:
            return x
        cached = memo.get(id(x))
        if cached is None:
            cached = rebuild(x, [go(child) for child in x.children])
            memo[id(x)] = cached
        return cached

    return go(e)


def occurrences(e: Expression, u: int) -> int:
    """Number of free occurrences of v_u"""
    memo: Dict[int, int] = {}
    unfolded = [0]

    def go(x: Expression) -> int:
        if u not in x.noemata:
            return 0
        cached = memo.get(id(x))
        if cached is not None:
            return cached
        if x.kind is Kind.NOEMA:
            result = 1
        elif x.is_binder:
            if x.kind is Kind.NUMERAL:
                _unfold_guard(unfolded)
            result = go(x.body)
        else:
            result = go(x.children[0]) + go(x.children[1])
        memo[id(x)] = result
        return result

    return go(e)


def max_noema_index(e: Expression) -> int:
    """Largest noema index occurring free or bound; -1 when none"""
    memo: Dict[int, int] = {}

    def go(x: Expression) -> int:
        cached = memo.get(id(x))
        if cached is not None:
            return cached
        if x.kind is Kind.NOEMA:
            result = x.index
        elif x.kind is Kind.NUMERAL:
            result = x.scheme.max_noema_index
        elif x.kind in (Kind.ABSTRACTION, Kind.UNIVERSAL):
            result = max(x.index, go(x.children[0]))
        elif x.children:
            result = max(go(x.children[0]), go(x.children[1]))
        else:
            result = -1
        memo[id(x)] = result
        return result

    return go(e)


def fresh_noema(*exprs: Expression) -> int:
    """An index above every noema occurring in the given expressions"""
    return 1 + max((max_noema_index(e) for e in exprs), default=-1)


# --- classification ---------------------------------------------------------

def caliber(a: Expression) -> int:
    """
    0 for T, € and abstraction terms; 1 + max of the parts for a juncture

    Raises:
        NotCognomen: when a is not a term or has noemata present
    """
    if not a.is_term or a.noemata:
        raise NotCognomen("caliber is defined on cognomina only")
    memo: Dict[int, int] = {}

    def go(x: Expression) -> int:
        if x.kind is not Kind.JOINT_TERM:
            return 0
        cached = memo.get(id(x))
        if cached is None:
            cached = 1 + max(go(x.children[0]), go(x.children[1]))
            memo[id(x)] = cached
        return cached

    return go(a)


def classify_term(a: Expression) -> FrozenSet[str]:
    """Subset of {praenomen, cognomen, pronomen, nomen-with-noemata}"""
    if not a.is_term:
        raise NotInCategory("classify_term takes a term")
    labels = set()
    if a.kind in PRAENOMEN_KINDS:
        labels.add('praenomen')
    if a.noemata:
        labels.add('nomen-with-noemata')
    else:
        labels.add('cognomen')
        if not a.has_sort_constant:
            labels.add('pronomen')
    return frozenset(labels)


def is_cognomen(a: Expression) -> bool:
    return a.is_term and not a.noemata


def is_pronomen(a: Expression) -> bool:
    return is_cognomen(a) and not a.has_sort_constant


def category_of(e: Expression) -> Category:
    return Category.TERM if e.is_term else Category.FORMULA


# --- flattening ---------------------------------------------------------------

def symbols(e: Expression) -> Iterator[int]:
    """The formation of e as symbol indices, in order"""
    stack: List[Union[int, Expression]] = [e]
    while stack:
        item = stack.pop()
        if isinstance(item, int):
            yield item
            continue
        kind = item.kind
        if kind in (Kind.NOEMA, Kind.ALETHIZOR, Kind.ENUMERATOR):
            yield item.index + NOEMA_BASE if kind is Kind.NOEMA else item.index
        elif kind in (Kind.JOINT_TERM, Kind.JOINT_FORMULA):
            yield NORIFYER
            stack.append(item.children[1])
            stack.append(item.children[0])
        elif kind is Kind.ATOM:
            stack.append(item.children[1])
            stack.append(item.children[0])
        else:
            yield UNIVERSALIZOR if kind is Kind.UNIVERSAL else SORTIFIER
            yield item.binder + NOEMA_BASE
            stack.append(item.body)


def _check_budget(e: Expression, budget_bits: Optional[int]) -> None:
    budget = get_config().budget_materialize_bits if budget_bits is None else budget_bits
    bits = e.bit_length
    if bits > budget:
        raise BudgetExceeded(f"expression needs {bits} bits", required=bits, budget=budget)


def flatten(e: Expression, budget_bits: Optional[int] = None) -> Formation:
    _check_budget(e, budget_bits)
    return Formation(tuple(symbols(e)))


def formation_value(e: Expression, budget_bits: Optional[int] = None) -> int:
    """value_of(flatten(e)) computed over the shared structure"""
    _check_budget(e, budget_bits)
    memo: Dict[int, int] = {}

    def go(x: Expression) -> int:
        cached = memo.get(id(x))
        if cached is not None:
            return cached
        kind = x.kind
        if kind is Kind.NOEMA:
            result = 1 << (x.index + NOEMA_BASE)
        elif kind in (Kind.ALETHIZOR, Kind.ENUMERATOR):
            result = 1 << x.index
        elif kind in (Kind.JOINT_TERM, Kind.JOINT_FORMULA):
            left, right = x.children
            result = (((1 << NORIFYER) << left.bit_length | go(left)) << right.bit_length) | go(right)
        elif kind is Kind.ATOM:
            left, right = x.children
            result = (go(left) << right.bit_length) | go(right)
        else:
            prefix = UNIVERSALIZOR if kind is Kind.UNIVERSAL else SORTIFIER
            binder = x.binder + NOEMA_BASE
            body = x.body
            head = ((1 << prefix) << (binder + 1)) | (1 << binder)
            result = (head << body.bit_length) | go(body)
        memo[id(x)] = result
        return result

    return go(e)


# --- parsing ----------------------------------------------------------------

class _Clash:
    """Two distinct whole readings of the same span"""

    __slots__ = ('first', 'second')

    def __init__(self, first, second):
        self.first = first
        self.second = second


Token = Union[int, Expression]


def _first(node):
    return node.first if isinstance(node, _Clash) else node


def _second(node):
    return node.second if isinstance(node, _Clash) else node


class _Chart:
    """Span chart over symbol tokens (prebuilt terms allowed as tokens).

    A reading starting at i only looks at readings starting further right, and a
    formula at i also at the terms at i, so the tables fill from the last token
    back to the first without recursion.
    """

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = tokens
        size = len(tokens)
        self.terms: List[Dict[int, object]] = [{} for _ in range(size)]
        self.formulas: List[Dict[int, object]] = [{} for _ in range(size)]
        for i in range(size - 1, -1, -1):
            self._fill_term(i)
            self._fill_formula(i)

    @staticmethod
    def _add(table: Dict[int, object], end: int, node: object) -> None:
        previous = table.get(end)
        if previous is None:
            table[end] = node
        elif previous is not node and not isinstance(previous, _Clash):
            other = node
            if isinstance(node, _Clash):
                other = node.second if node.first is previous else node.first
            table[end] = _Clash(previous, other)

    def _noema_at(self, i: int) -> Optional[int]:
        if i < len(self.tokens):
            token = self.tokens[i]
            if isinstance(token, int) and token >= NOEMA_BASE:
                return token - NOEMA_BASE
        return None

    def term(self, i: int) -> Dict[int, object]:
        return self.terms[i] if i < len(self.terms) else {}

    def formula(self, i: int) -> Dict[int, object]:
        return self.formulas[i] if i < len(self.formulas) else {}

    def _fill_term(self, i: int) -> None:
        found = self.terms[i]
        token = self.tokens[i]
        if isinstance(token, Expression):
            found[i + 1] = token
        elif token >= NOEMA_BASE:
            found[i + 1] = noema(token - NOEMA_BASE)
        elif token == ALETHIZOR:
            found[i + 1] = alethizor()
        elif token == ENUMERATOR:
            found[i + 1] = enumerator()
        elif token == NORIFYER:
            for mid, left in self.term(i + 1).items():
                for end, right in self.term(mid).items():
                    self._add(found, end, _combine(joint_term, left, right))
        elif token == SORTIFIER:
            binder = self._noema_at(i + 1)
            if binder is not None:
                for end, body in self.formula(i + 2).items():
                    self._add(found, end, _combine_binder(abstraction, binder, body))

    def _fill_formula(self, i: int) -> None:
        found = self.formulas[i]
        for mid, left in self.term(i).items():
            for end, right in self.term(mid).items():
                self._add(found, end, _combine(atom, left, right))
        token = self.tokens[i]
        if isinstance(token, Expression):
            return
        if token == NORIFYER:
            for mid, left in self.formula(i + 1).items():
                for end, right in self.formula(mid).items():
                    self._add(found, end, _combine(joint_formula, left, right))
        elif token == UNIVERSALIZOR:
            binder = self._noema_at(i + 1)
            if binder is not None:
                for end, body in self.formula(i + 2).items():
                    self._add(found, end, _combine_binder(universal, binder, body))


def _combine(factory, left, right):
    """One reading, or a clash carrying two whole readings of the combined span"""
    if isinstance(left, _Clash) or isinstance(right, _Clash):
        return _Clash(factory(_first(left), _first(right)), factory(_second(left), _second(right)))
    return factory(left, right)


def _combine_binder(factory, binder, body):
    if isinstance(body, _Clash):
        return _Clash(factory(binder, body.first), factory(binder, body.second))
    return factory(binder, body)


def _whole(chart: _Chart, category: Category):
    table = chart.term(0) if category is Category.TERM else chart.formula(0)
    return table.get(len(chart.tokens))


def _raise_clash(clash: _Clash, what: str):
    raise Ambiguous(f"{what} has two readings", first=clash.first, second=clash.second)


def parse_tokens(tokens: Sequence[Token], category: Union[Category, str] = Category.AUTO) -> Expression:
    """
    Whole-sequence parse of symbol indices (and prebuilt term tokens)

    Raises:
        NotInCategory: no parse in the requested category
        Ambiguous: two parses (within a category, or in both categories in auto mode)
    """
    category = Category(category)
    if not tokens:
        raise MalformedFormation("empty formation")
    chart = _Chart(list(tokens))
    if category is not Category.AUTO:
        result = _whole(chart, category)
        if result is None:
            raise NotInCategory(f"not a whole {category.value}")
        if isinstance(result, _Clash):
            _raise_clash(result, f"the {category.value}")
        return result
    as_term = _whole(chart, Category.TERM)
    as_formula = _whole(chart, Category.FORMULA)
    if as_term is not None and as_formula is not None:
        logger.warning("formation parses as both term and formula", symbols=len(tokens))
        raise Ambiguous("parses as both a term and a formula", first=as_term, second=as_formula)
    result = as_term if as_term is not None else as_formula
    if result is None:
        raise NotInCategory("neither a whole term nor a whole formula")
    if isinstance(result, _Clash):
        _raise_clash(result, "the formation")
    return result


def parse(text: str, category: Union[Category, str] = Category.AUTO) -> Expression:
    """Parses an austere or bare string"""
    return parse_tokens(split_symbols(text), category)


def parse_number(n: int, category: Union[Category, str] = Category.AUTO) -> Expression:
    return parse_tokens(formation_of(n).symbols, category)


def render(e: Expression, form: str = 'presentable', names: Optional[Dict[str, Expression]] = None,
           budget_bits: Optional[int] = None) -> str:
    """print(e, form) for form in austere, bare, presentable"""
    if form == 'austere':
        return flatten(e, budget_bits).austere
    if form == 'bare':
        return flatten(e, budget_bits).bare
    if form == 'presentable':
        import presentable
        return presentable.render(e, names=names)
    raise ValueError(f"unknown form {form!r}")


def sketch(e: Expression, limit: int = 80) -> str:
    """Short bare-form preview for logs and reprs"""
    out = []
    size = 0
    for k in symbols(e):
        piece = f'|{k}'
        out.append(piece)
        size += len(piece)
        if size > limit:
            out.append('…')
            break
    return ''.join(out)


def category_census(max_bits: int) -> Dict[str, object]:
    """
    Parses every formation of bit length <= max_bits in both categories.

    Returns counts of term-only, formula-only and unparseable formations, the
    numbers that parse as both (``ambiguous``) and the numbers with two readings
    inside one category (``clashes``).
    """
    counts = {'term': 0, 'formula': 0, 'neither': 0}
    both: List[int] = []
    clashes: Dict[str, List[int]] = {'term': [], 'formula': []}
    for n in range(1, 1 << max_bits):
        chart = _Chart(list(formation_of(n).symbols))
        as_term = _whole(chart, Category.TERM)
        as_formula = _whole(chart, Category.FORMULA)
        if isinstance(as_term, _Clash):
            clashes['term'].append(n)
        if isinstance(as_formula, _Clash):
            clashes['formula'].append(n)
        if as_term is not None and as_formula is not None:
            both.append(n)
        elif as_term is not None:
            counts['term'] += 1
        elif as_formula is not None:
            counts['formula'] += 1
        else:
            counts['neither'] += 1
    if both:
        logger.warning("category overlap found", count=len(both), first=both[0])
    else:
        logger.info("categories disjoint", max_bits=max_bits)
    for category, numbers in clashes.items():
        if numbers:
            logger.warning("two readings inside one category", category=category, count=len(numbers),
                           first=numbers[0])
    return {'max_bits': max_bits, 'counts': counts, 'ambiguous': both, 'clashes': clashes}


# Canonical numeral shapes need the coding schemes registered.
import goedel  # noqa: E402,F401
