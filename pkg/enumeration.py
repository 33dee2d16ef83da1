"""
Alphabetological variants and the enumeration e of cognomina.

Variance on propositions is decided on a sound core: binder canonicalization,
vacuous-quantifier removal and a truth table over maximal non-joint
subformulas. Anything beyond that core comes back UNKNOWN.
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

import syntax
from codec import formation_of
from config import get_config
from errors import Ambiguous, BudgetExceeded, NotCognomen, NotEnumerated, NotInCategory
from syntax import Category, Expression, Kind

logger = structlog.get_logger(__name__)

MAX_LETTERS = 12


class Verdict(Enum):
    VARIANT = 'variant'
    NOT_VARIANT = 'not-variant'
    UNKNOWN = 'unknown'


def _both(first: Verdict, second: Verdict) -> Verdict:
    if Verdict.NOT_VARIANT in (first, second):
        return Verdict.NOT_VARIANT
    if first is Verdict.VARIANT and second is Verdict.VARIANT:
        return Verdict.VARIANT
    return Verdict.UNKNOWN


def _either(first: Verdict, second: Verdict) -> Verdict:
    if Verdict.VARIANT in (first, second):
        return Verdict.VARIANT
    if first is Verdict.NOT_VARIANT and second is Verdict.NOT_VARIANT:
        return Verdict.NOT_VARIANT
    return Verdict.UNKNOWN


# --- canonical binders ------------------------------------------------------

def normalize(A: Expression, offset: int) -> Expression:
    """Renames binders by nesting depth (offset + depth) and drops vacuous quantifiers"""
    memo: Dict[Tuple[int, int, Tuple], Expression] = {}

    def go(e: Expression, depth: int, renaming: Tuple[Tuple[int, int], ...]) -> Expression:
        relevant = tuple(pair for pair in renaming if pair[0] in e.noemata)
        if not e.children and e.kind is not Kind.NUMERAL:
            if e.kind is Kind.NOEMA:
                return syntax.noema(dict(relevant).get(e.index, e.index))
            return e
        key = (id(e), depth, relevant)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if e.kind is Kind.NUMERAL and not relevant:
            result = e
        elif e.is_binder:
            body = e.body
            if e.kind is Kind.UNIVERSAL and e.binder not in body.noemata:
                result = go(body, depth, relevant)
            else:
                fresh = offset + depth
                inner = tuple(pair for pair in relevant if pair[0] != e.binder) + ((e.binder, fresh),)
                new_body = go(body, depth + 1, inner)
                if e.kind is Kind.UNIVERSAL:
                    result = syntax.universal(fresh, new_body)
                else:
                    result = syntax.abstraction(fresh, new_body)
        else:
            result = syntax.rebuild(e, [go(child, depth, relevant) for child in e.children])
        memo[key] = result
        return result

    return go(A, 0, ())


def existential_closure(a: Expression) -> Expression:
    """∃x A(x) for the abstraction term {x | A(x)}"""
    return syntax.exists(a.binder, a.body)


# --- propositional core -----------------------------------------------------

def _letters(A: Expression, out: List[Expression]) -> None:
    if A.kind is Kind.JOINT_FORMULA:
        _letters(A.children[0], out)
        if A.children[1] is not A.children[0]:
            _letters(A.children[1], out)
    elif not any(letter is A for letter in out):
        out.append(A)


def _evaluate(A: Expression, valuation: Dict[int, bool]) -> bool:
    if A.kind is Kind.JOINT_FORMULA:
        return not _evaluate(A.children[0], valuation) and not _evaluate(A.children[1], valuation)
    return valuation[id(A)]


@lru_cache(maxsize=65536)
def _leaf_variant(x: Expression, y: Expression) -> Verdict:
    if x is y:
        return Verdict.VARIANT
    if x.kind is Kind.ATOM and y.kind is Kind.ATOM:
        return _both(term_variant(x.container, y.container), term_variant(x.element, y.element))
    if x.kind is Kind.UNIVERSAL and y.kind is Kind.UNIVERSAL and x.index == y.index:
        verdict = _open_variant(x.body, y.body)
        return Verdict.VARIANT if verdict is Verdict.VARIANT else Verdict.UNKNOWN
    if x.kind is Kind.UNIVERSAL or y.kind is Kind.UNIVERSAL:
        return Verdict.UNKNOWN
    return Verdict.NOT_VARIANT


@lru_cache(maxsize=65536)
def _open_variant(A: Expression, B: Expression) -> Verdict:
    """Variance of two already-normalized formulas sharing binder names"""
    if A is B:
        return Verdict.VARIANT
    letters: List[Expression] = []
    _letters(A, letters)
    _letters(B, letters)
    if len(letters) > MAX_LETTERS:
        return Verdict.UNKNOWN

    parent = list(range(len(letters)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    unknown_pair = False
    for i, j in itertools.combinations(range(len(letters)), 2):
        if find(i) == find(j):
            continue
        verdict = _leaf_variant(letters[i], letters[j])
        if verdict is Verdict.VARIANT:
            parent[find(i)] = find(j)
        elif verdict is Verdict.UNKNOWN:
            unknown_pair = True

    classes = sorted({find(k) for k in range(len(letters))})
    equivalent = True
    for bits in itertools.product((False, True), repeat=len(classes)):
        chosen = dict(zip(classes, bits))
        valuation = {id(letter): chosen[find(k)] for k, letter in enumerate(letters)}
        if _evaluate(A, valuation) != _evaluate(B, valuation):
            equivalent = False
            break
    if equivalent:
        return Verdict.VARIANT
    if unknown_pair or any(letter.kind is Kind.UNIVERSAL for letter in letters):
        return Verdict.UNKNOWN
    return Verdict.NOT_VARIANT


def variant_formulas(A: Expression, B: Expression) -> Verdict:
    """Proposition-level variance: canonical binders, then the truth-table core"""
    if A is B:
        return Verdict.VARIANT
    offset = syntax.fresh_noema(A, B)
    return _open_variant(normalize(A, offset), normalize(B, offset))


@lru_cache(maxsize=65536)
def term_variant(a: Expression, b: Expression) -> Verdict:
    """Variance on arbitrary terms; noemata only match themselves"""
    if a is b:
        return Verdict.VARIANT
    if a.kind in syntax.PRAENOMEN_KINDS or b.kind in syntax.PRAENOMEN_KINDS:
        return Verdict.NOT_VARIANT
    if a.kind is Kind.JOINT_TERM and b.kind is Kind.JOINT_TERM:
        straight = _both(term_variant(a.children[0], b.children[0]), term_variant(a.children[1], b.children[1]))
        if straight is Verdict.VARIANT:
            return straight
        cross = _both(term_variant(a.children[0], b.children[1]), term_variant(a.children[1], b.children[0]))
        return _either(straight, cross)
    if a.is_abstraction and b.is_abstraction:
        return variant_formulas(existential_closure(a), existential_closure(b))
    return Verdict.NOT_VARIANT


def variant(a: Expression, b: Expression) -> Verdict:
    """
    Alphabetological variance of two cognomina

    Raises:
        NotCognomen: either side has noemata present or is not a term
    """
    if not syntax.is_cognomen(a) or not syntax.is_cognomen(b):
        raise NotCognomen("variance is defined on cognomina")
    return term_variant(a, b)


# --- enumeration ------------------------------------------------------------

@dataclass(frozen=True)
class EnumEntry:
    index: int
    term: Expression
    value: int
    austere: str
    coerced: bool = False
    unknown_against: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, object]:
        from presentable import render
        return {
            'index': self.index,
            'value': self.value,
            'austere': self.austere,
            'presentable': render(self.term),
            'coerced': self.coerced,
            'unknown_against': list(self.unknown_against),
        }


@dataclass
class EnumPrefix:
    """The first entries of e, each the least cognomen of a new variant class"""

    entries: List[EnumEntry] = field(default_factory=list)
    scanned_to: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def terms(self) -> List[Expression]:
        return [entry.term for entry in self.entries]

    @property
    def coercions(self) -> List[EnumEntry]:
        return [entry for entry in self.entries if entry.coerced]

    def alias(self, n: int) -> Expression:
        """e(n), the term noema v_n stands for"""
        if n < 0 or n >= len(self.entries):
            raise NotEnumerated(f"e({n}) is beyond the enumerated prefix", size=len(self.entries))
        return self.entries[n].term

    def index_of(self, term: Expression) -> int:
        for entry in self.entries:
            if entry.term is term:
                return entry.index
        if syntax.is_cognomen(term):
            for entry in self.entries:
                if term_variant(term, entry.term) is Verdict.VARIANT:
                    return entry.index
        raise NotEnumerated("term is not a variant of any enumerated cognomen")

    def prefix(self, size: int) -> 'EnumPrefix':
        return EnumPrefix(self.entries[:size], self.scanned_to)

    def to_dict(self) -> Dict[str, object]:
        return {
            'count': len(self.entries),
            'scanned_to': self.scanned_to,
            'entries': [entry.to_dict() for entry in self.entries],
        }


def _cognomen_at(n: int) -> Optional[Expression]:
    symbols = formation_of(n).symbols
    head = symbols[0]
    if head == syntax.UNIVERSALIZOR or head >= syntax.NOEMA_BASE:
        return None
    if head in (syntax.ALETHIZOR, syntax.ENUMERATOR) and len(symbols) != 1:
        return None
    try:
        term = syntax.parse_tokens(symbols, Category.TERM)
    except (NotInCategory, Ambiguous):
        return None
    return term if syntax.is_cognomen(term) else None


def _cognomina_between(low: int, high: int) -> List[Tuple[int, Expression]]:
    found = []
    for n in range(low, high):
        term = _cognomen_at(n)
        if term is not None:
            found.append((n, term))
    return found


def enumerate_cognomina(count: int, max_bits: Optional[int] = None, threads: Optional[int] = None,
                        chunk: int = 2048) -> EnumPrefix:
    """
    The first ``count`` entries of e, walking cognomina by increasing value

    Raises:
        BudgetExceeded: fewer than ``count`` classes below 2^max_bits
    """
    settings = get_config()
    max_bits = settings.enum_max_bits if max_bits is None else max_bits
    threads = max(1, settings.threads if threads is None else threads)
    limit = 1 << max_bits
    prefix = EnumPrefix()
    low = 1

    def admit(n: int, term: Expression) -> None:
        unknown = []
        for entry in prefix.entries:
            verdict = term_variant(term, entry.term)
            if verdict is Verdict.VARIANT:
                return
            if verdict is Verdict.UNKNOWN:
                unknown.append(entry.index)
        if unknown:
            logger.warning("unknown variance treated as distinct", value=n, against=unknown)
        prefix.entries.append(EnumEntry(index=len(prefix.entries), term=term, value=n,
                                        austere=formation_of(n).austere, coerced=bool(unknown),
                                        unknown_against=tuple(unknown)))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        while len(prefix) < count:
            if low >= limit:
                raise BudgetExceeded(f"only {len(prefix)} cognomen classes below 2^{max_bits}",
                                     required=count, budget=len(prefix))
            ranges = []
            for _ in range(threads):
                if low >= limit:
                    break
                high = min(low + chunk, limit)
                ranges.append((low, high))
                low = high
            for batch in pool.map(lambda span: _cognomina_between(*span), ranges):
                for n, term in batch:
                    if len(prefix) >= count:
                        break
                    admit(n, term)
                    prefix.scanned_to = n
    logger.info("enumeration prefix built", count=len(prefix), coerced=len(prefix.coercions))
    return prefix


def order_lt(a: Expression, b: Expression, ctx: EnumPrefix) -> bool:
    """a ◂ b: a's enumeration index is below b's"""
    return ctx.index_of(a) < ctx.index_of(b)


def order_le(a: Expression, b: Expression, ctx: EnumPrefix) -> bool:
    """a ⊴ b: structurally identical, or a ◂ b"""
    if a is b:
        ctx.index_of(a)
        return True
    return order_lt(a, b, ctx)


_prefix_cache: Dict[Tuple[int, int], EnumPrefix] = {}


def cached_prefix(count: int, max_bits: Optional[int] = None) -> EnumPrefix:
    """Shared prefix for fragments; enumeration is deterministic so results are reused"""
    key = (count, max_bits if max_bits is not None else get_config().enum_max_bits)
    prefix = _prefix_cache.get(key)
    if prefix is None:
        prefix = enumerate_cognomina(count, key[1])
        _prefix_cache[key] = prefix
    return prefix
