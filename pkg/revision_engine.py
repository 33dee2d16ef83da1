"""
Fragment-relative revision semantics.

A fragment fixes a finite universe of terms that the quantifiers range over.
The engine keeps one bit per lookback atom (a ∈ {u|A} pairs and 𝕋-flags),
revises them stage by stage, takes liminf at block limits and stops at the
first block whose opening state has been seen before. Every result is true
of the fragment only; the banner on each report says so.
"""
import operator
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property, reduce
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import structlog

import goedel
import syntax
from config import get_config
from enumeration import EnumPrefix, cached_prefix
from errors import BudgetExceeded, EuroDisabled, LibraError, NotConverged, NotInCategory, UnresolvedTerm, Untracked
from syntax import Expression, Kind

logger = structlog.get_logger(__name__)

STRUCTURAL = 'structural'
LEIBNIZ = 'leibniz'
IDENTITY_MODES = (STRUCTURAL, LEIBNIZ)


# --- fragment -----------------------------------------------------------------

@dataclass(frozen=True)
class Budget:
    max_steps_per_block: int
    max_blocks: int

    @classmethod
    def from_config(cls) -> 'Budget':
        settings = get_config()
        return cls(settings.budget_max_steps_per_block, settings.budget_max_blocks)

    def __post_init__(self):
        if self.max_steps_per_block < 1 or self.max_blocks < 1:
            raise ValueError("budgets must be at least 1")

    def to_dict(self) -> Dict[str, int]:
        return {'max_steps_per_block': self.max_steps_per_block, 'max_blocks': self.max_blocks}


@dataclass(frozen=True)
class RegistryEntry:
    """A term registered as the code of a sentence (read by u ∈ T)"""

    term: Expression
    formula: Expression


def registry_entry(formula: Expression, term: Optional[Expression] = None) -> RegistryEntry:
    """Entry for a sentence; the term defaults to its pronomen code ⌜A⌝"""
    if term is None:
        term = goedel.code_of(formula, goedel.PRESENTABLE).node
    return RegistryEntry(term=term, formula=formula)


def close_universe(terms: Iterable[Expression]) -> Tuple[Expression, ...]:
    """Adds the immediate subterms of every juncture, keeping first-seen order"""
    seen: Dict[Expression, None] = {}
    stack = list(terms)[::-1]
    while stack:
        term = stack.pop()
        if not term.is_term:
            raise NotInCategory("universe members must be terms")
        if term in seen:
            continue
        seen[term] = None
        if term.kind is Kind.JOINT_TERM:
            stack.extend(reversed(term.children))
    return tuple(seen)


def close_tracked(formulas: Iterable[Expression]) -> Tuple[Expression, ...]:
    """Every tracked formula together with its negjunction"""
    seen: Dict[Expression, None] = {}
    for formula in formulas:
        if not formula.is_formula:
            raise NotInCategory("tracked entries must be formulas")
        seen.setdefault(formula, None)
        seen.setdefault(syntax.neg(formula), None)
    return tuple(seen)


@dataclass(frozen=True, eq=False)
class Fragment:
    """
    The finite stand-in for the term space.

    ``universe`` is closed under juncture parts, ``tracked`` under negjunction.
    Registry terms are only quantified over when they are also universe members.
    """

    universe: Tuple[Expression, ...]
    tracked: Tuple[Expression, ...] = ()
    registry: Tuple[RegistryEntry, ...] = ()
    enum_prefix: EnumPrefix = field(default_factory=EnumPrefix)
    euro_enabled: bool = False
    identity_mode: str = STRUCTURAL
    budget: Budget = field(default_factory=Budget.from_config)
    names: Mapping[str, Expression] = field(default_factory=dict)
    description: str = ''

    @classmethod
    def build(cls, terms: Iterable[Expression], formulas: Iterable[Expression] = (),
              registry: Iterable[Union[RegistryEntry, Expression, Tuple[Optional[Expression], Expression]]] = (),
              enum_prefix_size: int = 0, euro_enabled: bool = False, identity_mode: str = STRUCTURAL,
              budget: Optional[Budget] = None, names: Optional[Mapping[str, Expression]] = None,
              description: str = '') -> 'Fragment':
        if identity_mode not in IDENTITY_MODES:
            raise ValueError(f"identity_mode must be one of {IDENTITY_MODES}")
        entries = []
        for item in registry:
            if isinstance(item, RegistryEntry):
                entries.append(item)
            elif isinstance(item, Expression):
                entries.append(registry_entry(item))
            else:
                term, formula = item
                entries.append(registry_entry(formula, term))
        prefix = cached_prefix(enum_prefix_size) if enum_prefix_size > 0 else EnumPrefix()
        fragment = cls(
            universe=close_universe(terms),
            tracked=close_tracked(formulas),
            registry=tuple(entries),
            enum_prefix=prefix,
            euro_enabled=euro_enabled,
            identity_mode=identity_mode,
            budget=budget or Budget.from_config(),
            names=dict(names or {}),
            description=description,
        )
        fragment.validate()
        return fragment

    def validate(self) -> None:
        """
        Raises:
            UnresolvedTerm: a noema in the fragment has no alias in the prefix
            LibraError: the universe is empty
        """
        if not self.universe:
            raise LibraError("a fragment needs at least one universe term")
        size = len(self.enum_prefix)
        for e in self.universe + self.tracked:
            missing = sorted(n for n in e.noemata if n >= size)
            if missing:
                raise UnresolvedTerm("noemata without an enumerated alias",
                                     noemata=str(missing), prefix=size)

    def with_tracked(self, extra: Iterable[Expression]) -> 'Fragment':
        return replace(self, tracked=close_tracked(self.tracked + tuple(extra)))

    def with_budget(self, budget: Budget) -> 'Fragment':
        return replace(self, budget=budget)

    @property
    def pronomina(self) -> Tuple[Expression, ...]:
        return tuple(term for term in self.universe if syntax.is_pronomen(term))

    @property
    def abstractions(self) -> Tuple[Expression, ...]:
        return tuple(term for term in self.universe if term.is_abstraction)

    def euro_pairs(self) -> Tuple[Expression, ...]:
        """
        ⟨⌜n⌝, e(n)⟩ for every enumerated n

        Raises:
            EuroDisabled: the fragment does not declare € pairs
        """
        if not self.euro_enabled:
            raise EuroDisabled("€ is disabled for this fragment")
        return tuple(syntax.pair(goedel.PRESENTABLE.numeral(n), self.enum_prefix.alias(n))
                     for n in range(len(self.enum_prefix)))

    @property
    def banner(self) -> str:
        return (f"fragment-relative: quantifiers range over {len(self.universe)} universe terms; "
                f"no claim about the full term space")

    @cached_property
    def engine(self) -> 'RevisionEngine':
        return RevisionEngine(self)


# --- stages -------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class StageIndex:
    """The ordinal ω·block + offset"""

    block: int
    offset: int = 0

    def __str__(self) -> str:
        if self.block == 0:
            return str(self.offset)
        head = 'ω' if self.block == 1 else f'ω·{self.block}'
        return head if self.offset == 0 else f'{head}+{self.offset}'

    def to_dict(self) -> Dict[str, object]:
        return {'block': self.block, 'offset': self.offset, 'ordinal': str(self)}


@dataclass(frozen=True)
class StageState:
    """One valuation of the lookback atoms, bit i for key i"""

    bits: int

    def holds(self, position: int) -> bool:
        return bool(self.bits >> position & 1)


@dataclass(frozen=True)
class MemberKey:
    """a ∈ ĉ for a non-vacuous abstraction ĉ"""

    element: Expression
    abstraction: Expression

    @property
    def body(self) -> Expression:
        return syntax.substitute(self.element, self.abstraction.binder, self.abstraction.body)


@dataclass(frozen=True)
class FlagKey:
    """𝕋A, and every vacuous {y|A}"""

    formula: Expression

    @property
    def body(self) -> Expression:
        return self.formula


Key = Union[MemberKey, FlagKey]


@dataclass(frozen=True)
class Block:
    """One ω-block: the states from its opening until the first repeat"""

    index: int
    states: Tuple[int, ...]
    cycle_start: int

    @property
    def opening(self) -> int:
        return self.states[0]

    @property
    def prefix(self) -> Tuple[int, ...]:
        return self.states[:self.cycle_start]

    @property
    def cycle(self) -> Tuple[int, ...]:
        return self.states[self.cycle_start:]

    def to_dict(self) -> Dict[str, int]:
        return {'block': self.index, 'prefix_length': self.cycle_start,
                'cycle_length': len(self.states) - self.cycle_start}


class Status(Enum):
    MAXIM = 'MaximThesis'
    MINOR = 'MinorThesis'
    NON_THESIS = 'NonThesis'


@dataclass(frozen=True)
class Valency:
    """Stage-truth words per block; the block pattern repeats from ``regime_start``"""

    words: Tuple[Tuple[str, str], ...]
    regime_start: Optional[int]

    @property
    def bits(self) -> str:
        return ''.join(prefix + cycle for prefix, cycle in self.words)

    @property
    def regime_bits(self) -> str:
        start = self.regime_start or 0
        return ''.join(prefix + cycle for prefix, cycle in self.words[start:])

    def _map(self, other: Optional['Valency'], op) -> 'Valency':
        if other is None:
            words = tuple((''.join(op(c) for c in p), ''.join(op(c) for c in q)) for p, q in self.words)
        else:
            words = tuple((''.join(op(a, b) for a, b in zip(p1, p2)), ''.join(op(a, b) for a, b in zip(q1, q2)))
                          for (p1, q1), (p2, q2) in zip(self.words, other.words))
        return Valency(words, self.regime_start)

    def complement(self) -> 'Valency':
        return self._map(None, lambda c: '0' if c == '1' else '1')

    def meet(self, other: 'Valency') -> 'Valency':
        return self._map(other, lambda a, b: '1' if a == b == '1' else '0')

    def join(self, other: 'Valency') -> 'Valency':
        return self._map(other, lambda a, b: '1' if '1' in (a, b) else '0')

    def to_dict(self) -> Dict[str, object]:
        return {'blocks': [{'prefix': p, 'cycle': q} for p, q in self.words],
                'regime_start': self.regime_start}


@dataclass(frozen=True)
class Classification:
    status: Status
    valor: StageIndex

    @property
    def thesis(self) -> bool:
        return self.status is not Status.NON_THESIS

    @property
    def veridic(self) -> bool:
        return self.status is Status.MAXIM

    @property
    def pseudic(self) -> bool:
        return self.status is Status.NON_THESIS

    @property
    def paradoxical(self) -> bool:
        return self.status is Status.MINOR

    def to_dict(self) -> Dict[str, object]:
        return {'status': self.status.value, 'thesis': self.thesis, 'veridic': self.veridic,
                'pseudic': self.pseudic, 'paradoxical': self.paradoxical, 'valor': str(self.valor)}


# --- engine -------------------------------------------------------------------

class RevisionEngine:
    """Lookback-atom discovery and same-stage evaluation for one fragment"""

    def __init__(self, fragment: Fragment):
        self.fragment = fragment
        self._lock = threading.Lock()
        self._instances: Dict[Tuple[Expression, int, Expression], Expression] = {}
        self._resolved: Dict[Expression, Expression] = {}
        self._euro_warned = False
        self.universe = fragment.universe
        self.pronomina = fragment.pronomina
        self.registry = tuple(RegistryEntry(self.resolve(entry.term), entry.formula)
                              for entry in fragment.registry)
        self.pairs = tuple(self.resolve(p) for p in fragment.euro_pairs()) if fragment.euro_enabled else ()
        self.keys: List[Key] = []
        self.bodies: List[Expression] = []
        self.positions: Dict[Key, int] = {}
        self._discover()

    # resolution and instances

    def resolve(self, term: Expression) -> Expression:
        """Puts e(n) for every free v_n"""
        if not term.noemata:
            return term
        cached = self._resolved.get(term)
        if cached is not None:
            return cached
        prefix = self.fragment.enum_prefix
        result = term
        for n in sorted(term.noemata):
            if n >= len(prefix):
                raise UnresolvedTerm(f"v{n} has no enumerated alias", noema=n, prefix=len(prefix))
            result = syntax.substitute(prefix.alias(n), n, result)
        with self._lock:
            self._resolved[term] = result
        return result

    def instance(self, a: Expression, binder: int, body: Expression) -> Optional[Expression]:
        """A(a/u), or None when a is not substitutable for u"""
        key = (a, binder, body)
        cached = self._instances.get(key)
        if cached is not None:
            return cached
        if a.noemata and not syntax.substitutable(a, binder, body):
            return None
        result = syntax.substitute(a, binder, body)
        with self._lock:
            self._instances[key] = result
        return result

    @staticmethod
    def is_vacuous(abstraction: Expression) -> bool:
        return abstraction.binder not in abstraction.body.noemata

    def membership_key(self, element: Expression, abstraction: Expression) -> Key:
        if self.is_vacuous(abstraction):
            return FlagKey(abstraction.body)
        return MemberKey(element, abstraction)

    # discovery

    def _atom_requirements(self, element: Expression, container: Expression) -> Tuple[List[Key], List[Expression]]:
        """Keys read directly and further formulas evaluated for element ∈ container"""
        keys: List[Key] = []
        formulas: List[Expression] = []
        kind = container.kind
        if kind is Kind.ALETHIZOR:
            for entry in self.registry:
                if self.fragment.identity_mode == LEIBNIZ:
                    formulas.extend(self._identity_atoms(element, entry.term))
                    keys.append(FlagKey(entry.formula))
                elif entry.term is element:
                    keys.append(FlagKey(entry.formula))
        elif kind is Kind.ENUMERATOR and self.fragment.identity_mode == LEIBNIZ:
            for p in self.pairs:
                formulas.extend(self._identity_atoms(element, p))
        elif kind is Kind.JOINT_TERM:
            formulas.append(syntax.member(element, container.children[0]))
            formulas.append(syntax.member(element, container.children[1]))
        elif container.is_abstraction:
            if not element.noemata or syntax.substitutable(element, container.binder, container.body):
                keys.append(self.membership_key(element, container))
        return keys, formulas

    def _identity_atoms(self, a: Expression, b: Expression) -> List[Expression]:
        atoms = []
        for w in self.pronomina:
            atoms.append(syntax.member(a, w))
            atoms.append(syntax.member(b, w))
        return atoms

    def _discover(self) -> None:
        limit = get_config().max_lookback_atoms
        seen: Dict[Expression, None] = {}
        pending: List[Expression] = []

        def require_key(key: Key) -> None:
            if key in self.positions:
                return
            if len(self.keys) >= limit:
                raise BudgetExceeded("lookback atoms exceed max_lookback_atoms",
                                     required=len(self.keys) + 1, budget=limit)
            self.positions[key] = len(self.keys)
            self.keys.append(key)
            self.bodies.append(key.body)
            pending.append(self.bodies[-1])

        def require(formula: Expression) -> None:
            if formula not in seen:
                seen[formula] = None
                pending.append(formula)

        for a in self.universe:
            resolved = self.resolve(a)
            for c in self.fragment.abstractions:
                require(syntax.member(resolved, self.resolve(c)))
        for formula in self.fragment.tracked:
            require_key(FlagKey(formula))
            require(formula)
        for entry in self.registry:
            require_key(FlagKey(entry.formula))

        while pending:
            formula = pending.pop()
            kind = formula.kind
            if kind is Kind.JOINT_FORMULA:
                require(formula.children[0])
                require(formula.children[1])
            elif kind is Kind.UNIVERSAL:
                if formula.binder not in formula.body.noemata:
                    require(formula.body)
                    continue
                for a in self.universe:
                    inst = self.instance(a, formula.binder, formula.body)
                    if inst is not None:
                        require(inst)
            else:
                element = self.resolve(formula.element)
                container = self.resolve(formula.container)
                keys, formulas = self._atom_requirements(element, container)
                for key in keys:
                    require_key(key)
                for f in formulas:
                    require(f)
        logger.info("lookback atoms discovered", keys=len(self.keys), formulas=len(seen))

    # evaluation

    def _lookup(self, key: Key, bits: int) -> bool:
        position = self.positions.get(key)
        if position is None:
            raise Untracked("a lookback atom needed here is not tracked by the fragment",
                            atom=syntax.sketch(key.body))
        return bool(bits >> position & 1)

    def evaluate(self, A: Expression, bits: int, memo: Optional[Dict[Expression, bool]] = None) -> bool:
        """Same-stage truth of A at the state ``bits``"""
        if memo is None:
            memo = {}
        return self._eval(A, bits, memo)

    def _eval(self, A: Expression, bits: int, memo: Dict[Expression, bool]) -> bool:
        cached = memo.get(A)
        if cached is not None:
            return cached
        kind = A.kind
        if kind is Kind.JOINT_FORMULA:
            result = not self._eval(A.children[0], bits, memo) and not self._eval(A.children[1], bits, memo)
        elif kind is Kind.UNIVERSAL:
            if A.binder not in A.body.noemata:
                result = self._eval(A.body, bits, memo)
            else:
                result = True
                for a in self.universe:
                    inst = self.instance(a, A.binder, A.body)
                    if inst is not None and not self._eval(inst, bits, memo):
                        result = False
                        break
        elif kind is Kind.ATOM:
            result = self._member(self.resolve(A.element), self.resolve(A.container), bits, memo)
        else:
            raise NotInCategory("only formulas are evaluated")
        memo[A] = result
        return result

    def _member(self, element: Expression, container: Expression, bits: int, memo: Dict[Expression, bool]) -> bool:
        kind = container.kind
        if kind is Kind.JOINT_TERM:
            return (not self._eval(syntax.member(element, container.children[0]), bits, memo)
                    and not self._eval(syntax.member(element, container.children[1]), bits, memo))
        if container.is_abstraction:
            if element.noemata and not syntax.substitutable(element, container.binder, container.body):
                return False
            return self._lookup(self.membership_key(element, container), bits)
        if kind is Kind.ALETHIZOR:
            for entry in self.registry:
                if self.fragment.identity_mode == LEIBNIZ:
                    if self._same(element, entry.term, bits, memo) and self._lookup(FlagKey(entry.formula), bits):
                        return True
                elif entry.term is element and self._lookup(FlagKey(entry.formula), bits):
                    return True
            return False
        if kind is Kind.ENUMERATOR:
            if not self.fragment.euro_enabled:
                self._warn_euro()
                return False
            if self.fragment.identity_mode == LEIBNIZ:
                return any(self._same(element, p, bits, memo) for p in self.pairs)
            return element in self.pairs
        raise UnresolvedTerm("a noema survived resolution", term=syntax.sketch(container))

    def _same(self, a: Expression, b: Expression, bits: int, memo: Dict[Expression, bool]) -> bool:
        """a = b with u ranging over the universe's pronomina"""
        if a is b:
            return True
        for w in self.pronomina:
            if self._eval(syntax.member(a, w), bits, memo) and not self._eval(syntax.member(b, w), bits, memo):
                return False
        return True

    def _warn_euro(self) -> None:
        if not self._euro_warned:
            self._euro_warned = True
            logger.warning("€ atoms read as false: the fragment declares no pairs")

    # revision

    def step(self, bits: int, threads: int = 1) -> int:
        """Each key's next bit is its body at the current state"""
        if threads <= 1 or len(self.keys) < 2 * threads:
            return self._step_range(bits, 0, len(self.keys), {})
        chunk = -(-len(self.keys) // threads)
        # one memo per worker; chunks are merged in key order
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(self._step_range, bits, start, min(start + chunk, len(self.keys)), {})
                       for start in range(0, len(self.keys), chunk)]
            return reduce(operator.or_, (f.result() for f in futures), 0)

    def _step_range(self, bits: int, start: int, stop: int, memo: Dict[Expression, bool]) -> int:
        out = 0
        for position in range(start, stop):
            if self._eval(self.bodies[position], bits, memo):
                out |= 1 << position
        return out

    @staticmethod
    def limit(cycle: Sequence[int]) -> int:
        """True at the limit iff true at every state of the eventual cycle"""
        return reduce(operator.and_, cycle)

    def run(self, budget: Optional[Budget] = None, threads: Optional[int] = None) -> 'StageTrace':
        """
        Iterates blocks until an opening state repeats

        Raises:
            NotConverged: a budget ran out; carries the partial trace
        """
        budget = budget or self.fragment.budget
        threads = threads or get_config().threads
        blocks: List[Block] = []
        openings: List[int] = [0]
        while True:
            index = len(blocks)
            states = [openings[-1]]
            seen = {states[0]: 0}
            while True:
                nxt = self.step(states[-1], threads)
                if nxt in seen:
                    break
                if len(states) >= budget.max_steps_per_block:
                    blocks.append(Block(index, tuple(states), len(states)))
                    partial = StageTrace(self, tuple(blocks), None)
                    raise NotConverged(f"block {index} did not cycle within {budget.max_steps_per_block} steps",
                                       trace=partial)
                seen[nxt] = len(states)
                states.append(nxt)
            block = Block(index, tuple(states), seen[nxt])
            blocks.append(block)
            opening = self.limit(block.cycle)
            if opening in openings:
                trace = StageTrace(self, tuple(blocks), openings.index(opening))
                logger.info("fragment closed", closure=str(trace.closure), regime_start=trace.regime_start,
                            keys=len(self.keys))
                return trace
            if len(blocks) >= budget.max_blocks:
                raise NotConverged(f"no block opening repeated within {budget.max_blocks} blocks",
                                   trace=StageTrace(self, tuple(blocks), None))
            openings.append(opening)


# --- traces -------------------------------------------------------------------

class StageTrace:
    """The recorded stages of one run and everything read off them"""

    def __init__(self, engine: RevisionEngine, blocks: Tuple[Block, ...], regime_start: Optional[int]):
        self.engine = engine
        self.fragment = engine.fragment
        self.blocks = blocks
        self.regime_start = regime_start
        self._memos: Dict[int, Dict[Expression, bool]] = {}
        self._valencies: Dict[Expression, Valency] = {}
        self._lock = threading.Lock()

    @property
    def converged(self) -> bool:
        return self.regime_start is not None

    @property
    def closure(self) -> Optional[StageIndex]:
        if not self.converged:
            return None
        return StageIndex(len(self.blocks), 0)

    def states(self) -> Iterator[Tuple[StageIndex, StageState]]:
        for block in self.blocks:
            for offset, bits in enumerate(block.states):
                yield StageIndex(block.index, offset), StageState(bits)

    def state_at(self, index: StageIndex) -> StageState:
        """Any stage below the closure, read off the eventually periodic block"""
        block = self.blocks[index.block]
        offset = index.offset
        if offset >= len(block.states):
            period = len(block.cycle)
            offset = block.cycle_start + (offset - block.cycle_start) % period
        return StageState(block.states[offset])

    def _require_converged(self) -> None:
        if not self.converged:
            raise NotConverged("the trace has no closure")

    def holds(self, A: Expression, bits: int) -> bool:
        with self._lock:
            memo = self._memos.setdefault(bits, {})
        return self.engine.evaluate(A, bits, memo)

    def truths(self, A: Expression) -> List[Tuple[StageIndex, bool]]:
        """
        A at every recorded stage, tracked or not

        Raises:
            Untracked: A needs a lookback atom the fragment does not carry
        """
        return [(index, self.holds(A, state.bits)) for index, state in self.states()]

    def valency(self, A: Expression) -> Valency:
        cached = self._valencies.get(A)
        if cached is not None:
            return cached
        words = []
        for block in self.blocks:
            word = ''.join('1' if self.holds(A, bits) else '0' for bits in block.states)
            words.append((word[:block.cycle_start], word[block.cycle_start:]))
        result = Valency(tuple(words), self.regime_start)
        self._valencies[A] = result
        return result

    def status(self, A: Expression) -> str:
        """IN, OUT or UNSTAB over the repeating regime"""
        self._require_converged()
        bits = self.valency(A).regime_bits
        if '0' not in bits:
            return 'IN'
        if '1' not in bits:
            return 'OUT'
        return 'UNSTAB'

    def classify(self, A: Expression) -> Classification:
        status = {'IN': Status.MAXIM, 'OUT': Status.NON_THESIS, 'UNSTAB': Status.MINOR}[self.status(A)]
        return Classification(status=status, valor=self.valor(A))

    def valor(self, A: Expression) -> StageIndex:
        """The closure for theses; otherwise the least upper bound of the true stages"""
        self._require_converged()
        valency = self.valency(A)
        if '1' in valency.regime_bits:
            return self.closure
        best = StageIndex(0, 0)
        for j, (prefix, cycle) in enumerate(valency.words):
            if '1' in cycle:
                best = StageIndex(j + 1, 0)
            elif '1' in prefix:
                best = StageIndex(j, prefix.rindex('1'))
        return best

    def replay(self) -> bool:
        """Re-runs the fragment from scratch and compares every state"""
        fresh = RevisionEngine(self.fragment)
        if fresh.keys != self.engine.keys:
            return False
        try:
            again = fresh.run()
        except NotConverged as exc:
            again = exc.trace
        return again.blocks == self.blocks and again.regime_start == self.regime_start

    def to_dict(self, sentences: Optional[Iterable[Expression]] = None) -> Dict[str, object]:
        from presentable import render
        names = dict(self.fragment.names)
        payload: Dict[str, object] = {
            'banner': self.fragment.banner,
            'description': self.fragment.description,
            'keys': len(self.engine.keys),
            'blocks': [block.to_dict() for block in self.blocks],
            'converged': self.converged,
            'regime_start': self.regime_start,
            'closure': self.closure.to_dict() if self.closure else None,
        }
        report = {}
        for A in (self.fragment.tracked if sentences is None else sentences):
            entry: Dict[str, object] = {'valency': self.valency(A).to_dict()}
            if self.converged:
                entry.update(self.classify(A).to_dict())
            report[render(A, names)] = entry
        payload['sentences'] = report
        return payload


# --- module-level operations --------------------------------------------------

def evaluate(A: Expression, s: StageState, f: Fragment) -> bool:
    return f.engine.evaluate(A, s.bits)


def step(s: StageState, f: Fragment) -> StageState:
    return StageState(f.engine.step(s.bits))


def limit(history: Sequence[StageState]) -> StageState:
    return StageState(RevisionEngine.limit([s.bits for s in history]))


def run(f: Fragment, budget: Optional[Budget] = None, threads: Optional[int] = None) -> StageTrace:
    return f.engine.run(budget, threads)


def classify(A: Expression, t: StageTrace) -> Classification:
    return t.classify(A)


def valency(A: Expression, t: StageTrace) -> Valency:
    return t.valency(A)


def valor(A: Expression, t: StageTrace) -> StageIndex:
    return t.valor(A)


def is_thesis(A: Expression, t: StageTrace) -> bool:
    return t.status(A) != 'OUT'


def is_maxim(A: Expression, t: StageTrace) -> bool:
    return t.status(A) == 'IN'


def is_minor(A: Expression, t: StageTrace) -> bool:
    return t.status(A) == 'UNSTAB'


@dataclass(frozen=True)
class Relations:
    parivalent: bool
    altervalent: bool
    contravalent: bool
    ambovalence: Valency
    velvalence: Valency
    subvalence: Valency
    homovalence: Valency
    incompatible: bool
    paridictive: bool
    alterdictive: bool
    contradictive: bool
    complementary: bool
    connected: bool

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            payload[name] = value.bits if isinstance(value, Valency) else value
        return payload


def relations(A: Expression, B: Expression, t: StageTrace) -> Relations:
    """The valency algebra of a pair of sentences"""
    va, vb = t.valency(A), t.valency(B)
    not_a, not_b = va.complement(), vb.complement()
    ambo = va.meet(vb)
    parivalent = va.bits == vb.bits
    contravalent = va.bits == not_b.bits
    paridictive = t.valor(A) == t.valor(B)
    both_theses = '1' in va.regime_bits and '1' in vb.regime_bits
    return Relations(
        parivalent=parivalent,
        altervalent=not parivalent,
        contravalent=contravalent,
        ambovalence=ambo,
        velvalence=va.join(vb),
        subvalence=not_a.join(vb),
        homovalence=ambo.join(not_a.meet(not_b)),
        incompatible='1' not in ambo.bits,
        paridictive=paridictive,
        alterdictive=not paridictive,
        contradictive=contravalent and not paridictive,
        complementary=contravalent and paridictive,
        connected=not both_theses or '1' in ambo.regime_bits,
    )


def is_stable(A: Expression, t: StageTrace) -> bool:
    return t.status(A) in ('IN', 'OUT')


def kind(a: Expression, t: StageTrace) -> bool:
    """
    Every membership question x ∈ a over the universe is stable

    Raises:
        UnresolvedTerm: a is not a universe term
    """
    if a not in t.fragment.universe:
        raise UnresolvedTerm("kind is decided for universe terms only", term=syntax.sketch(a))
    return all(is_stable(syntax.member(x, a), t) for x in t.fragment.universe)
