"""
Audits of a converged trace: posits, regulations and the semantic laws.

Every instance is a sentence built from the fragment's base sentences and
abstractions. ``prepare`` adds all of them to the tracked set before the run,
because their 𝕋-flags have to exist in the stage state.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import structlog

import syntax
from config import get_config
from errors import EuroDisabled, NotConverged, Untracked
from revision_engine import LEIBNIZ, Fragment, StageTrace, relations
from syntax import Expression, Kind, conj, disj, exists, iff, implies, member, neg, noema, truth, universal

logger = structlog.get_logger(__name__)

MAXIM = 'maxim'
THESIS = 'thesis'
MINOR = 'minor'


# --- report -------------------------------------------------------------------

@dataclass
class Witness:
    """A sentence whose verdict went against a check; replay re-runs the fragment"""

    check: str
    label: str
    sentence: Expression
    status: str
    expected: str

    def replay(self, fragment: Fragment) -> bool:
        """True when a fresh run reproduces the recorded status"""
        from revision_engine import RevisionEngine
        trace = RevisionEngine(fragment).run()
        return trace.status(self.sentence) == self.status

    def to_dict(self, names: Optional[Dict[str, Expression]] = None) -> Dict[str, object]:
        from presentable import render
        return {'check': self.check, 'label': self.label, 'sentence': render(self.sentence, names),
                'status': self.status, 'expected': self.expected}


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    passes: int = 0
    failures: List[Witness] = field(default_factory=list)
    deviations: List[Witness] = field(default_factory=list)
    skips: List[str] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        if self.failures:
            return 'fail'
        if self.instances == 0 and self.skips:
            return 'skip'
        return 'pass'

    def record(self, ok: bool, witness: Optional[Witness] = None) -> None:
        self.instances += 1
        if ok:
            self.passes += 1
        elif witness is not None:
            self.failures.append(witness)

    def skip(self, reason: str) -> None:
        self.skips.append(reason)

    def to_dict(self, names: Optional[Dict[str, Expression]] = None) -> Dict[str, object]:
        return {
            'name': self.name,
            'outcome': self.outcome,
            'instances': self.instances,
            'passes': self.passes,
            'failures': [w.to_dict(names) for w in self.failures],
            'deviations': [w.to_dict(names) for w in self.deviations],
            'skips': list(self.skips),
        }


@dataclass
class AuditReport:
    banner: str
    checks: List[CheckResult] = field(default_factory=list)
    mp_failure: Optional[Dict[str, object]] = None

    def extend(self, results: Iterable[CheckResult]) -> 'AuditReport':
        self.checks.extend(results)
        return self

    @property
    def outcomes(self) -> Dict[str, str]:
        return {check.name: check.outcome for check in self.checks}

    @property
    def ok(self) -> bool:
        return all(check.outcome != 'fail' for check in self.checks)

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self, names: Optional[Dict[str, Expression]] = None) -> Dict[str, object]:
        return {
            'banner': self.banner,
            'ok': self.ok,
            'checks': [check.to_dict(names) for check in self.checks],
            'mp_failure': self.mp_failure,
        }

    def to_text(self) -> str:
        width = max([len(check.name) for check in self.checks] + [5])
        lines = [self.banner, '', f"{'check':<{width}}  outcome  instances  passes  failures  skips"]
        for check in self.checks:
            lines.append(f"{check.name:<{width}}  {check.outcome:<7}  {check.instances:>9}  {check.passes:>6}  "
                         f"{len(check.failures):>8}  {len(check.skips):>5}")
        if self.mp_failure:
            lines.append('')
            lines.append(f"MP failure: {self.mp_failure['A']}  |  {self.mp_failure['A->B']}  |  {self.mp_failure['B']}")
        return '\n'.join(lines)


# --- instance plan ------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    label: str
    formula: Expression
    expected: str


def _base_limit(limit: Optional[int]) -> Optional[int]:
    return get_config().audit_max_base if limit is None else limit


def base_sentences(fragment: Fragment, limit: Optional[int] = None) -> Tuple[Expression, ...]:
    """Tracked sentences, skipping negjunctions of ones already picked.

    Every sentence is taken unless ``limit`` (or ``LIBRA_AUDIT_MAX_BASE``) caps them.
    """
    limit = _base_limit(limit)
    picked: List[Expression] = []
    for formula in fragment.tracked:
        inner = formula.children[0] if (formula.kind is Kind.JOINT_FORMULA
                                        and formula.children[0] is formula.children[1]) else None
        if inner is not None and inner in picked:
            continue
        picked.append(formula)
    if limit is not None and len(picked) > limit:
        logger.warning("audit base truncated", kept=limit, dropped=len(picked) - limit)
        picked = picked[:limit]
    return tuple(picked)


class AuditPlan:
    """All instance sentences for one fragment, built the same way every time"""

    def __init__(self, fragment: Fragment, limit: Optional[int] = None):
        self.fragment = fragment
        self.base = base_sentences(fragment, limit)
        self.x = syntax.fresh_noema(*fragment.universe, *self.base, *(entry.formula for entry in fragment.registry))
        limit = _base_limit(limit)
        # numerals and the empty sort are abstractions too
        closed = [c for c in fragment.abstractions if not c.noemata]
        self.abstractions = tuple(closed)
        if limit is not None and len(closed) > limit:
            logger.warning("audit open base truncated", kept=limit, dropped=len(closed) - limit)
            closed = closed[:limit]
        self.open_base = tuple(member(noema(self.x), c) for c in closed)

    @property
    def sentences(self) -> Tuple[Expression, ...]:
        out: Dict[Expression, None] = {}
        for A in self.base:
            out.setdefault(A, None)
            out.setdefault(neg(A), None)
        return tuple(out)

    @classmethod
    def for_fragment(cls, fragment: Fragment) -> 'AuditPlan':
        return cls(fragment)

    # posits

    def posits(self) -> List[Instance]:
        out: List[Instance] = []
        base, x = self.base, self.x
        T = truth
        for A, B in product(base, repeat=2):
            out.append(Instance('£i', implies(A, implies(B, A)), MAXIM))
            out.append(Instance('£iii', implies(implies(neg(B), neg(A)), implies(A, B)), MAXIM))
            out.append(Instance('£1', implies(T(implies(A, B)), implies(T(A), T(B))), MAXIM))
            out.append(Instance('£3', disj(T(B), disj(T(neg(B)), implies(T(neg(T(neg(A)))), T(A)))), MAXIM))
            out.append(Instance('£4', disj(T(B), disj(T(neg(B)), implies(T(A), T(T(A))))), MAXIM))
        for A, B, C in product(base, repeat=3):
            out.append(Instance('£ii', implies(implies(A, implies(B, C)),
                                               implies(implies(A, B), implies(A, C))), MAXIM))
        for A in base:
            out.append(Instance('£iv', implies(A, universal(syntax.fresh_noema(A), A)), MAXIM))
            out.append(Instance('£2', implies(T(A), neg(T(neg(A)))), MAXIM))
            out.append(Instance('£5', implies(T(implies(T(A), A)), disj(T(A), T(neg(A)))), MAXIM))
            out.append(Instance('£8', implies(T(A), A), THESIS))
            out.append(Instance('£9', implies(A, T(A)), THESIS))
        for A in self.open_base:
            out.append(Instance('£6', implies(exists(x, T(A)), T(exists(x, A))), MAXIM))
            out.append(Instance('£7', implies(T(universal(x, A)), universal(x, T(A))), MAXIM))
            out.append(Instance('£10', implies(universal(x, T(A)), T(universal(x, A))), THESIS))
            out.append(Instance('£11', implies(T(exists(x, A)), exists(x, T(A))), THESIS))
            for a in self.fragment.universe:
                if syntax.substitutable(a, x, A):
                    out.append(Instance('£vi', implies(universal(x, A), syntax.substitute(a, x, A)), MAXIM))
        for A, B in product(self.open_base, repeat=2):
            out.append(Instance('£v', implies(universal(x, implies(A, B)),
                                              implies(universal(x, A), universal(x, B))), MAXIM))
        return out

    def comprehension(self) -> List[Instance]:
        """∀x(x∈{y|A} ↔ 𝕋A(x/y)) for each closed universe abstraction"""
        x = self.x
        out = []
        for c in self.abstractions:
            body = syntax.substitute(noema(x), c.binder, c.body)
            out.append(Instance('CA', universal(x, iff(member(noema(x), c), truth(body))), MAXIM))
        return out

    def truth_prescription(self) -> List[Instance]:
        """𝕋A ↔ T⌜A⌝ for every registered sentence"""
        alethizor = syntax.alethizor()
        return [Instance('𝔗', iff(truth(entry.formula), member(entry.term, alethizor)), MAXIM)
                for entry in self.fragment.registry if not entry.formula.noemata]

    def set_prescripts(self) -> List[Instance]:
        x, y, z = self.x, self.x + 1, self.x + 2
        vx, vy, vz = noema(x), noema(y), noema(z)

        def all3(body: Expression) -> Expression:
            return universal(x, universal(y, universal(z, body)))

        not_in_y, not_in_z = neg(member(vx, vy)), neg(member(vx, vz))
        return [
            Instance('↓', all3(iff(member(vx, syntax.joint_term(vy, vz)), conj(not_in_y, not_in_z))), MAXIM),
            Instance('complement', universal(x, universal(y, iff(member(vx, syntax.complement(vy)), not_in_y))),
                     MAXIM),
            Instance('∖', all3(iff(member(vx, syntax.difference(vy, vz)), conj(member(vx, vy), not_in_z))), MAXIM),
            Instance('∪', all3(iff(member(vx, syntax.union(vy, vz)), disj(member(vx, vy), member(vx, vz)))), MAXIM),
            Instance('∩', all3(iff(member(vx, syntax.intersection(vy, vz)),
                                   conj(member(vx, vy), member(vx, vz)))), MAXIM),
        ]

    def euro_prescripts(self) -> List[Instance]:
        """
        Raises:
            EuroDisabled: the fragment declares no € pairs
        """
        pairs = self.fragment.euro_pairs()
        x, y, z = self.x, self.x + 1, self.x + 2
        vx, vy, vz = noema(x), noema(y), noema(z)
        E = syntax.enumerator()
        out = [
            Instance('€2', universal(x, implies(member(vx, E),
                                                exists(y, exists(z, syntax.identity(vx, syntax.pair(vy, vz)))))),
                     MAXIM),
            Instance('€3', universal(x, universal(y, universal(z, implies(
                conj(member(syntax.pair(vx, vy), E), member(syntax.pair(vx, vz), E)),
                syntax.identity(vy, vz))))), MAXIM),
            # printed with x=y in the consequent; checked as injectivity
            Instance('€4', universal(x, universal(y, universal(z, implies(
                conj(member(syntax.pair(vx, vy), E), member(syntax.pair(vz, vy), E)),
                syntax.identity(vx, vz))))), MAXIM),
            Instance('€5', kind_formula(E, x), MAXIM),
        ]
        # ⟨⌜n⌝, v_n⟩ with v_n read as e(n)
        out.extend(Instance('P', member(p, E), MAXIM) for p in pairs)
        return out

    # everything else that needs flags

    def regulation_sentences(self) -> List[Expression]:
        out: List[Expression] = []
        x = self.x
        for A in self.base:
            out.extend([truth(A), neg(truth(neg(A)))])
        for A, B in product(self.base, repeat=2):
            out.append(implies(A, B))
            out.append(conj(neg(truth(neg(A))), neg(truth(neg(B)))))
            out.append(implies(conj(A, neg(A)), B))
        for A in self.open_base:
            out.extend([universal(x, truth(A)), truth(universal(x, A)),
                        truth(exists(x, A)), exists(x, truth(A))])
        return out

    def curry_sentences(self) -> List[Expression]:
        out = []
        for F in self.base:
            if not F.noemata:
                c = syntax.curry(F)
                out.append(member(c, c))
        return out

    def kind_sentences(self) -> List[Expression]:
        return [kind_formula(c, self.x) for c in self.abstractions]

    def identity_sentences(self) -> List[Expression]:
        if self.fragment.identity_mode != LEIBNIZ:
            return []
        empty = syntax.empty_sort()
        out = []
        for a in self.abstractions:
            y = syntax.least_absent(a.noemata)
            out.append(syntax.identity(a, syntax.abstraction(y, member(noema(y), a))))
            out.append(syntax.identity(a, empty))
        return out

    def all_instances(self) -> List[Instance]:
        out = self.posits() + self.comprehension() + self.truth_prescription() + self.set_prescripts()
        try:
            out += self.euro_prescripts()
        except EuroDisabled:
            pass
        return out

    def formulas(self) -> List[Expression]:
        out = [instance.formula for instance in self.all_instances()]
        out += self.regulation_sentences() + self.curry_sentences() + self.kind_sentences()
        out += self.identity_sentences()
        return out


def kind_formula(a: Expression, x: int) -> Expression:
    """KIND(a) ≜ ∀x(𝕋 x∈a ∨ 𝕋 x∉a)"""
    return universal(x, disj(truth(member(noema(x), a)), truth(neg(member(noema(x), a)))))


def prepare(fragment: Fragment, plan: Optional[AuditPlan] = None) -> Fragment:
    """The fragment with every audit instance tracked"""
    plan = plan or AuditPlan(fragment)
    prepared = fragment.with_tracked(plan.formulas())
    logger.info("audit instances tracked", added=len(prepared.tracked) - len(fragment.tracked))
    return prepared


# --- helpers ------------------------------------------------------------------

def _converged(t: StageTrace) -> None:
    if not t.converged:
        raise NotConverged("audits need a converged trace", trace=t)


def _meets(status: str, expected: str) -> bool:
    if expected == MAXIM:
        return status == 'IN'
    if expected == MINOR:
        return status == 'UNSTAB'
    return status != 'OUT'


def _status(t: StageTrace, A: Expression) -> Optional[str]:
    try:
        return t.status(A)
    except Untracked:
        return None


def _check_instances(name: str, t: StageTrace, instances: Sequence[Instance]) -> CheckResult:
    result = CheckResult(name)
    for instance in instances:
        status = _status(t, instance.formula)
        if status is None:
            result.skip(f"{instance.label}: instance not tracked (run prepare first)")
            continue
        result.record(_meets(status, instance.expected),
                      Witness(name, instance.label, instance.formula, status, instance.expected))
    return result


def _plan(t: StageTrace, plan: Optional[AuditPlan]) -> AuditPlan:
    return plan or AuditPlan.for_fragment(t.fragment)


# --- posits -------------------------------------------------------------------

def check_posits(t: StageTrace, plan: Optional[AuditPlan] = None) -> List[CheckResult]:
    """Maximal posits classify as maxims, minor ones as theses"""
    _converged(t)
    plan = _plan(t, plan)
    results = [
        _check_instances('posits', t, plan.posits()),
        _check_instances('alethic-comprehension', t, plan.comprehension()),
        _check_instances('truth-prescription', t, plan.truth_prescription()),
        _check_instances('set-prescripts', t, plan.set_prescripts()),
    ]
    if not plan.truth_prescription():
        results[2].skip("no registered sentences")
    euro = CheckResult('euro-prescripts')
    try:
        euro = _check_instances('euro-prescripts', t, plan.euro_prescripts())
    except EuroDisabled:
        euro.skip("€ is disabled for this fragment")
    euro.skip("€1 needs a term for ℕ")
    results.append(euro)
    bivalence = CheckResult('bivalence')
    bivalence.skip("B needs the global formula predicate")
    results.append(bivalence)
    return results


# --- regulations --------------------------------------------------------------

Rule = Tuple[str, Sequence[Tuple[str, Expression]], Tuple[str, Expression]]


def _rules(plan: AuditPlan) -> List[Rule]:
    rules: List[Rule] = []
    x = plan.x
    for A, B in product(plan.base, repeat=2):
        AB = implies(A, B)
        rules.append(('R1', [(MAXIM, A), (MAXIM, AB)], (MAXIM, B)))
        rules.append(('R2', [(MINOR, A), (MAXIM, AB)], (THESIS, B)))
        rules.append(('R3', [(MAXIM, A), (MINOR, AB)], (MINOR, B)))
        rules.append(('R13', [(MINOR, A), (MINOR, B)], (MINOR, conj(neg(truth(neg(A))), neg(truth(neg(B)))))))
    for A in plan.base:
        TA, nTn = truth(A), neg(truth(neg(A)))
        rules.append(('R4', [(MAXIM, A)], (MAXIM, TA)))
        rules.append(('R5', [(MINOR, A)], (MINOR, TA)))
        rules.append(('R6', [(MAXIM, TA)], (MAXIM, A)))
        rules.append(('R7', [(MINOR, TA)], (MINOR, A)))
        rules.append(('R8', [(MAXIM, nTn)], (MAXIM, TA)))
        rules.append(('R9', [(MINOR, nTn)], (MINOR, TA)))
    for A in plan.open_base:
        rules.append(('R10', [(MAXIM, universal(x, truth(A)))], (MAXIM, truth(universal(x, A)))))
        rules.append(('R11', [(THESIS, truth(exists(x, A)))], (THESIS, exists(x, truth(A)))))
        rules.append(('R12', [(MINOR, truth(exists(x, A)))], (MINOR, exists(x, truth(A)))))
    return rules


def check_regulations(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """R1–R13 on every instance whose premises hold"""
    _converged(t)
    plan = _plan(t, plan)
    result = CheckResult('regulations')
    for name, premises, (expected, conclusion) in _rules(plan):
        statuses = [_status(t, A) for _, A in premises]
        if None in statuses:
            result.skip(f"{name}: premise not tracked")
            continue
        if not all(_meets(status, want) for status, (want, _) in zip(statuses, premises)):
            continue
        status = _status(t, conclusion)
        if status is None:
            result.skip(f"{name}: conclusion not tracked")
            continue
        result.record(_meets(status, expected), Witness('regulations', name, conclusion, status, expected))
    return result


# --- phenomena ----------------------------------------------------------------

def find_mp_failure(t: StageTrace, plan: Optional[AuditPlan] = None) -> Optional[Dict[str, object]]:
    """Thesis A, thesis A→B and non-thesis B among the base sentences"""
    _converged(t)
    from presentable import render
    plan = _plan(t, plan)
    names = dict(t.fragment.names)
    for A, B in product(plan.base + tuple(plan.curry_sentences()), plan.base):
        AB = implies(A, B)
        statuses = [_status(t, A), _status(t, AB), _status(t, B)]
        if None in statuses:
            continue
        if statuses[0] != 'OUT' and statuses[1] != 'OUT' and statuses[2] == 'OUT':
            logger.info("modus ponens fails", A=render(A, names), B=render(B, names))
            return {'A': render(A, names), 'A->B': render(AB, names), 'B': render(B, names)}
    return None


def check_exfalso(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """(A∧¬A)→B is a maxim for every base pair"""
    _converged(t)
    plan = _plan(t, plan)
    instances = [Instance('ex falso', implies(conj(A, neg(A)), B), MAXIM) for A, B in product(plan.base, repeat=2)]
    return _check_instances('ex-falso', t, instances)


def disconnection_census(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """Disconnected theses are exactly the minor ones, over the base sentences and their negjunctions"""
    _converged(t)
    plan = _plan(t, plan)
    result = CheckResult('disconnection')
    tracked = plan.sentences
    for A in tracked:
        status = t.status(A)
        if status == 'OUT':
            continue
        disconnected = any(not relations(A, B, t).connected for B in tracked)
        ok = disconnected == (status == 'UNSTAB')
        result.record(ok, Witness('disconnection', 'disconnected' if disconnected else 'connected',
                                  A, status, 'UNSTAB' if disconnected else 'IN'))
    return result


def disconnected_sentences(t: StageTrace, plan: Optional[AuditPlan] = None) -> List[Expression]:
    tracked = _plan(t, plan).sentences
    return [A for A in tracked if t.status(A) != 'OUT'
            and any(not relations(A, B, t).connected for B in tracked)]


# --- semantic laws ------------------------------------------------------------

def check_semantic_laws(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """Progression consistency and closure, negjunction completeness, maxim duality, complement valency"""
    _converged(t)
    plan = _plan(t, plan)
    result = CheckResult('semantic-laws')
    for A in t.fragment.tracked:
        va, vn = t.valency(A), t.valency(neg(A))
        result.record(va.bits == vn.complement().bits,
                      Witness('semantic-laws', 'progression consistency', A, va.bits, 'complement of ¬A'))
        thesis_a, thesis_n = t.status(A) != 'OUT', t.status(neg(A)) != 'OUT'
        result.record(thesis_a or thesis_n,
                      Witness('semantic-laws', 'negjunction completeness', A, t.status(A), THESIS))
        result.record((t.status(A) == 'IN') == (not thesis_n),
                      Witness('semantic-laws', 'maxim duality', A, t.status(A), 'IN iff ¬A non-thesis'))
    for A, B in product(plan.base, repeat=2):
        AB = implies(A, B)
        if _status(t, AB) is None:
            continue
        va, vab, vb = t.valency(A).bits, t.valency(AB).bits, t.valency(B).bits
        closed = all(b == '1' for a, ab, b in zip(va, vab, vb) if a == ab == '1')
        result.record(closed, Witness('semantic-laws', 'progression closure', AB, vb, 'B wherever A and A→B'))
    return result


def check_stage_zero(t: StageTrace) -> CheckResult:
    """Every identity holds and every abstraction membership fails at stage 0"""
    result = CheckResult('stage-zero')
    engine = t.engine
    universe = t.fragment.universe
    for a, b in product(universe, repeat=2):
        formula = syntax.identity(a, b)
        result.record(engine.evaluate(formula, 0), Witness('stage-zero', 'identity', formula, 'false', 'true'))
    for a, c in product(universe, t.fragment.abstractions):
        formula = member(a, c)
        result.record(not engine.evaluate(formula, 0), Witness('stage-zero', 'membership', formula, 'true', 'false'))
    return result


def check_curry_triad(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """
    c^F∈c^F is always a thesis: a maxim exactly when F is one, otherwise a
    minor, and then ¬F is a thesis.
    """
    _converged(t)
    plan = _plan(t, plan)
    result = CheckResult('curry-triad')
    for F in plan.base:
        if F.noemata:
            continue
        c = syntax.curry(F)
        cc = member(c, c)
        status = _status(t, cc)
        if status is None:
            result.skip("curry membership not tracked")
            continue
        f_status = t.status(F)
        result.record(status != 'OUT', Witness('curry-triad', 'thesis', cc, status, 'c∈c is a thesis'))
        result.record((status == 'IN') == (f_status == 'IN'),
                      Witness('curry-triad', 'maxim', cc, status, f'c∈c maxim iff F maxim (F is {f_status})'))
        if status == 'UNSTAB':
            result.record(t.status(neg(F)) != 'OUT',
                          Witness('curry-triad', 'minor', neg(F), t.status(neg(F)), '¬F is a thesis'))
    return result


def check_identity_persistence(t: StageTrace) -> CheckResult:
    """
    An identity true at a stage above 0 is true at every stage below it.
    Without {x|x=a} witnesses in the universe a violation is a deviation.
    """
    _converged(t)
    result = CheckResult('identity-persistence')
    universe = t.fragment.universe
    for a, b in product(universe, repeat=2):
        if a is b:
            continue
        formula = syntax.identity(a, b)
        bits = t.valency(formula).bits
        last_true = bits.rfind('1')
        ok = last_true <= 0 or '0' not in bits[:last_true]
        witness = Witness('identity-persistence', 'downward', formula, bits, 'true below every true stage')
        x = syntax.least_absent(a.noemata | b.noemata)
        witnessed = all(syntax.abstraction(x, syntax.identity(noema(x), s)) in universe for s in (a, b))
        if ok or witnessed:
            result.record(ok, witness)
        else:
            result.instances += 1
            result.deviations.append(witness)
    return result


def check_identity_surprise(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """maxim(a = {x|x∈a}) iff maxim(a = ∅); mismatches are reported as deviations"""
    _converged(t)
    plan = _plan(t, plan)
    result = CheckResult('identity-surprise')
    if t.fragment.identity_mode != LEIBNIZ:
        result.skip("needs identity_mode leibniz")
        return result
    sentences = plan.identity_sentences()
    for left, right in zip(sentences[::2], sentences[1::2]):
        first, second = _status(t, left), _status(t, right)
        if first is None or second is None:
            result.skip("identity instance not tracked")
            continue
        result.instances += 1
        if (first == 'IN') == (second == 'IN'):
            result.passes += 1
        else:
            result.deviations.append(Witness('identity-surprise', 'biconditional', left, first, second))
    return result


def check_kind(t: StageTrace, plan: Optional[AuditPlan] = None) -> CheckResult:
    """Object-level KIND(a) is a maxim iff every x∈a is stable; mismatches are deviations"""
    _converged(t)
    from revision_engine import kind
    plan = _plan(t, plan)
    result = CheckResult('kind')
    for c in plan.abstractions:
        formula = kind_formula(c, plan.x)
        status = _status(t, formula)
        if status is None:
            result.skip("KIND instance not tracked")
            continue
        meta = kind(c, t)
        result.instances += 1
        if (status == 'IN') == meta:
            result.passes += 1
        else:
            result.deviations.append(Witness('kind', 'KIND', formula, status, 'IN' if meta else 'not IN'))
    return result


# --- driver -------------------------------------------------------------------

def run_checks(t: StageTrace, threads: Optional[int] = None, plan: Optional[AuditPlan] = None) -> AuditReport:
    """
    Every check against one trace; results keep a fixed order.

    ``plan`` must be the one the fragment was prepared with.
    """
    _converged(t)
    plan = _plan(t, plan)
    jobs: List[Callable[[], object]] = [
        lambda: check_posits(t, plan),
        lambda: check_regulations(t, plan),
        lambda: check_exfalso(t, plan),
        lambda: disconnection_census(t, plan),
        lambda: check_semantic_laws(t, plan),
        lambda: check_stage_zero(t),
        lambda: check_curry_triad(t, plan),
        lambda: check_identity_persistence(t),
        lambda: check_identity_surprise(t, plan),
        lambda: check_kind(t, plan),
    ]
    threads = threads or get_config().threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(lambda job: job(), jobs))
    else:
        outputs = [job() for job in jobs]
    report = AuditReport(banner=t.fragment.banner)
    for output in outputs:
        report.extend(output if isinstance(output, list) else [output])
    report.mp_failure = find_mp_failure(t, plan)
    failed = [check.name for check in report.checks if check.outcome == 'fail']
    if failed:
        logger.warning("audit failures", checks=failed)
    return report


def run_audit(fragment: Fragment, threads: Optional[int] = None) -> Tuple[AuditReport, StageTrace]:
    """Prepares the fragment, runs it and applies every check"""
    plan = AuditPlan(fragment)
    prepared = prepare(fragment, plan)
    trace = prepared.engine.run(threads=threads)
    return run_checks(trace, threads, plan), trace
