#!/usr/bin/env python3
"""
Command line for the £ workbench.

Every command prints one JSON document (sorted keys) on stdout; logs go to
stderr. Exit codes: 0 success, 1 domain error, 2 budget or convergence.
"""
import argparse
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import structlog

import codec
import goedel
import presentable
import syntax
from audit import run_audit
from config import configure_logging, get_config, set_config
from enumeration import enumerate_cognomina
from errors import LibraError, NotConverged
from fragments import dumps, list_scenarios, load_fragment, load_scenario, parse_in, render_in, write_report
from revision_engine import Fragment, StageTrace, kind, relations
from substitution import CodedExpr, SUB, Sub, diagonal, sub

logger = structlog.get_logger(__name__)

EPILOG = """examples:
  python cli.py encode "|...|..."
  python cli.py parse "|..|.|.|"
  python cli.py print "{v0 | not v0 in v0}" --form bare
  python cli.py code 1 --scheme presentable
  python cli.py diag "v0 in T"
  python cli.py enum --count 5
  python cli.py simulate fragments/russell.json
  python cli.py relations fragments/russell.json '$r in $r' 'not $r in $r'
  python cli.py scenario run russell
"""


# --- output -------------------------------------------------------------------

def _table(payload: Any, indent: str = '') -> str:
    if isinstance(payload, dict):
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{indent}{key}:")
                lines.append(_table(value, indent + '  '))
            else:
                lines.append(f"{indent}{key}: {value}")
        return '\n'.join(lines)
    if isinstance(payload, list):
        return '\n'.join(_table(item, indent + '- ') if isinstance(item, (dict, list)) else f"{indent}- {item}"
                         for item in payload)
    return f"{indent}{payload}"


def emit(args: argparse.Namespace, payload: Any, text: Optional[Callable[[], str]] = None) -> None:
    if getattr(args, 'text', False):
        print(text() if text is not None else _table(payload))
    else:
        print(write_report(payload, getattr(args, 'output', None)))


def _expression_payload(e: syntax.Expression, names: Optional[Dict[str, syntax.Expression]] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        'category': syntax.category_of(e).value,
        'presentable': presentable.render(e, names),
        'noemata': sorted(e.noemata),
    }
    try:
        payload['bits'] = e.bit_length
        payload['value'] = syntax.formation_value(e)
        payload['bare'] = syntax.render(e, 'bare')
    except LibraError as exc:
        payload['value'] = None
        payload['note'] = exc.message
    if e.is_term:
        payload['classes'] = sorted(syntax.classify_term(e))
        if syntax.is_cognomen(e):
            payload['caliber'] = syntax.caliber(e)
    return payload


def _read_expression(text: str, source: str, category: str = 'auto') -> syntax.Expression:
    if source == 'formation':
        return syntax.parse_number(codec.parse_number(text), category)
    return presentable.parse(text, category)


# --- commands -----------------------------------------------------------------

def cmd_parse(args) -> int:
    e = syntax.parse(args.formation, args.category)
    emit(args, _expression_payload(e))
    return 0


def cmd_print(args) -> int:
    e = _read_expression(args.expression, args.source, args.category)
    emit(args, {'form': args.form, 'text': syntax.render(e, args.form)})
    return 0


def cmd_encode(args) -> int:
    formation = codec.Formation.from_text(args.formation)
    emit(args, {'value': formation.value, 'bits': formation.bit_length, 'austere': formation.austere})
    return 0


def cmd_decode(args) -> int:
    n = codec.parse_number(args.number)
    formation = codec.formation_of(n)
    payload: Dict[str, Any] = {'value': n, 'austere': formation.austere, 'bare': formation.bare}
    try:
        payload['expression'] = _expression_payload(syntax.parse_number(n, args.category))
    except LibraError as exc:
        payload['expression'] = None
        payload['note'] = exc.to_dict()
    emit(args, payload)
    return 0


def cmd_code(args) -> int:
    code = goedel.goedel_code(args.n, args.scheme)
    payload = code.to_dict()
    payload['constants'] = code.scheme.constants()
    if args.materialize:
        payload['value'] = goedel.materialize(code, args.budget_bits)
    if args.n == 0:
        payload['size_remark'] = goedel.size_remark_delta()
    payload['free_noemata'] = sorted(code.node.noemata)
    emit(args, payload)
    return 0


def cmd_sub(args) -> int:
    x = CodedExpr.of(_read_expression(args.expression, args.source))
    if args.numeral is not None:
        result = SUB(x, args.numeral)
    else:
        y = CodedExpr.of(_read_expression(args.term, args.source, 'term'))
        result = Sub(x, y) if args.index is None else sub(x, args.index, y)
    emit(args, {'result': _expression_payload(result.expr) if result.decodes else None,
                'raw': None if result.decodes else result.number})
    return 0


def cmd_diag(args) -> int:
    certificate = diagonal(_read_expression(args.formula, args.source, 'formula'), args.scheme)
    emit(args, certificate.to_dict())
    return 0 if certificate.verified else 1


def cmd_enum(args) -> int:
    prefix = enumerate_cognomina(args.count, args.max_bits)
    emit(args, prefix.to_dict())
    return 0


def cmd_census(args) -> int:
    emit(args, syntax.category_census(args.max_bits))
    return 0


def _run(fragment: Fragment) -> StageTrace:
    return fragment.engine.run(threads=get_config().threads)


def cmd_simulate(args) -> int:
    fragment = load_fragment(args.fragment)
    try:
        trace = _run(fragment)
    except NotConverged as exc:
        logger.error("fragment did not close", message=exc.message)
        payload = exc.to_dict()
        payload['trace'] = exc.trace.to_dict() if exc.trace is not None else None
        emit(args, payload)
        return exc.exit_code
    emit(args, trace.to_dict())
    return 0


def cmd_classify(args) -> int:
    fragment = load_fragment(args.fragment)
    sentences = [parse_in(fragment, text) for text in args.sentences] or None
    trace = _run(fragment.with_tracked(sentences or ()))
    emit(args, trace.to_dict(sentences))
    return 0


def cmd_relations(args) -> int:
    fragment = load_fragment(args.fragment)
    A, B = parse_in(fragment, args.first), parse_in(fragment, args.second)
    trace = _run(fragment.with_tracked([A, B]))
    payload = relations(A, B, trace).to_dict()
    payload['first'], payload['second'] = render_in(fragment, A), render_in(fragment, B)
    payload['banner'] = fragment.banner
    emit(args, payload)
    return 0


def cmd_audit(args) -> int:
    fragment = load_fragment(args.fragment)
    report, _ = run_audit(fragment, get_config().threads)
    emit(args, report.to_dict(dict(fragment.names)), report.to_text)
    return 0 if report.ok else 1


# --- scenarios ----------------------------------------------------------------

class ScenarioRun:
    """Collects expectation checks for one scenario"""

    def __init__(self, name: str):
        self.name = name
        self.checks: List[Dict[str, Any]] = []

    def expect(self, what: str, expected: Any, actual: Any, ok: Optional[bool] = None) -> None:
        self.checks.append({'check': what, 'expected': expected, 'actual': actual,
                            'ok': expected == actual if ok is None else ok})

    @property
    def passed(self) -> bool:
        return all(check['ok'] for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {'scenario': self.name, 'passed': self.passed, 'checks': self.checks}


def _fragment_scenario(document: Dict[str, Any], result: ScenarioRun) -> None:
    expect = document['expect']
    fragment = load_fragment(document['fragment'])
    if 'audits' in expect or 'mp_failure' in expect:
        report, trace = run_audit(fragment)
    else:
        report, trace = None, _run(fragment)
    if 'closure_block' in expect:
        # an upper bound: extra tracked sentences can only delay closure
        result.expect('closure_block <=', expect['closure_block'], trace.closure.block,
                      trace.closure.block <= expect['closure_block'])
    for text, status in sorted(expect.get('classifications', {}).items()):
        result.expect(f'classify {text}', status, trace.classify(parse_in(fragment, text)).status.value)
    for first, second in expect.get('parivalent', []):
        found = relations(parse_in(fragment, first), parse_in(fragment, second), trace).parivalent
        result.expect(f'parivalent {first} / {second}', True, found)
    for text, wanted in sorted(expect.get('kinds', {}).items()):
        result.expect(f'kind {text}', wanted, kind(parse_in(fragment, text, 'term'), trace))
    for entry in expect.get('relations', []):
        found = relations(parse_in(fragment, entry['a']), parse_in(fragment, entry['b']), trace)
        for name in entry.get('holds', []):
            result.expect(f"{name} {entry['a']} / {entry['b']}", True, getattr(found, name))
        for name in entry.get('fails', []):
            result.expect(f"{name} {entry['a']} / {entry['b']}", False, getattr(found, name))
    if report is not None:
        outcomes = report.outcomes
        for check, outcome in sorted(expect.get('audits', {}).items()):
            result.expect(f'audit {check}', outcome, outcomes.get(check))
        if 'mp_failure' in expect:
            result.expect('mp failure found', expect['mp_failure'], report.mp_failure is not None)


def run_scenario(name: str) -> ScenarioRun:
    document = load_scenario(name)
    result = ScenarioRun(document['name'])
    expect = document['expect']
    if document['kind'] == 'fragment':
        _fragment_scenario(document, result)
    elif document['kind'] == 'enumeration':
        count = document.get('count', len(expect.get('enumeration', [])) or get_config().default_enum_prefix)
        prefix = enumerate_cognomina(count)
        if 'enumeration' in expect:
            result.expect('enumeration', expect['enumeration'], [entry.austere for entry in prefix.entries])
    else:
        certificate = diagonal(presentable.parse(document['formula'], 'formula'))
        result.expect('certificate verified', expect.get('certificate', True), certificate.verified)
    logger.info("scenario finished", scenario=result.name, passed=result.passed)
    return result


def cmd_scenario(args) -> int:
    if args.action == 'list':
        emit(args, {'scenarios': list_scenarios()})
        return 0
    if not args.name:
        raise LibraError("scenario run needs a scenario name")
    result = run_scenario(args.name)
    emit(args, result.to_dict())
    return 0 if result.passed else 1


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='libra',
        description='£ workbench: formations, Gödel codes, enumeration and fragment-relative revision semantics',
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--text', action='store_true', help='human-readable output instead of JSON')
    parser.add_argument('--threads', type=int, help='worker threads for evaluation and audits')
    parser.add_argument('--budget-steps', type=int, help='max steps per ω-block')
    parser.add_argument('--budget-blocks', type=int, help='max ω-blocks')
    parser.add_argument('--scheme', choices=sorted(goedel.SCHEMES), help='Gödel coding scheme')
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING or ERROR')
    parser.add_argument('--log-format', choices=['console', 'json'])
    parser.add_argument('--output', help='also write the JSON result to this file')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('parse', help='parse an austere or bare formation')
    p.add_argument('formation')
    p.add_argument('--category', choices=['auto', 'term', 'formula'], default='auto')
    p.set_defaults(handler=cmd_parse)

    p = commands.add_parser('print', help='print an expression in austere, bare or presentable form')
    p.add_argument('expression')
    p.add_argument('--form', choices=['austere', 'bare', 'presentable'], default='presentable')
    p.add_argument('--source', choices=['presentable', 'formation'], default='presentable')
    p.add_argument('--category', choices=['auto', 'term', 'formula'], default='auto')
    p.set_defaults(handler=cmd_print)

    p = commands.add_parser('encode', help='number of a formation')
    p.add_argument('formation')
    p.set_defaults(handler=cmd_encode)

    p = commands.add_parser('decode', help='formation (and expression) of a number')
    p.add_argument('number')
    p.add_argument('--category', choices=['auto', 'term', 'formula'], default='auto')
    p.set_defaults(handler=cmd_decode)

    p = commands.add_parser('code', help='Gödel code of n')
    p.add_argument('n', type=int)
    p.add_argument('--materialize', action='store_true')
    p.add_argument('--budget-bits', type=int)
    p.set_defaults(handler=cmd_code)

    p = commands.add_parser('sub', help='sub / Sub / SUB on codes')
    p.add_argument('expression')
    p.add_argument('term', nargs='?')
    p.add_argument('--index', type=int, help='noema index for sub; default is the least one (Sub)')
    p.add_argument('--numeral', type=int, help='insert the numeral of this number (SUB)')
    p.add_argument('--source', choices=['presentable', 'formation'], default='presentable')
    p.set_defaults(handler=cmd_sub)

    p = commands.add_parser('diag', help='diagonal sentence with its certificate')
    p.add_argument('formula')
    p.add_argument('--source', choices=['presentable', 'formation'], default='presentable')
    p.set_defaults(handler=cmd_diag)

    p = commands.add_parser('enum', help='first entries of the cognomen enumeration')
    p.add_argument('--count', type=int, default=None)
    p.add_argument('--max-bits', type=int)
    p.set_defaults(handler=cmd_enum)

    p = commands.add_parser('census', help='term / formula census of every formation up to a bit length')
    p.add_argument('--max-bits', type=int, default=12)
    p.set_defaults(handler=cmd_census)

    p = commands.add_parser('simulate', help='run a fragment and print its trace')
    p.add_argument('fragment')
    p.set_defaults(handler=cmd_simulate)

    p = commands.add_parser('classify', help='classify sentences of a fragment')
    p.add_argument('fragment')
    p.add_argument('sentences', nargs='*')
    p.set_defaults(handler=cmd_classify)

    p = commands.add_parser('relations', help='valency relations of two sentences')
    p.add_argument('fragment')
    p.add_argument('first')
    p.add_argument('second')
    p.set_defaults(handler=cmd_relations)

    p = commands.add_parser('audit', help='posits, regulations and semantic laws on a fragment')
    p.add_argument('fragment')
    p.set_defaults(handler=cmd_audit)

    p = commands.add_parser('scenario', help='shipped scenarios')
    p.add_argument('action', choices=['run', 'list'])
    p.add_argument('name', nargs='?')
    p.set_defaults(handler=cmd_scenario)
    return parser


def apply_overrides(args: argparse.Namespace) -> None:
    """Folds the global flags into the active configuration"""
    update: Dict[str, Any] = {}
    if args.threads is not None:
        update['threads'] = max(1, args.threads)
    if args.budget_steps is not None:
        update['budget_max_steps_per_block'] = args.budget_steps
    if args.budget_blocks is not None:
        update['budget_max_blocks'] = args.budget_blocks
    if args.scheme is not None:
        update['goedel_scheme'] = args.scheme
    if update:
        set_config(get_config().model_copy(update=update))
    configure_logging(args.log_level, args.log_format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, 'count', 0) is None:
        args.count = get_config().default_enum_prefix
    apply_overrides(args)
    try:
        return args.handler(args)
    except LibraError as exc:
        logger.error("command failed", command=args.command, error=exc.code, message=exc.message)
        print(dumps(exc.to_dict()))
        return exc.exit_code
    except ValueError as exc:
        logger.error("command failed", command=args.command, error='ValueError', message=str(exc))
        print(dumps({'error': 'ValueError', 'message': str(exc)}))
        return 1


if __name__ == '__main__':
    sys.exit(main())
