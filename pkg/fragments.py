"""
Fragment, scenario and report files.

Fragment files name their terms and sentences in presentable text; a `names`
map introduces `$name` shorthands that later entries (and later names) may use.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import structlog
from jsonschema import Draft7Validator

import presentable
from errors import FileNotFound, FragmentFileError, LibraError
from revision_engine import LEIBNIZ, STRUCTURAL, Budget, Fragment
from syntax import Expression

logger = structlog.get_logger(__name__)

ROOT = Path(__file__).resolve().parent
FRAGMENT_DIR = ROOT / 'fragments'
SCENARIO_DIR = ROOT / 'scenarios'

BUDGET_SCHEMA = {
    'type': 'object',
    'properties': {
        'max_steps_per_block': {'type': 'integer', 'minimum': 1},
        'max_blocks': {'type': 'integer', 'minimum': 1},
    },
    'additionalProperties': False,
}

FRAGMENT_SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'type': 'object',
    'required': ['terms'],
    'properties': {
        'description': {'type': 'string'},
        'names': {'type': 'object', 'additionalProperties': {'type': 'string'}},
        'terms': {'type': 'array', 'items': {'type': 'string'}, 'minItems': 1},
        'formulas': {'type': 'array', 'items': {'type': 'string'}},
        'registry': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['formula'],
                'properties': {'term': {'type': 'string'}, 'formula': {'type': 'string'}},
                'additionalProperties': False,
            },
        },
        'enum_prefix_size': {'type': 'integer', 'minimum': 0},
        'euro_enabled': {'type': 'boolean'},
        'identity_mode': {'enum': [STRUCTURAL, LEIBNIZ]},
        'budget': BUDGET_SCHEMA,
    },
    'additionalProperties': False,
}

STATUS_VALUES = ['MaximThesis', 'MinorThesis', 'NonThesis']
OUTCOME_VALUES = ['pass', 'fail', 'skip']

SCENARIO_SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'type': 'object',
    'required': ['name', 'kind'],
    'properties': {
        'name': {'type': 'string'},
        'description': {'type': 'string'},
        'kind': {'enum': ['fragment', 'enumeration', 'diagonal']},
        'fragment': {'type': 'string'},
        'formula': {'type': 'string'},
        'count': {'type': 'integer', 'minimum': 1},
        'expect': {
            'type': 'object',
            'properties': {
                'classifications': {'type': 'object', 'additionalProperties': {'enum': STATUS_VALUES}},
                'audits': {'type': 'object', 'additionalProperties': {'enum': OUTCOME_VALUES}},
                'closure_block': {'type': 'integer', 'minimum': 1},
                'parivalent': {
                    'type': 'array',
                    'items': {'type': 'array', 'items': {'type': 'string'}, 'minItems': 2, 'maxItems': 2},
                },
                'mp_failure': {'type': 'boolean'},
                'kinds': {'type': 'object', 'additionalProperties': {'type': 'boolean'}},
                'relations': {
                    'type': 'array',
                    'items': {
                        'type': 'object',
                        'required': ['a', 'b'],
                        'properties': {
                            'a': {'type': 'string'},
                            'b': {'type': 'string'},
                            'holds': {'type': 'array', 'items': {'type': 'string'}},
                            'fails': {'type': 'array', 'items': {'type': 'string'}},
                        },
                        'additionalProperties': False,
                    },
                },
                'enumeration': {'type': 'array', 'items': {'type': 'string'}},
                'certificate': {'type': 'boolean'},
            },
            'additionalProperties': False,
        },
    },
    'additionalProperties': False,
    'allOf': [
        {'if': {'properties': {'kind': {'const': 'fragment'}}}, 'then': {'required': ['fragment']}},
        {'if': {'properties': {'kind': {'const': 'diagonal'}}}, 'then': {'required': ['formula']}},
    ],
}


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.is_file():
        raise FileNotFound(f"no such file: {path}", path=str(path))
    try:
        with path.open(encoding='utf-8') as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FragmentFileError(f"{path} is not valid JSON: {exc.msg}", path=str(path), line=exc.lineno) from exc


def validate(document: Any, schema: Dict[str, Any], path: Union[str, Path]) -> None:
    """
    Raises:
        FragmentFileError: the first schema violation, with its JSON path
    """
    errors = sorted(Draft7Validator(schema).iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = '/'.join(str(part) for part in first.absolute_path) or '(root)'
        raise FragmentFileError(f"{path}: {where}: {first.message}", path=str(path), at=where)


def resolve_names(raw: Dict[str, str]) -> Dict[str, Expression]:
    """Parses each name in file order; a name may use the ones before it"""
    names: Dict[str, Expression] = {}
    for name, text in raw.items():
        names[name] = presentable.parse(text, 'term', names)
    return names


def fragment_from_dict(document: Dict[str, Any], path: Union[str, Path] = '<memory>') -> Fragment:
    validate(document, FRAGMENT_SCHEMA, path)
    try:
        names = resolve_names(document.get('names', {}))
        terms = [presentable.parse(text, 'term', names) for text in document['terms']]
        formulas = [presentable.parse(text, 'formula', names) for text in document.get('formulas', [])]
        registry = []
        for entry in document.get('registry', []):
            formula = presentable.parse(entry['formula'], 'formula', names)
            term = presentable.parse(entry['term'], 'term', names) if 'term' in entry else None
            registry.append((term, formula))
    except LibraError as exc:
        exc.details.setdefault('path', str(path))
        raise
    budget = None
    if 'budget' in document:
        defaults = Budget.from_config()
        budget = Budget(document['budget'].get('max_steps_per_block', defaults.max_steps_per_block),
                        document['budget'].get('max_blocks', defaults.max_blocks))
    fragment = Fragment.build(
        terms, formulas, registry,
        enum_prefix_size=document.get('enum_prefix_size', 0),
        euro_enabled=document.get('euro_enabled', False),
        identity_mode=document.get('identity_mode', STRUCTURAL),
        budget=budget,
        names=names,
        description=document.get('description', ''),
    )
    logger.info("fragment loaded", path=str(path), universe=len(fragment.universe), tracked=len(fragment.tracked))
    return fragment


def load_fragment(path: Union[str, Path]) -> Fragment:
    """
    Raises:
        FileNotFound: the file is missing
        FragmentFileError: the file is not a valid fragment
    """
    return fragment_from_dict(_read_json(path), path)


def parse_in(fragment: Fragment, text: str, category: str = 'formula') -> Expression:
    """Presentable text read with the fragment's $names"""
    return presentable.parse(text, category, dict(fragment.names))


def render_in(fragment: Fragment, e: Expression) -> str:
    return presentable.render(e, dict(fragment.names))


def scenario_path(name: str) -> Path:
    candidate = Path(name)
    if candidate.suffix == '.json':
        return candidate
    return SCENARIO_DIR / f'{name}.json'


def load_scenario(name: str) -> Dict[str, Any]:
    """A scenario by name or path; `fragment` comes back as an absolute path"""
    path = scenario_path(name)
    document = _read_json(path)
    validate(document, SCENARIO_SCHEMA, path)
    if 'fragment' in document:
        document['fragment'] = str((path.parent / document['fragment']).resolve())
    document.setdefault('expect', {})
    return document


def list_scenarios() -> List[str]:
    return sorted(path.stem for path in SCENARIO_DIR.glob('*.json'))


def dumps(payload: Any) -> str:
    """Deterministic JSON for every result payload"""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def write_report(payload: Any, path: Optional[Union[str, Path]]) -> str:
    text = dumps(payload)
    if path is not None:
        Path(path).write_text(text + '\n', encoding='utf-8')
        logger.info("report written", path=str(path))
    return text
