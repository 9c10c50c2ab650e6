"""
JSON Schema of the experiment report. Bump SCHEMA_VERSION on any change a
consumer could notice.
"""
import jsonschema

SCHEMA_VERSION = '1.0'

_NUMBER_OR_NULL = {'type': ['number', 'null']}

_SUMMARY = {
    'type': ['object', 'null'],
    'required': ['mean', 'median', 'p90', 'max'],
    'properties': {key: {'type': 'number'} for key in ('mean', 'median', 'p90', 'max')},
}

_COUNTS = {'type': 'object', 'additionalProperties': {'type': 'integer', 'minimum': 0}}

_GROUP = {
    'type': 'object',
    'required': [
        'config', 'seeds', 'runs', 'violations', 'total_violations', 'blocked',
        'compromised', 'round_cap_exceeded', 'decision_rounds', 'words', 'word_ratio',
        'coin', 'committees', 'fingerprints', 'exit_ok',
    ],
    'properties': {
        'config': {
            'type': 'object',
            'required': ['protocol', 'params', 'adversary', 'sampling_mode'],
        },
        'seeds': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}},
        'runs': {'type': 'integer', 'minimum': 1},
        'violations': _COUNTS,
        'total_violations': {'type': 'integer', 'minimum': 0},
        'blocked': {'type': 'integer', 'minimum': 0},
        'compromised': {'type': 'integer', 'minimum': 0},
        'round_cap_exceeded': {'type': 'integer', 'minimum': 0},
        'invalid_messages': {'type': 'integer', 'minimum': 0},
        'decision_rounds': _SUMMARY,
        'round_bound': _NUMBER_OR_NULL,
        'unanimous_round_one': _NUMBER_OR_NULL,
        'words': _SUMMARY,
        'word_ratio': _SUMMARY,
        'expected_word_complexity': {'type': 'number'},
        'coin': {'type': ['object', 'null']},
        'committees': {'type': 'object', 'required': ['count']},
        'fingerprints': {'type': 'object', 'additionalProperties': {'type': 'string'}},
        'exit_ok': {'type': 'boolean'},
    },
}

REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'sqba experiment report',
    'type': 'object',
    'required': ['schema_version', 'protocol', 'groups', 'scaling', 'totals', 'exit_ok'],
    'properties': {
        'schema_version': {'const': SCHEMA_VERSION},
        'protocol': {'enum': ['approver', 'coin', 'binary', 'multivalued']},
        'groups': {'type': 'array', 'minItems': 1, 'items': _GROUP},
        'scaling': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['n', 'lambda', 'mean_words', 'ratio'],
                'properties': {
                    'n': {'type': 'integer'},
                    'lambda': {'type': 'number'},
                    'mean_words': _NUMBER_OR_NULL,
                    'ratio': _NUMBER_OR_NULL,
                },
            },
        },
        'scaling_spread': _NUMBER_OR_NULL,
        'totals': {
            'type': 'object',
            'required': ['runs', 'violations', 'blocked', 'compromised'],
            'properties': {
                key: {'type': 'integer', 'minimum': 0}
                for key in ('runs', 'violations', 'blocked', 'compromised')
            },
        },
        'exit_ok': {'type': 'boolean'},
    },
}


def validate_report(report):
    """Raises jsonschema.ValidationError if ``report`` does not match the schema."""
    jsonschema.validate(report, REPORT_SCHEMA, cls=jsonschema.Draft202012Validator)
    return report
