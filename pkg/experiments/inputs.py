"""
Input patterns for ``--inputs``.

    unanimous[:VALUE]   every process proposes VALUE
    split-2             two values, alternating by process id
    split-3             three values, cycling by process id
    random              seeded draw (two values for the approver, three otherwise)
    explicit:v0,v1,...  one value per process

Binary agreement maps values onto bits; the coin ignores inputs.
"""
import random

from committee.tags import derive_seed
from netsim.config import APPROVER, BINARY, COIN, RESERVED_DEFAULT
from netsim.exceptions import ConfigError

UNANIMOUS = 'unanimous'
SPLIT_2 = 'split-2'
SPLIT_3 = 'split-3'
RANDOM = 'random'
EXPLICIT = 'explicit'
PATTERNS = (UNANIMOUS, SPLIT_2, SPLIT_3, RANDOM, EXPLICIT)

DEFAULT_VALUE = b'tx-block-A'
VALUES = (b'value-a', b'value-b', b'value-c')


def _parse_bit(text):
    if text not in ('0', '1'):
        raise ConfigError(f'binary agreement inputs must be 0 or 1, got {text!r}')
    return int(text)


def _parse_value(protocol, text):
    if protocol == BINARY:
        return _parse_bit(text)
    if protocol == COIN:
        return 0
    value = text.encode('utf-8')
    if value == RESERVED_DEFAULT:
        raise ConfigError('the reserved default value cannot be used as an input')
    return value


def _domain(protocol, size):
    if protocol == BINARY:
        return tuple(index % 2 for index in range(size))
    if protocol == COIN:
        return (0,) * size
    return VALUES[:size]


def build_inputs(pattern, protocol, n, seed=0):
    """Per-process inputs for ``pattern``; raises ConfigError on malformed patterns."""
    name, _, argument = pattern.strip().partition(':')

    if name == UNANIMOUS:
        if argument:
            value = _parse_value(protocol, argument)
        else:
            value = {BINARY: 1, COIN: 0}.get(protocol, DEFAULT_VALUE)
        inputs = (value,) * n
    elif name == SPLIT_2:
        inputs = tuple(_domain(protocol, 2)[pid % 2] for pid in range(n))
    elif name == SPLIT_3:
        if protocol == APPROVER:
            raise ConfigError('the approver supports at most two distinct inputs')
        inputs = tuple(_domain(protocol, 3)[pid % 3] for pid in range(n))
    elif name == RANDOM:
        size = 2 if protocol in (APPROVER, BINARY) else 3
        domain = _domain(protocol, size)
        rng = random.Random(derive_seed(seed, 'inputs'))
        inputs = tuple(rng.choice(domain) for _ in range(n))
    elif name == EXPLICIT:
        values = [item.strip() for item in argument.split(',') if item.strip()]
        if len(values) != n:
            raise ConfigError(f'explicit inputs need exactly n={n} values, got {len(values)}')
        inputs = tuple(_parse_value(protocol, item) for item in values)
        if protocol == APPROVER and len(set(inputs)) > 2:
            raise ConfigError('the approver supports at most two distinct inputs')
    else:
        raise ConfigError(f'unknown input pattern {pattern!r}; choose one of {PATTERNS}')
    return inputs


def is_unanimous(inputs):
    return len(set(inputs)) == 1
