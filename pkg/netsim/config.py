"""
Run configuration.

A RunConfig fully determines a run: identical configs (same seed) give
byte-identical traces.
"""
import math
from dataclasses import dataclass, field, replace

from netsim.exceptions import ConfigError

FAITHFUL = 'faithful'
CONDITIONED = 'conditioned'
SAMPLING_MODES = (FAITHFUL, CONDITIONED)

TRACE_PROTOCOL = 'protocol'
TRACE_FULL = 'full'
TRACE_LEVELS = (TRACE_PROTOCOL, TRACE_FULL)

APPROVER = 'approver'
COIN = 'coin'
BINARY = 'binary'
MULTIVALUED = 'multivalued'
PROTOCOLS = (APPROVER, COIN, BINARY, MULTIVALUED)

# the domain's default decision; never a legal input
RESERVED_DEFAULT = '⊥'.encode('utf-8')

SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class AdversarySpec:
    """Strategy name plus its options, written ``NAME[:key=value,...]``."""
    name: str = 'none'
    options: tuple = ()

    @classmethod
    def parse(cls, text):
        name, _, raw = text.strip().partition(':')
        if not name:
            raise ConfigError(f'adversary spec {text!r} has no strategy name')
        options = []
        for item in filter(None, (part.strip() for part in raw.split(','))):
            key, sep, value = item.partition('=')
            if not sep or not key:
                raise ConfigError(f'adversary option {item!r} is not key=value')
            options.append((key.strip(), value.strip()))
        return cls(name=name, options=tuple(sorted(options)))

    def option(self, key, default=None, cast=str):
        for option_key, value in self.options:
            if option_key == key:
                try:
                    return cast(value)
                except ValueError:
                    raise ConfigError(f'adversary option {key}={value!r} is not a valid {cast.__name__}') from None
        return default

    def __str__(self):
        if not self.options:
            return self.name
        return self.name + ':' + ','.join(f'{key}={value}' for key, value in self.options)


@dataclass(frozen=True)
class RunConfig:
    params: object
    seed: int
    protocol: str
    inputs: tuple
    adversary: AdversarySpec = field(default_factory=AdversarySpec)
    sampling_mode: str = CONDITIONED
    round_cap: int = 200
    staleness_factor: int = 10
    max_rejections: int = 10000
    trace_level: str = TRACE_PROTOCOL
    crypto: str = 'hmac'
    instance: bytes = b'sqba'

    def __post_init__(self):
        n = self.params.n
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f'protocol must be one of {PROTOCOLS}, got {self.protocol!r}')
        if self.sampling_mode not in SAMPLING_MODES:
            raise ConfigError(f'sampling mode must be one of {SAMPLING_MODES}, got {self.sampling_mode!r}')
        if self.trace_level not in TRACE_LEVELS:
            raise ConfigError(f'trace level must be one of {TRACE_LEVELS}, got {self.trace_level!r}')
        if self.round_cap < 1:
            raise ConfigError(f'round cap must be >= 1, got {self.round_cap}')
        if self.staleness_factor < 1:
            raise ConfigError(f'staleness factor must be >= 1, got {self.staleness_factor}')
        if self.max_rejections < 0:
            raise ConfigError(f'max rejections must be >= 0, got {self.max_rejections}')
        if len(self.inputs) != n:
            raise ConfigError(f'need exactly n={n} inputs, got {len(self.inputs)}')

        if self.protocol == BINARY:
            if any(value not in (0, 1) for value in self.inputs):
                raise ConfigError('binary agreement inputs must be bits')
        elif self.protocol in (APPROVER, MULTIVALUED):
            if any(not isinstance(value, bytes) for value in self.inputs):
                raise ConfigError(f'{self.protocol} inputs must be byte strings')
            if RESERVED_DEFAULT in self.inputs:
                raise ConfigError('the reserved default value cannot be used as an input')

    @property
    def staleness_bound(self):
        """Largest delay (in scheduler steps) the adversary may impose."""
        return max(1, math.ceil(self.staleness_factor * self.params.n * self.params.lam))

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def describe(self):
        return {
            'protocol': self.protocol,
            'params': self.params.as_dict(),
            'seed': self.seed,
            'adversary': str(self.adversary),
            'sampling_mode': self.sampling_mode,
            'round_cap': self.round_cap,
            'staleness_factor': self.staleness_factor,
            'trace_level': self.trace_level,
            'crypto': self.crypto,
        }
