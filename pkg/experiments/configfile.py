"""
Experiment config files: KEY=VALUE lines, keys named after the simulate
flags with dashes turned into underscores (``round_cap=50``).

Parsing reuses django-environ on a private mapping, so a config file never
touches the process environment.
"""
import os

import environ
from django.core.exceptions import ImproperlyConfigured

from netsim.exceptions import ConfigError

# key -> type of its value
KEYS = {
    'protocol': str,
    'n': list,
    'epsilon': float,
    'd': float,
    'seed': int,
    'runs': int,
    'adversary': str,
    'mode': str,
    'round_cap': int,
    'inputs': str,
    'out': str,
    'format': str,
    'workers': int,
    'crypto': str,
    'trace_level': str,
    'staleness_factor': int,
    'max_rejections': int,
    'lambda': float,
    'W': int,
    'B': int,
}


def _file_env():
    """An Env whose ENVIRON is a scratch dict, so read_env never writes into os.environ."""
    return type('ExperimentFileEnv', (environ.Env,), {'ENVIRON': {}})


def read_config_file(path):
    """Typed values of every known key present in ``path``."""
    if not os.path.isfile(path):
        raise ConfigError(f'config file {path} does not exist')
    env_class = _file_env()
    env_class.read_env(path, overwrite=True)
    unknown = sorted(set(env_class.ENVIRON) - set(KEYS))
    if unknown:
        raise ConfigError(f'unknown keys in {path}: {", ".join(unknown)}')

    env = env_class()
    values = {}
    for key, cast in KEYS.items():
        if key not in env_class.ENVIRON:
            continue
        try:
            if cast is list:
                values[key] = env.list(key, cast=int)
            elif cast is int:
                values[key] = env.int(key)
            elif cast is float:
                values[key] = env.float(key)
            else:
                values[key] = env.str(key)
        except (ValueError, ImproperlyConfigured) as exc:
            raise ConfigError(f'{path}: bad value for {key}: {exc}') from exc
    return values
