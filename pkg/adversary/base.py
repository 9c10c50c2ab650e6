"""
Common machinery of the built-in adversary strategies.

A Strategy is a deterministic function of (run seed, what it observes): its
only randomness is a Random seeded from the run seed and its own name, so a
counterexample replays exactly.
"""
import random

from committee.tags import derive_seed
from netsim.config import AdversarySpec
from netsim.exceptions import ConfigError
from netsim.view import Adversary

FIFO = 'fifo'
RANDOM = 'random'
SCHEDULERS = (FIFO, RANDOM)


class Strategy(Adversary):
    """
    Base strategy: corruption budget (``budget`` option, default f) plus a
    delivery policy (``scheduler=fifo|random``, ``jitter`` steps for random).
    """
    name = 'base'
    attacks = ''
    corrupts = True

    def __init__(self, spec=None, seed=0):
        self.spec = spec if spec is not None else AdversarySpec(self.name)
        self.seed = seed
        self.rng = random.Random(derive_seed(seed, 'adversary', self.name))
        self.scheduler = self.spec.option('scheduler', FIFO)
        if self.scheduler not in SCHEDULERS:
            raise ConfigError(f'scheduler must be one of {SCHEDULERS}, got {self.scheduler!r}')
        self.jitter = self.spec.option('jitter', None, int)
        self.budget_option = self.spec.option('budget', None, int)
        if self.budget_option is not None and self.budget_option < 0:
            raise ConfigError(f'budget must be >= 0, got {self.budget_option}')

    def budget(self, params):
        if not self.corrupts:
            return 0
        return params.f if self.budget_option is None else self.budget_option

    def delay(self, view, envelope):
        if self.scheduler == RANDOM:
            jitter = self.jitter if self.jitter is not None else 4 * view.n
            return self.rng.randint(0, max(0, jitter))
        return 0

    def corrupt_pool(self, view):
        """Spend the whole budget on the corruption pool."""
        for pid in view.pool:
            view.corrupt(pid)

    def puppets(self, view):
        return [view.puppet(pid) for pid in sorted(view.corrupted)]

    def describe(self):
        return {'name': self.name, 'options': dict(self.spec.options), 'attacks': self.attacks}
