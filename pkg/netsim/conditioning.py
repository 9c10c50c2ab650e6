"""
Committee resolution for both sampling modes.

In faithful mode a committee string is used as is. In conditioned mode the
guard resamples (through a dedicated ``resample`` sub-tag) until the
realised committee satisfies the good sampling events: enough correct
members, few enough members from the corruption pool and, for derived
parameters, a committee size inside the (1 +- d) lambda band with positive
intersection margins.
"""
import logging
from dataclasses import dataclass

from committee.sampling import sample
from committee.tags import encode_parts
from netsim.config import CONDITIONED
from netsim.exceptions import ConditioningExhausted

logger = logging.getLogger(__name__)

RESAMPLE_LABEL = 'resample'


@dataclass(frozen=True)
class Committee:
    tag: bytes
    effective_tag: bytes
    members: tuple
    correct: int
    byzantine: int
    rejections: int = 0

    @property
    def size(self):
        return len(self.members)

    def __contains__(self, pid):
        return pid in self.members

    def as_dict(self):
        return {
            'size': self.size,
            'correct': self.correct,
            'byzantine': self.byzantine,
            'rejections': self.rejections,
        }


def resample_tag(tag, attempt):
    return encode_parts(tag, RESAMPLE_LABEL, attempt)


class CommitteeGuard:
    """
    Resolves committee strings to the tag processes actually sample on.

    Byzantine counts are taken against the run's corruption pool, the only
    processes the adversary may ever control.
    """

    def __init__(self, params, registry, pool, mode, max_rejections, trace=None):
        self.params = params
        self.registry = registry
        self.pool = frozenset(pool)
        self.mode = mode
        self.max_rejections = max_rejections
        self.trace = trace
        self.rejections = 0
        self._resolved = {}

    @property
    def conditioned(self):
        return self.mode == CONDITIONED

    def effective_tag(self, tag):
        return self.resolve(tag).effective_tag

    def census(self, tag, effective_tag=None, rejections=0):
        """Evaluate every process's election for ``effective_tag``."""
        effective_tag = tag if effective_tag is None else effective_tag
        p = self.params
        members = tuple(
            pid for pid in range(p.n)
            if sample(self.registry.keypair(pid), effective_tag, p.lam, p.n)[0]
        )
        byzantine = sum(1 for pid in members if pid in self.pool)
        return Committee(
            tag=tag, effective_tag=effective_tag, members=members,
            correct=len(members) - byzantine, byzantine=byzantine, rejections=rejections,
        )

    def satisfies_sampling_events(self, committee):
        p = self.params
        if committee.correct < p.W or committee.byzantine > p.B:
            return False
        if p.d > 0:
            size = committee.size
            if not (1 - p.d) * p.lam <= size <= (1 + p.d) * p.lam:
                return False
            if 2 * p.W - size - p.B < 1 or p.W + p.B + 1 - size < 1:
                return False
        return True

    def conditioned_sampling_guard(self, tag):
        for attempt in range(self.max_rejections + 1):
            committee = self.census(tag, resample_tag(tag, attempt), rejections=attempt)
            if self.satisfies_sampling_events(committee):
                if attempt:
                    logger.debug('committee %s accepted after %d resamples', tag.hex()[:16], attempt)
                return committee
        raise ConditioningExhausted(
            f'no committee satisfying the sampling events after {self.max_rejections} resamples; '
            f'the parameters are too small for conditioned mode')

    def resolve(self, tag):
        try:
            return self._resolved[tag]
        except KeyError:
            pass
        if self.conditioned:
            committee = self.conditioned_sampling_guard(tag)
        else:
            committee = self.census(tag)
        self.rejections += committee.rejections
        self._resolved[tag] = committee
        if self.trace is not None:
            self.trace.committees.append(committee.as_dict())
        return committee
