"""
Binary Byzantine Agreement, one approver pair and one coin per round.

Round r: vals = approve((inst, r, 1), est); propose = v if vals == {v}
else BOTTOM; c = coin((inst, r)); vals2 = approve((inst, r, 2), propose).
A non-BOTTOM singleton decides, a mixed set adopts, BOTTOM alone takes the
coin. Decided processes keep running; the harness halts everyone two rounds
after the last correct process decided.
"""
import enum
import logging

from committee.tags import encode_parts
from netsim import trace as events
from protocols.messages import BOTTOM

logger = logging.getLogger(__name__)

ZERO = b'0'
ONE = b'1'
BITS = {ZERO: 0, ONE: 1}

DECIDED = 'binary.decide'
ROUND = 'binary.round'

HALT_MARGIN = 2


class Case(enum.Enum):
    DECIDE = 'decide'
    ADOPT = 'adopt'
    COIN = 'coin'
    CONFLICT = 'conflict'


def bit_value(bit):
    return ONE if bit else ZERO


def round_instance(instance, round, step):
    return encode_parts(instance, 'round', round, step)


def classify_approver_output(vals):
    """
    Map a second-approver output onto (Case, bit).

    More than one non-BOTTOM value, or a value outside {0, 1, BOTTOM}, is a
    graded-agreement failure and classifies as CONFLICT.
    """
    if not vals:
        raise ValueError('approver outputs are never empty')
    if any(value not in BITS and value != BOTTOM for value in vals):
        return Case.CONFLICT, None
    values = sorted(value for value in vals if value != BOTTOM)
    if len(values) > 1:
        return Case.CONFLICT, None
    if not values:
        return Case.COIN, None
    bit = BITS[values[0]]
    if BOTTOM in vals:
        return Case.ADOPT, bit
    return Case.DECIDE, bit


class HaltingCoordinator:
    """
    Harness stop condition: once every correct participant has decided,
    processes finish the round ``HALT_MARGIN`` past the latest decision round.
    """

    def __init__(self, network):
        self._network = network
        self.members = {}
        self.decided = {}
        self.halt_round = None
        network.add_corruption_listener(self._recheck)

    def register(self, pid, agreement):
        self.members[pid] = agreement

    def report_decision(self, pid, round):
        self.decided[pid] = round
        self._recheck()

    def _recheck(self, *_):
        if self.halt_round is not None:
            return
        correct = self._network.correct_processes()
        if not correct or any(pid not in self.decided for pid in correct):
            return
        self.halt_round = max(self.decided[pid] for pid in correct) + HALT_MARGIN
        logger.debug('all correct processes decided; halting after round %d', self.halt_round)
        for pid in correct:
            agreement = self.members[pid]
            agreement.ctx.defer(agreement.on_halt)


class BinaryAgreement:
    def __init__(self, host, instance, coordinator, round_cap):
        self.host = host
        self.ctx = host.ctx
        self.instance = instance
        self.coordinator = coordinator
        self.round_cap = round_cap

        self.est = None
        self.propose = None
        self.coin = None
        self.round = 0
        self.decision = None
        self.decision_round = None
        self.stopped = False
        self.compromised = False

        self._on_decide = None
        self._on_stop = None

    def start(self, bit, on_decide=None, on_stop=None):
        if bit not in (0, 1):
            raise ValueError(f'binary agreement input must be a bit, got {bit!r}')
        self.est = bit
        self._on_decide = on_decide
        self._on_stop = on_stop
        self.coordinator.register(self.ctx.pid, self)
        self._next_round()

    def _next_round(self):
        if self.stopped:
            return
        halt_round = self.coordinator.halt_round
        if halt_round is not None and self.round >= halt_round:
            self._stop()
            return
        if self.round >= self.round_cap:
            if self.decision is None:
                self.ctx.log(events.ROUND_CAP, round=self.round)
            self._stop()
            return
        self.round += 1
        self.propose = None
        self.coin = None
        approver = self.host.approver(round_instance(self.instance, self.round, 1))
        approver.approve(bit_value(self.est), self._after_first)

    def _after_first(self, vals):
        if self.stopped:
            return
        if len(vals) == 1:
            (self.propose,) = vals
        else:
            self.propose = BOTTOM
        self.host.coin(self.instance, self.round).toss(self._after_coin)

    def _after_coin(self, bit):
        if self.stopped:
            return
        self.coin = bit
        approver = self.host.approver(round_instance(self.instance, self.round, 2))
        approver.approve(self.propose, self._after_second)

    def _after_second(self, vals):
        if self.stopped:
            return
        case, bit = classify_approver_output(vals)
        if case is Case.DECIDE:
            self.est = bit
            if self.decision is None:
                self.decision = bit
                self.decision_round = self.round
                self.ctx.log(DECIDED, instance=self.instance.hex(), round=self.round, value=bit)
                if self._on_decide is not None:
                    self._on_decide(bit, self.round)
                self.coordinator.report_decision(self.ctx.pid, self.round)
        elif case is Case.ADOPT:
            self.est = bit
        elif case is Case.COIN:
            self.est = self.coin
        else:
            self.compromised = True
            self.est = self.coin
            self.ctx.log(events.SAFETY, instance=self.instance.hex(), round=self.round, values=vals)
            logger.warning('approver returned conflicting values %s at round %d', sorted(vals), self.round)
        self._next_round()

    def on_halt(self):
        if not self.stopped and self.round > self.coordinator.halt_round:
            self._stop()

    def _stop(self):
        self.stopped = True
        if self._on_stop is not None:
            self._on_stop()
