"""
Per-process protocol host.

A host owns every protocol instance of one correct process, creates them
lazily when the first message for them arrives, and routes deliveries by
message kind. The top-level protocol is chosen by the run configuration.
"""
import logging

from netsim import trace as events
from netsim.config import APPROVER, BINARY, COIN, MULTIVALUED
from protocols.approver import ApproverInstance
from protocols.binary_ba import BinaryAgreement, HaltingCoordinator
from protocols.coin import CoinInstance
from protocols.messages import APPROVER_KINDS, COIN_KINDS, MULTIVALUED_KINDS, Message
from protocols.mv_ba import MultivaluedAgreement

logger = logging.getLogger(__name__)

COIN_ROUND = 1


class Runtime:
    """Harness state shared by the hosts of one run."""

    def __init__(self, network):
        self.network = network
        self.config = network.config
        self.coordinator = HaltingCoordinator(network)

    def host_factory(self, ctx):
        return ProcessHost(ctx, self)


class ProcessHost:
    def __init__(self, ctx, runtime):
        self.ctx = ctx
        self.runtime = runtime
        self.config = runtime.config
        self.approvers = {}
        self.coins = {}
        self.multivalued = {}
        self.top = None
        self.result = None

    # -- instances

    def approver(self, instance):
        try:
            return self.approvers[instance]
        except KeyError:
            machine = self.approvers[instance] = ApproverInstance(self, instance)
            return machine

    def coin(self, instance, round):
        key = (instance, round)
        try:
            return self.coins[key]
        except KeyError:
            machine = self.coins[key] = CoinInstance(self, instance, round)
            return machine

    def mv(self, instance):
        try:
            return self.multivalued[instance]
        except KeyError:
            machine = self.multivalued[instance] = MultivaluedAgreement(
                self, instance, self.runtime.coordinator, self.config.round_cap)
            return machine

    # -- network callbacks

    def start(self):
        instance = self.config.instance
        value = self.config.inputs[self.ctx.pid]
        protocol = self.config.protocol
        if protocol == APPROVER:
            self.top = self.approver(instance)
            self.top.approve(value, self._approved)
        elif protocol == COIN:
            self.top = self.coin(instance, COIN_ROUND)
            self.top.toss(self._tossed)
        elif protocol == BINARY:
            self.top = BinaryAgreement(self, instance, self.runtime.coordinator, self.config.round_cap)
            self.top.start(value, on_decide=self._binary_decided, on_stop=self.maybe_finish)
        elif protocol == MULTIVALUED:
            self.top = self.mv(instance)
            self.top.propose(value, self._mv_decided)

    def on_message(self, envelope):
        message = envelope.payload
        if not isinstance(message, Message) or envelope.sender != getattr(message, 'sender', None):
            self.reject(message, 'sender does not match the authenticated link')
            return
        kind = message.kind
        if kind in APPROVER_KINDS:
            self.approver(message.instance).on_message(message)
        elif kind in COIN_KINDS:
            if not isinstance(message.round, int) or message.round < 1:
                self.reject(message, 'bad coin round')
                return
            self.coin(message.instance, message.round).on_message(message)
        elif kind in MULTIVALUED_KINDS:
            self.mv(message.instance).on_message(message)
        else:
            self.reject(message, 'unknown message kind')

    def reject(self, message, reason):
        self.ctx.log(events.INVALID, msg=getattr(message, 'kind', None), reason=reason,
                     claimed_sender=getattr(message, 'sender', None))

    # -- top-level results

    def _approved(self, values):
        self.result = values
        self.ctx.decide(sorted(values))
        self.ctx.finish()

    def _tossed(self, bit):
        self.result = bit
        self.ctx.decide(bit, round=COIN_ROUND)
        self.ctx.finish()

    def _binary_decided(self, bit, round):
        self.result = bit
        self.ctx.decide(bit, round=round)

    def _mv_decided(self, value):
        self.result = value
        self.ctx.decide(value, round=self.top.binary.decision_round)
        self.maybe_finish()

    def maybe_finish(self):
        protocol = self.config.protocol
        if protocol == BINARY and self.top.stopped:
            self.ctx.finish()
        elif protocol == MULTIVALUED and self.top.binary.stopped:
            # an undecided alert agreement (round cap) ends the process undecided
            if self.top.decision is not None or self.top.binary.decision is None:
                self.ctx.finish()
