"""
Two-phase VRF-minimum shared coin.

Phase one: first-committee members broadcast their VRF output on the round.
Phase two: second-committee members wait for W valid FIRST messages and relay
the smallest value with its provenance. Every caller waits for W valid
SECOND messages and outputs the least significant bit of their minimum.
Minima compare raw VRF integers, ties broken by originating process id.
"""
import logging

from committee.keys import VrfOutput
from committee.sampling import vrf_eval
from protocols.messages import (
    FIRST, SECOND, CoinFirst, CoinSecond, coin_first_tag, coin_input,
    elected_message, valid_member_message,
)

logger = logging.getLogger(__name__)

PHASE_ONE = 'coin.phase1'
OUTPUT = 'coin.output'


def verify_second(checks, message):
    """The relayed value is a genuine VRF output of a first-committee member for this round."""
    if not isinstance(message, CoinSecond):
        return False

    def compute():
        origin = message.origin
        if not isinstance(origin, int) or not 0 <= origin < checks.params.n:
            return False
        if not isinstance(message.value, int) or not isinstance(message.origin_vrf_proof, bytes):
            return False
        first_tag = coin_first_tag(message.instance, message.round)
        if not checks.committee_val(first_tag, origin, message.origin_proof):
            return False
        output = VrfOutput(message.value, message.origin_vrf_proof)
        return checks.vrf_verify(origin, coin_input(message.instance, message.round), output)

    return checks.memo(('second', message.digest), compute)


def _first_key(message):
    return message.vrf.value, message.sender


def _second_key(message):
    return message.value, message.origin


class CoinInstance:
    def __init__(self, host, instance, round):
        self.host = host
        self.ctx = host.ctx
        self.instance = instance
        self.round = round
        self.W = host.ctx.params.W

        self.firsts = {}
        self.seconds = {}
        self.second_sent = False
        self.relayed = None
        self.output = None

        self.invoked = False
        self._callback = None

    def toss(self, callback):
        """whp_coin(r): ``callback(bit)`` fires once with the coin's output."""
        if self.invoked:
            raise RuntimeError('coin instance invoked twice')
        self.invoked = True
        self._callback = callback

        vrf = self.ctx.vrf(coin_input(self.instance, self.round))
        first = elected_message(self.ctx, CoinFirst(self.instance, self.round, self.ctx.pid, vrf=vrf))
        if first is not None:
            self.ctx.broadcast(first)
        self._maybe_relay()
        self._maybe_output()

    def on_message(self, message):
        if not valid_member_message(self.ctx.checks, message):
            self.host.reject(message, 'bad signature or committee proof')
            return
        if message.kind == FIRST:
            self._on_first(message)
        elif message.kind == SECOND:
            self._on_second(message)

    def _on_first(self, message):
        if message.sender in self.firsts or len(self.firsts) >= self.W:
            return
        vrf = message.vrf
        if not isinstance(vrf, VrfOutput) or not self.ctx.checks.vrf_verify(
                message.sender, coin_input(self.instance, self.round), vrf):
            self.host.reject(message, 'invalid VRF output')
            return
        self.firsts[message.sender] = message
        self._maybe_relay()

    def _maybe_relay(self):
        if not self.invoked or self.second_sent or len(self.firsts) < self.W:
            return
        self.second_sent = True
        best = min(self.firsts.values(), key=_first_key)
        second = elected_message(self.ctx, CoinSecond(
            self.instance, self.round, self.ctx.pid,
            value=best.vrf.value, origin=best.sender,
            origin_vrf_proof=best.vrf.proof, origin_proof=best.proof,
        ))
        if second is None:
            return
        self.relayed = best.sender
        self.ctx.log(PHASE_ONE, instance=self.instance.hex(), round=self.round,
                     origins=sorted(self.firsts), minimum=best.sender)
        self.ctx.broadcast(second)

    def _on_second(self, message):
        if message.sender in self.seconds or len(self.seconds) >= self.W:
            return
        if not verify_second(self.ctx.checks, message):
            self.host.reject(message, 'second value without valid provenance')
            return
        self.seconds[message.sender] = message
        self._maybe_output()

    def _maybe_output(self):
        if not self.invoked or self.output is not None or len(self.seconds) < self.W:
            return
        best = min(self.seconds.values(), key=_second_key)
        self.output = best.value & 1
        self.ctx.log(OUTPUT, instance=self.instance.hex(), round=self.round,
                     bit=self.output, origin=best.origin)
        self.ctx.defer(self._callback, self.output)


def first_committee_minimum(network, instance, round):
    """
    (origin, value) of the smallest coin VRF value over the whole first
    committee of ``round``, computed by the harness from the key registry.
    """
    committee = network.guard.resolve(coin_first_tag(instance, round))
    data = coin_input(instance, round)
    best = None
    for pid in committee.members:
        value = vrf_eval(network.registry.keypair(pid), data).value
        if best is None or (value, pid) < best[::-1]:
            best = (pid, value)
    return best
