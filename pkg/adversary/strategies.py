"""
Built-in delayed-adaptive strategies.

Each strategy names the protocol mechanism it attacks; in conditioned mode
none of them may produce a safety violation.
"""
import logging

from netsim.config import AdversarySpec
from netsim.exceptions import ConfigError
from adversary.base import Strategy
from protocols.binary_ba import ONE, ZERO
from protocols.messages import (
    BOTTOM, ApproverEcho, ApproverInit, CoinFirst, Converge, MvInit, QuorumCertificate,
    elected_message, seal,
)

logger = logging.getLogger(__name__)


def alternative(value):
    """A conflicting value for ``value``: the other bit, or a tagged variant."""
    if value == ZERO:
        return ONE
    if value in (ONE, BOTTOM):
        return ZERO
    return value + b'~equivocation'


class Benign(Strategy):
    name = 'none'
    attacks = 'nothing: reference scheduler only'
    corrupts = False


class Crash(Strategy):
    name = 'crash'
    attacks = 'termination: up to f silent processes from the first step'

    def on_start(self, view):
        self.corrupt_pool(view)


class Equivocate(Strategy):
    """Corrupted committee members send per-recipient conflicting INIT/ECHO values."""
    name = 'equivocate'
    attacks = 'approver validity: no process receives B+1 inits on a value no correct process proposed'

    def __init__(self, spec=None, seed=0):
        super().__init__(spec, seed)
        self._seen = set()

    def on_start(self, view):
        self.corrupt_pool(view)

    def on_broadcast(self, view, sender, payload):
        if isinstance(payload, (ApproverInit, ApproverEcho, MvInit)):
            key = (payload.kind, payload.instance, payload.value)
            if key in self._seen:
                return
            self._seen.add(key)
            for puppet in self.puppets(view):
                self._split(view, puppet, payload)

    def _split(self, view, puppet, payload):
        cls = type(payload)
        halves = []
        for value in (payload.value, alternative(payload.value)):
            halves.append(elected_message(puppet, cls(payload.instance, puppet.pid, value)))
        for to in range(view.n):
            message = halves[to % 2]
            if message is not None:
                puppet.send(to, message)


class QcWithhold(Strategy):
    """
    Corrupts correct converge members right after they send a QC (their
    sent message stays in flight) and stretches delivery of content
    converge messages to the staleness bound.
    """
    name = 'qc_withhold'
    attacks = 'eventual QC: a correct content converge member always delivers its QC'

    def __init__(self, spec=None, seed=0):
        super().__init__(spec, seed)
        self.stretch = self.spec.option('delay', 1, int)
        self._requested = 0

    def on_broadcast(self, view, sender, payload):
        if not isinstance(payload, Converge) or not payload.content:
            return
        if sender in view.pool and self._requested < view.budget and not view.is_corrupted(sender):
            self._requested += 1
            view.corrupt(sender)

    def delay(self, view, envelope):
        payload = envelope.payload
        if self.stretch and isinstance(payload, Converge) and payload.content:
            return view.staleness_bound
        return super().delay(view, envelope)


class CoinSplitter(Strategy):
    """
    Holds back the running-minimum FIRST message from even-numbered
    recipients so the second committee splits over two minima.
    """
    name = 'coin_splitter'
    attacks = 'coin: a common minimum is reached regardless of the schedule'
    corrupts = False

    def __init__(self, spec=None, seed=0):
        super().__init__(spec, seed)
        self._minimum = {}

    def delay(self, view, envelope):
        payload = envelope.payload
        if isinstance(payload, CoinFirst) and payload.vrf is not None:
            key = (payload.instance, payload.round)
            candidate = (payload.vrf.value, payload.sender)
            current = self._minimum.get(key)
            if current is None or candidate <= current:
                self._minimum[key] = candidate
                if envelope.to % 2 == 0:
                    return view.staleness_bound
        return super().delay(view, envelope)


class AlertSkew(Strategy):
    """
    Corrupted converge members claim content with forged QCs: genuine init
    messages relabelled to another value, padded with their own inits.
    """
    name = 'alert_skew'
    attacks = 'alert threshold: count only grows with verified QCs'

    def __init__(self, spec=None, seed=0):
        super().__init__(spec, seed)
        self._observed = {}
        self._attacked = set()

    def on_start(self, view):
        self.corrupt_pool(view)

    def on_broadcast(self, view, sender, payload):
        if isinstance(payload, MvInit):
            self._observed.setdefault(payload.instance, []).append(payload)
        elif isinstance(payload, Converge) and payload.instance not in self._attacked:
            self._attacked.add(payload.instance)
            for puppet in self.puppets(view):
                self._forge(view, puppet, payload.instance)

    def _forge(self, view, puppet, instance):
        W = view.params.W
        observed = self._observed.get(instance, [])
        claimed = alternative(observed[0].value) if observed else b'alert-skew'
        own = seal(puppet, MvInit(instance, puppet.pid, claimed), None)
        inits = tuple(observed[:W])
        inits += (own,) * (W - len(inits))
        message = elected_message(puppet, Converge(instance, puppet.pid, True,
                                                   qc=QuorumCertificate(claimed, inits)))
        if message is not None:
            puppet.broadcast(message)


STRATEGIES = {cls.name: cls for cls in (Benign, Crash, Equivocate, QcWithhold, CoinSplitter, AlertSkew)}


def build_strategy(spec, seed):
    try:
        cls = STRATEGIES[spec.name]
    except KeyError:
        raise ConfigError(f'unknown adversary {spec.name!r}; choose one of {sorted(STRATEGIES)}') from None
    return cls(spec, seed)


def _spec(name, options):
    return AdversarySpec(name, tuple(sorted((key, str(value)) for key, value in options.items())))


def strategy_crash(seed=0, **options):
    return Crash(_spec(Crash.name, options), seed)


def strategy_equivocate(seed=0, **options):
    return Equivocate(_spec(Equivocate.name, options), seed)


def strategy_qc_withhold(seed=0, **options):
    return QcWithhold(_spec(QcWithhold.name, options), seed)


def strategy_coin_splitter(seed=0, **options):
    return CoinSplitter(_spec(CoinSplitter.name, options), seed)


def strategy_alert_skew(seed=0, **options):
    return AlertSkew(_spec(AlertSkew.name, options), seed)
