"""
Multivalued weak Byzantine Agreement through an init committee, a converge
committee with quorum certificates, an alert bit and a binary agreement.

Content converge messages only count once their certificate verifies; a
Byzantine member cannot raise ``count`` with a fabricated QC.
"""
import logging

from committee.tags import sub_instance
from protocols.binary_ba import BinaryAgreement
from protocols.messages import (
    BOTTOM, CONVERGE, MV_INIT, Converge, MvInit, QuorumCertificate,
    elected_message, valid_member_message,
)

logger = logging.getLogger(__name__)

ALERT = 'mv.alert'
CONVERGE_SENT = 'mv.converge'
WAITING = 'mv.waiting'
QC_HELD = 'mv.qc'
ALERT_LABEL = 'alert'


def verify_qc(checks, qc, instance, W):
    """W distinct init-committee members signed init on ``qc.value`` in ``instance``."""
    if not isinstance(qc, QuorumCertificate) or not isinstance(qc.inits, tuple):
        return False

    def compute():
        senders = set()
        for init in qc.inits:
            if not isinstance(init, MvInit):
                return False
            if init.instance != instance or init.value != qc.value:
                return False
            if not valid_member_message(checks, init):
                return False
            senders.add(init.sender)
        return len(senders) >= W

    key = ('qc', instance, qc.value, tuple(init.digest for init in qc.inits if isinstance(init, MvInit)))
    return checks.memo(key, compute)


def decide_path(binary_result, held_qc):
    """
    Decision once the alert agreement returned: BOTTOM on 1, otherwise the
    value of a held valid QC, or None while no such QC has arrived yet.
    """
    if binary_result == 1:
        return BOTTOM
    if held_qc is None:
        return None
    return held_qc.value


class MultivaluedAgreement:
    def __init__(self, host, instance, coordinator, round_cap):
        self.host = host
        self.ctx = host.ctx
        self.instance = instance
        self.W = host.ctx.params.W
        self.B = host.ctx.params.B

        self.inits = {}
        self.init_values = set()
        self.converge_checked = False
        self.converge_set = set()
        self.count = 0
        self.alert = None
        self.held_qc = None
        self.binary_result = None
        self.decision = None

        self.binary = BinaryAgreement(host, sub_instance(instance, ALERT_LABEL), coordinator, round_cap)
        self.invoked = False
        self.value = None
        self._callback = None

    def propose(self, value, callback):
        """mv_ba(v_i): ``callback(decision)`` fires once with a value or BOTTOM."""
        if self.invoked:
            raise RuntimeError('multivalued instance invoked twice')
        if value == BOTTOM:
            raise ValueError('the reserved default value is not a legal input')
        self.invoked = True
        self.value = value
        self._callback = callback

        init = elected_message(self.ctx, MvInit(self.instance, self.ctx.pid, value))
        if init is not None:
            self.ctx.broadcast(init)
        self._maybe_converge()

    def on_message(self, message):
        if not valid_member_message(self.ctx.checks, message):
            self.host.reject(message, 'bad signature or committee proof')
            return
        if message.kind == MV_INIT:
            self._on_init(message)
        elif message.kind == CONVERGE:
            self._on_converge(message)

    def _on_init(self, message):
        if message.sender in self.inits:
            return
        self.inits[message.sender] = message
        if len(self.inits) <= self.W:
            self.init_values.add(message.value)
        self._maybe_converge()

    def _maybe_converge(self):
        if not self.invoked or self.converge_checked or len(self.inits) < self.W:
            return
        self.converge_checked = True
        first_w = tuple(self.inits.values())[:self.W]
        if self.init_values == {self.value}:
            message = Converge(self.instance, self.ctx.pid, True,
                               qc=QuorumCertificate(self.value, first_w))
        else:
            message = Converge(self.instance, self.ctx.pid, False)
        converge = elected_message(self.ctx, message)
        if converge is not None:
            self.ctx.log(CONVERGE_SENT, content=converge.content,
                         value=self.value if converge.content else None)
            self.ctx.broadcast(converge)

    def _on_converge(self, message):
        if message.sender in self.converge_set:
            return
        self.converge_set.add(message.sender)
        if message.content:
            if verify_qc(self.ctx.checks, message.qc, self.instance, self.W):
                self.count += 1
                if self.held_qc is None:
                    self.held_qc = message.qc
                    self.ctx.log(QC_HELD, value=message.qc.value, origin=message.sender)
            else:
                self.host.reject(message, 'forged quorum certificate')
        if len(self.converge_set) == self.W and self.alert is None:
            self.alert = self.count < self.B + 1
            self.ctx.log(ALERT, count=self.count, alert=self.alert)
            self.binary.start(1 if self.alert else 0, on_decide=self._on_binary_decide,
                              on_stop=self.host.maybe_finish)
        elif self.binary_result is not None and self.decision is None:
            self._decide()

    def _on_binary_decide(self, bit, round):
        self.binary_result = bit
        if decide_path(bit, self.held_qc) is None:
            self.ctx.log(WAITING, round=round)
        self._decide()

    def _decide(self):
        value = decide_path(self.binary_result, self.held_qc)
        if value is None or self.decision is not None:
            return
        self.decision = value
        self.ctx.defer(self._callback, value)
