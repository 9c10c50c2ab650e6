"""
The approver: graded agreement on at most two proposed values.

INIT committee members broadcast their input. Once B+1 inits for a value w
arrive, members of w's echo committee echo it. The first value with W
echoes is what an ok-committee member vouches for, with the W echoes as
proof. A caller returns the distinct values among the first W valid oks.

Handlers run whether or not the local process has invoked the instance;
only the return needs an invocation.
"""
import logging

from protocols.messages import (
    ApproverEcho, ApproverInit, ApproverOk, ECHO, INIT, OK, OkProof,
    elected_message, valid_member_message,
)

logger = logging.getLogger(__name__)

INVOKE = 'approver.invoke'
RETURN = 'approver.return'
OK_SENT = 'approver.ok'


def verify_ok_proof(checks, ok_proof, instance, W):
    """W distinct, valid echoes on ``ok_proof.value`` for ``instance``."""
    if not isinstance(ok_proof, OkProof) or not isinstance(ok_proof.echoes, tuple):
        return False

    def compute():
        senders = set()
        for echo in ok_proof.echoes:
            if not isinstance(echo, ApproverEcho):
                return False
            if echo.instance != instance or echo.value != ok_proof.value:
                return False
            if not valid_member_message(checks, echo):
                return False
            senders.add(echo.sender)
        return len(senders) >= W

    key = ('ok_proof', instance, ok_proof.value, tuple(echo.digest for echo in ok_proof.echoes
                                                        if isinstance(echo, ApproverEcho)))
    return checks.memo(key, compute)


class ApproverInstance:
    def __init__(self, host, instance):
        self.host = host
        self.ctx = host.ctx
        self.instance = instance
        self.W = host.ctx.params.W
        self.B = host.ctx.params.B

        self.init_senders = {}
        self.echoed = set()
        self.echoes = {}
        self.ok_sent = False
        self.oks = {}
        self.output = None

        self.invoked = False
        self.value = None
        self._callback = None

    def approve(self, value, callback):
        """Invoke with input ``value``; ``callback(values)`` fires once with the returned set."""
        if self.invoked:
            raise RuntimeError('approver instance invoked twice')
        self.invoked = True
        self.value = value
        self._callback = callback
        self.ctx.log(INVOKE, instance=self.instance.hex(), value=value)

        message = elected_message(self.ctx, ApproverInit(self.instance, self.ctx.pid, value))
        if message is not None:
            self.ctx.broadcast(message)
        if self.output is not None:
            self._return()

    def on_message(self, message):
        if not valid_member_message(self.ctx.checks, message):
            self.host.reject(message, 'bad signature or committee proof')
            return
        if message.kind == INIT:
            self._on_init(message)
        elif message.kind == ECHO:
            self._on_echo(message)
        elif message.kind == OK:
            self._on_ok(message)

    def _on_init(self, message):
        senders = self.init_senders.setdefault(message.value, set())
        if message.sender in senders:
            return
        senders.add(message.sender)
        if len(senders) == self.B + 1 and message.value not in self.echoed:
            self.echoed.add(message.value)
            echo = elected_message(self.ctx, ApproverEcho(self.instance, self.ctx.pid, message.value))
            if echo is not None:
                self.ctx.broadcast(echo)

    def _on_echo(self, message):
        received = self.echoes.setdefault(message.value, {})
        if message.sender in received:
            return
        received[message.sender] = message
        if len(received) == self.W and not self.ok_sent:
            ok_proof = OkProof(message.value, tuple(received.values()))
            ok = elected_message(
                self.ctx, ApproverOk(self.instance, self.ctx.pid, message.value, ok_proof=ok_proof))
            if ok is not None:
                self.ok_sent = True
                self.ctx.log(OK_SENT, instance=self.instance.hex(), value=message.value)
                self.ctx.broadcast(ok)

    def _on_ok(self, message):
        if self.output is not None or message.sender in self.oks:
            return
        ok_proof = message.ok_proof
        if not isinstance(ok_proof, OkProof) or ok_proof.value != message.value:
            self.host.reject(message, 'ok value differs from its proof')
            return
        if not verify_ok_proof(self.ctx.checks, ok_proof, self.instance, self.W):
            self.host.reject(message, 'invalid ok proof')
            return
        self.oks[message.sender] = message.value
        if len(self.oks) == self.W:
            self.output = frozenset(self.oks.values())
            if self.invoked:
                self._return()

    def _return(self):
        self.ctx.log(RETURN, instance=self.instance.hex(), values=self.output)
        self.ctx.defer(self._callback, self.output)
