"""
Deterministic discrete-event asynchronous network.

Logical time is a single tick counter advanced by every send, delivery and
corruption. The adversary assigns each envelope a delay at send time
(clamped to the staleness bound); pending envelopes are delivered in
(send_step + delay, sequence) order. Envelopes already sent by a process
stay in flight unchanged when it is corrupted.
"""
import heapq
import logging
import random
from collections import deque

from committee.keys import KeyRegistry
from committee.tags import derive_seed
from netsim import trace as events
from netsim.conditioning import CommitteeGuard
from netsim.envelope import MessageEnvelope
from netsim.exceptions import BudgetExceeded, ConfigError, CorruptionRejected, ForgeryRejected
from netsim.trace import RunTrace
from netsim.view import Adversary, AdversaryView, ProcessContext, PublicChecks

logger = logging.getLogger(__name__)


class Network:
    def __init__(self, config, process_factory, adversary=None):
        self.config = config
        self.params = config.params
        self.adversary = adversary if adversary is not None else Adversary()
        self.process_factory = process_factory
        self.trace = RunTrace(config)
        self.staleness_bound = config.staleness_bound

        n = self.params.n
        try:
            self.registry = KeyRegistry(config.seed, n, config.crypto)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        self.budget = max(0, min(self.adversary.budget(self.params), self.params.f))
        pool_rng = random.Random(derive_seed(config.seed, 'pool'))
        self.pool = tuple(sorted(pool_rng.sample(range(n), self.budget)))

        self.guard = CommitteeGuard(
            self.params, self.registry, self.pool, config.sampling_mode,
            config.max_rejections, trace=self.trace,
        )
        self.checks = PublicChecks(self.params, self.registry.verifier(), self.guard)
        self.view = AdversaryView(self)

        self.clock = 0
        self._seq = 0
        self._heap = []
        self._deferred = deque()
        self._pending_corruptions = []
        self._in_handler = False
        self._corruption_listeners = []

        self.corrupted = {}
        self.contexts = [ProcessContext(self, pid) for pid in range(n)]
        self.hosts = {}
        self._unfinished = set()

    # -- public state

    def is_corrupted(self, pid):
        return pid in self.corrupted

    def correct_processes(self):
        return [pid for pid in range(self.params.n) if pid not in self.corrupted]

    def add_corruption_listener(self, callback):
        self._corruption_listeners.append(callback)

    # -- sending

    def _tick(self):
        self.clock += 1
        return self.clock

    def _push(self, sender, to, payload, correct, words):
        if not 0 <= to < self.params.n:
            raise ValueError(f'no process {to}')
        step = self._tick()
        envelope = MessageEnvelope(seq=self._seq, sender=sender, to=to, payload=payload,
                                   send_step=step, scheduled=step, sender_correct=correct)
        self._seq += 1
        delay = int(self.adversary.delay(self.view, envelope))
        envelope.scheduled = step + max(0, min(delay, self.staleness_bound))
        heapq.heappush(self._heap, (envelope.scheduled, envelope.seq, envelope))
        if correct:
            self.trace.stats['words_sent_by_correct'] += words
            self.trace.messages_by_kind[payload.kind] += 1
        self.trace.stats['envelopes'] += 1
        self.trace.log_envelope(events.SEND, step, envelope)
        return envelope

    def process_send(self, pid, to, payload):
        if pid in self.corrupted:
            return
        self._push(pid, to, payload, True, payload.words(self.params.W))

    def process_broadcast(self, pid, payload):
        if pid in self.corrupted:
            return
        words = payload.words(self.params.W)
        for to in range(self.params.n):
            self._push(pid, to, payload, True, words)
        self._with_handler(self.adversary.on_broadcast, self.view, pid, payload)

    def byzantine_send(self, pid, to, payload):
        if pid not in self.corrupted:
            raise ForgeryRejected(f'process {pid} is correct; the adversary cannot send as it')
        self._push(pid, to, payload, False, 0)

    def byzantine_broadcast(self, pid, payload):
        for to in range(self.params.n):
            self.byzantine_send(pid, to, payload)

    # -- corruption

    def request_corruption(self, pid):
        if not 0 <= pid < self.params.n:
            raise CorruptionRejected(f'no process {pid}')
        if pid in self.corrupted or pid in self._pending_corruptions:
            return
        if len(self.corrupted) + len(self._pending_corruptions) >= self.budget:
            raise BudgetExceeded(
                f'corruption budget of {self.budget} (f={self.params.f}) is exhausted')
        if pid not in self.pool:
            raise CorruptionRejected(f'process {pid} is outside the corruption pool {list(self.pool)}')
        self._pending_corruptions.append(pid)
        if not self._in_handler:
            self._apply_corruptions()

    def _apply_corruptions(self):
        while self._pending_corruptions:
            pid = self._pending_corruptions.pop(0)
            step = self._tick()
            self.corrupted[pid] = step
            self.trace.corrupted[pid] = step
            self._unfinished.discard(pid)
            self.trace.log(step, events.CORRUPT, pid)
            logger.debug('process %d corrupted at step %d', pid, step)
            self._with_handler(self.adversary.on_corrupt, self.view, pid)
            for listener in self._corruption_listeners:
                listener(pid)

    # -- handlers

    def defer(self, pid, callback, *args):
        self._deferred.append((pid, callback, args))

    def finish(self, pid):
        if pid in self._unfinished:
            self._unfinished.discard(pid)
            self.trace.log(self.clock, events.FINISH, pid)

    def _with_handler(self, callback, *args):
        nested = self._in_handler
        self._in_handler = True
        try:
            callback(*args)
        finally:
            self._in_handler = nested

    def _settle(self):
        while self._deferred or self._pending_corruptions:
            while self._deferred:
                pid, callback, args = self._deferred.popleft()
                if pid in self.corrupted:
                    continue
                self._with_handler(callback, *args)
            self._apply_corruptions()

    def _deliver(self, envelope):
        envelope.delivery_step = self._tick()
        self.trace.stats['deliveries'] += 1
        self.trace.log_envelope(events.DELIVER, envelope.delivery_step, envelope)
        if envelope.to in self.corrupted:
            self._with_handler(self.adversary.on_byzantine_receive, self.view, envelope)
        else:
            self._with_handler(self.hosts[envelope.to].on_message, envelope)
        self._settle()

    # -- main loop

    def run(self):
        config = self.config
        logger.info('run start: protocol=%s n=%d seed=%d adversary=%s mode=%s',
                    config.protocol, self.params.n, config.seed, config.adversary, config.sampling_mode)

        self._with_handler(self.adversary.on_start, self.view)
        self._apply_corruptions()

        for pid in self.correct_processes():
            self.hosts[pid] = self.process_factory(self.contexts[pid])
            self._unfinished.add(pid)
        for pid in sorted(self.hosts):
            if pid not in self.corrupted:
                self._with_handler(self.hosts[pid].start)
                self._settle()

        while self._heap and self._unfinished:
            _, _, envelope = heapq.heappop(self._heap)
            self._deliver(envelope)

        self._close()
        return self.trace

    def _close(self):
        trace = self.trace
        if self._unfinished:
            trace.blocked = True
            trace.blocked_processes = sorted(self._unfinished)
            trace.log(self.clock, events.BLOCKED, processes=trace.blocked_processes)
            if self.guard.conditioned:
                logger.warning('conditioned run blocked: seed=%d processes=%s',
                               self.config.seed, trace.blocked_processes)
            else:
                logger.debug('faithful run blocked: seed=%d processes=%s',
                             self.config.seed, trace.blocked_processes)
        if trace.full:
            for _, _, envelope in sorted(self._heap, key=lambda item: item[:2]):
                trace.log_envelope(events.UNDELIVERED, self.clock, envelope)
        trace.stats['steps'] = self.clock
        trace.stats['in_flight'] = len(self._heap)
        trace.stats['corruptions'] = len(self.corrupted)
        trace.stats['rejections'] = self.guard.rejections
        logger.info('run finished: seed=%d steps=%d outcome=%s', self.config.seed, self.clock, trace.outcome)


def run(config, process_factory, adversary=None):
    """Execute one run and return its RunTrace."""
    return Network(config, process_factory, adversary).run()
