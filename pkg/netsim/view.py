"""
What each party of a run is allowed to touch.

Correct processes act through a ProcessContext (their own keys, the network,
the public checks). The adversary acts through an AdversaryView: public
parameters, public verification, the corruption set, and Puppets for the
processes it has corrupted. Neither ever sees the KeyRegistry itself.
"""
from committee.sampling import sample, sign, vrf_eval
from netsim.exceptions import ForgeryRejected


class PublicChecks:
    """Signature, VRF and committee verification anyone may run."""

    def __init__(self, params, verifier, guard):
        self.params = params
        self.verifier = verifier
        self.guard = guard

    def verify(self, pid, body, signature):
        return self.verifier.verify_from(pid, body, signature)

    def committee_val(self, tag, pid, proof):
        effective = self.guard.effective_tag(tag)
        return self.verifier.committee_val(effective, self.params.lam, pid, proof)

    def vrf_verify(self, pid, data, output):
        return self.verifier.vrf_verify(pid, data, output)

    def memo(self, key, compute):
        return self.verifier.memo(key, compute)


class Actor:
    """Signing, sampling and sending on behalf of one process id."""

    def __init__(self, network, pid):
        self._network = network
        self.pid = pid
        self.params = network.params
        self.checks = network.checks

    @property
    def keypair(self):
        raise NotImplementedError

    def sign(self, body):
        return sign(self.keypair, body)

    def vrf(self, data):
        return vrf_eval(self.keypair, data)

    def sample(self, tag):
        """(elected, proof) for committee string ``tag``."""
        effective = self._network.guard.effective_tag(tag)
        return sample(self.keypair, effective, self.params.lam, self.params.n)

    @property
    def step(self):
        return self._network.clock


class ProcessContext(Actor):
    def __init__(self, network, pid):
        super().__init__(network, pid)
        self._keypair = network.registry.keypair(pid)
        self.finished = False

    @property
    def keypair(self):
        return self._keypair

    @property
    def correct(self):
        return not self._network.is_corrupted(self.pid)

    def send(self, to, payload):
        self._network.process_send(self.pid, to, payload)

    def broadcast(self, payload):
        self._network.process_broadcast(self.pid, payload)

    def defer(self, callback, *args):
        """Run ``callback`` once the current handler has returned."""
        self._network.defer(self.pid, callback, *args)

    def log(self, kind, **annotations):
        self._network.trace.log(self._network.clock, kind, self.pid, **annotations)

    def decide(self, value, **extra):
        self._network.trace.decide(self._network.clock, self.pid, value, **extra)

    def finish(self):
        if not self.finished:
            self.finished = True
            self._network.finish(self.pid)


class Puppet(Actor):
    """A corrupted process, driven by the adversary."""

    def __init__(self, network, view, pid):
        super().__init__(network, pid)
        self._view = view

    @property
    def keypair(self):
        return self._view.keypair(self.pid)

    def send(self, to, payload):
        self._network.byzantine_send(self.pid, to, payload)

    def broadcast(self, payload):
        self._network.byzantine_broadcast(self.pid, payload)


class AdversaryView:
    def __init__(self, network):
        self._network = network
        self.params = network.params
        self.n = network.params.n
        self.f = network.params.f
        self.checks = network.checks

    @property
    def budget(self):
        return self._network.budget

    @property
    def pool(self):
        return self._network.pool

    @property
    def corrupted(self):
        return frozenset(self._network.corrupted)

    @property
    def step(self):
        return self._network.clock

    @property
    def staleness_bound(self):
        return self._network.staleness_bound

    def is_corrupted(self, pid):
        return self._network.is_corrupted(pid)

    def correct(self):
        return self._network.correct_processes()

    def corrupt(self, pid):
        """Take over ``pid`` from the next step on."""
        self._network.request_corruption(pid)

    def keypair(self, pid):
        if not self._network.is_corrupted(pid):
            raise ForgeryRejected(f'process {pid} is correct; its keys are not available')
        return self._network.registry.keypair(pid)

    def puppet(self, pid):
        if not self._network.is_corrupted(pid):
            raise ForgeryRejected(f'cannot act as correct process {pid}')
        return Puppet(self._network, self, pid)

    def effective_tag(self, tag):
        return self._network.guard.effective_tag(tag)


class Adversary:
    """
    The benign adversary: no corruptions, every envelope delivered in send
    order. Strategies override the hooks they need.
    """
    name = 'none'

    def budget(self, params):
        return 0

    def on_start(self, view):
        pass

    def delay(self, view, envelope):
        return 0

    def on_broadcast(self, view, sender, payload):
        pass

    def on_byzantine_receive(self, view, envelope):
        pass

    def on_corrupt(self, view, pid):
        pass
