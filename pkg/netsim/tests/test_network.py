from django.test import SimpleTestCase

from adversary.strategies import build_strategy
from netsim import trace as events
from netsim.audit import audit_network
from netsim.config import TRACE_FULL, AdversarySpec
from netsim.exceptions import BudgetExceeded, CorruptionRejected, ForgeryRejected
from netsim.network import Network, run
from netsim.tests.helpers import Ping, PingHost, ping_factory, small_config
from netsim.view import Adversary


class StallEverything(Adversary):
    def delay(self, view, envelope):
        return 10 ** 9


class CorruptAfterBroadcast(Adversary):
    """Corrupts each pool member right after its first broadcast."""

    def budget(self, params):
        return params.f

    def on_broadcast(self, view, sender, payload):
        if sender in view.pool and not view.is_corrupted(sender):
            view.corrupt(sender)


class OverBudget(Adversary):
    def budget(self, params):
        return 1

    def on_start(self, view):
        view.corrupt(view.pool[0])
        view.corrupt(next(pid for pid in range(view.n) if pid != view.pool[0]))


class OutsidePool(Adversary):
    def budget(self, params):
        return params.f

    def on_start(self, view):
        view.corrupt(next(pid for pid in range(view.n) if pid not in view.pool))


class RecordingHost(PingHost):
    delays = []

    def on_message(self, envelope):
        self.delays.append(envelope.scheduled - envelope.send_step)
        super().on_message(envelope)


class NetworkRunTest(SimpleTestCase):
    def test_every_process_decides(self):
        """
        Test a benign run of the ping protocol.
        """
        trace = run(small_config(trace_level=TRACE_FULL), ping_factory(4))

        # Assert that every process heard from everyone
        self.assertEqual({pid: record['value'] for pid, record in trace.decisions.items()},
                         {pid: 4 for pid in range(4)})
        self.assertFalse(trace.blocked)

        # Assert that the network contract audits pass
        self.assertEqual(audit_network(trace), [])

        # Assert that every correct send was counted
        self.assertEqual(trace.stats['words_sent_by_correct'], 16)

    def test_same_seed_same_trace(self):
        """
        Test that identical configurations give byte-identical traces.
        """
        config = small_config(seed=9, trace_level=TRACE_FULL)
        spec = AdversarySpec.parse('none:scheduler=random')
        first = run(config, ping_factory(4), build_strategy(spec, config.seed))
        second = run(config, ping_factory(4), build_strategy(spec, config.seed))
        self.assertEqual(first.to_jsonl(), second.to_jsonl())
        self.assertEqual(first.fingerprint(), second.fingerprint())

    def test_blocked_run(self):
        """
        Test that a run whose processes wait forever ends blocked.
        """
        trace = run(small_config(), ping_factory(5))
        self.assertTrue(trace.blocked)
        self.assertEqual(trace.blocked_processes, [0, 1, 2, 3])
        self.assertEqual(len(trace.events_of(events.BLOCKED)), 1)

    def test_delay_is_clamped(self):
        """
        Test that adversarial delays never exceed the staleness bound.
        """
        config = small_config()
        RecordingHost.delays = []
        trace = run(config, lambda ctx: RecordingHost(ctx, 4), StallEverything())
        self.assertFalse(trace.blocked)
        self.assertEqual(set(RecordingHost.delays), {config.staleness_bound})

    def test_corrupted_sender_messages_stay_in_flight(self):
        """
        Test that a process corrupted after sending still has its messages delivered.
        """
        config = small_config(f=1, trace_level=TRACE_FULL)
        trace = run(config, ping_factory(4), CorruptAfterBroadcast())

        # Assert exactly one process was corrupted
        self.assertEqual(len(trace.corrupted), 1)
        (victim,) = trace.corrupted

        # Assert every correct process still heard all four pings
        self.assertEqual(sorted(trace.decisions), [pid for pid in range(4) if pid != victim])
        self.assertTrue(all(record['value'] == 4 for record in trace.decisions.values()))

        # Assert that the audits accept the run
        self.assertEqual(audit_network(trace), [])


class CorruptionRulesTest(SimpleTestCase):
    def test_budget_exceeded(self):
        with self.assertRaises(BudgetExceeded):
            run(small_config(f=1), ping_factory(4), OverBudget())

    def test_outside_pool(self):
        with self.assertRaises(CorruptionRejected):
            run(small_config(n=7, f=2), ping_factory(7), OutsidePool())

    def test_budget_never_exceeds_f(self):
        network = Network(small_config(), ping_factory(4), CorruptAfterBroadcast())
        self.assertEqual(network.budget, 0)
        self.assertEqual(network.pool, ())

    def test_no_access_to_correct_processes(self):
        """
        Test that the adversary can neither read keys of nor speak for a correct process.
        """
        network = Network(small_config(f=1), ping_factory(4), Adversary())
        with self.assertRaises(ForgeryRejected):
            network.view.keypair(0)
        with self.assertRaises(ForgeryRejected):
            network.view.puppet(0)
        with self.assertRaises(ForgeryRejected):
            network.byzantine_send(0, 1, Ping(0))
