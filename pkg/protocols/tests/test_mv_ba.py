from django.test import SimpleTestCase

from netsim import trace as events
from netsim.config import RunConfig
from netsim.network import Network
from protocols import mv_ba
from protocols.messages import BOTTOM, MvInit, QuorumCertificate, elected_message
from protocols.host import Runtime
from protocols.mv_ba import decide_path, verify_qc
from protocols.tests.helpers import decided_values, full_committee_params, run_protocol


class DecidePathTest(SimpleTestCase):
    def test_paths(self):
        """
        Test the decision once the alert agreement has returned.
        """
        qc = QuorumCertificate(b'v', ())
        self.assertEqual(decide_path(1, qc), BOTTOM)
        self.assertEqual(decide_path(1, None), BOTTOM)
        self.assertEqual(decide_path(0, qc), b'v')

        # Assert that a 0 without a certificate waits
        self.assertIsNone(decide_path(0, None))


class MultivaluedRunTest(SimpleTestCase):
    def test_unanimous_value_is_decided(self):
        """
        Test weak validity: with all processes correct and one input, that input is decided.
        """
        _, trace = run_protocol('multivalued', [b'v'] * 4)

        # Assert every process decided v in the first alert round
        self.assertEqual(decided_values(trace), {pid: 'v' for pid in range(4)})
        self.assertEqual({record['round'] for record in trace.decisions.values()}, {1})

        # Assert every process sent a content converge
        converges = trace.events_of(mv_ba.CONVERGE_SENT)
        self.assertEqual(len(converges), 4)
        self.assertTrue(all(event['annotations']['content'] for event in converges))
        self.assertFalse(trace.blocked)

        # Assert every process held a verified certificate from a converge member
        held = trace.events_of(mv_ba.QC_HELD)
        self.assertEqual(sorted(event['from'] for event in held), [0, 1, 2, 3])
        self.assertTrue(all(event['annotations']['origin'] in range(4) for event in held))
        self.assertTrue(all(event['annotations']['value'] == 'v' for event in held))

    def test_mixed_inputs_decide_default(self):
        """
        Test that mixed first inits raise the alert and decide the default value.
        """
        _, trace = run_protocol('multivalued', [b'a', b'b', b'a', b'b'])
        self.assertEqual(decided_values(trace), {pid: BOTTOM.decode('utf-8') for pid in range(4)})
        alerts = [event['annotations']['alert'] for event in trace.events_of(mv_ba.ALERT)]
        self.assertEqual(alerts, [True] * 4)

    def test_reserved_input_rejected(self):
        """
        Test that the reserved default value cannot be proposed.
        """
        network = Network(RunConfig(full_committee_params(), 1, 'multivalued', (b'v',) * 4), None)
        host = Runtime(network).host_factory(network.contexts[0])
        with self.assertRaises(ValueError):
            host.mv(b'inst').propose(BOTTOM, lambda value: None)

    def test_no_invalid_messages(self):
        _, trace = run_protocol('multivalued', [b'v'] * 4)
        self.assertEqual(trace.events_of(events.INVALID), [])


class VerifyQcTest(SimpleTestCase):
    def setUp(self):
        config = RunConfig(full_committee_params(), 1, 'multivalued', (b'v',) * 4)
        self.network = Network(config, None)
        self.instance = b'inst'

    def _init(self, pid, value=b'v'):
        return elected_message(self.network.contexts[pid], MvInit(self.instance, pid, value))

    def test_valid_certificate(self):
        qc = QuorumCertificate(b'v', tuple(self._init(pid) for pid in range(3)))
        self.assertTrue(verify_qc(self.network.checks, qc, self.instance, 3))

    def test_forged_certificates(self):
        """
        Test that relabelled, short and duplicated certificates are rejected.
        """
        checks = self.network.checks
        relabelled = QuorumCertificate(b'w', tuple(self._init(pid) for pid in range(3)))
        short = QuorumCertificate(b'v', (self._init(0), self._init(1)))
        duplicated = QuorumCertificate(b'v', (self._init(0), self._init(0), self._init(1)))
        self.assertFalse(verify_qc(checks, relabelled, self.instance, 3))
        self.assertFalse(verify_qc(checks, short, self.instance, 3))
        self.assertFalse(verify_qc(checks, duplicated, self.instance, 3))
        self.assertFalse(verify_qc(checks, None, self.instance, 3))
