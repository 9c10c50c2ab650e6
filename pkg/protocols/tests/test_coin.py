from django.test import SimpleTestCase

from netsim.config import RunConfig
from netsim.network import Network
from protocols.coin import first_committee_minimum, verify_second
from protocols.messages import CoinFirst, CoinSecond, coin_input, elected_message
from protocols.tests.helpers import decided_values, full_committee_params, run_protocol


class CoinRunTest(SimpleTestCase):
    def test_wait_for_everyone_gives_common_minimum(self):
        """
        Test that with W = n every process outputs the bit of the true minimum.
        """
        for seed in (1, 2, 3):
            network, trace = run_protocol('coin', [0] * 4, params=full_committee_params(W=4), seed=seed)
            _, minimum = first_committee_minimum(network, network.config.instance, 1)

            # Assert all four outputs equal the minimum's low bit
            self.assertEqual(set(decided_values(trace).values()), {minimum & 1})
            self.assertEqual(len(trace.decisions), 4)

    def test_outputs_agree_under_fifo(self):
        _, trace = run_protocol('coin', [0] * 4)
        self.assertEqual(len(set(decided_values(trace).values())), 1)


class VerifySecondTest(SimpleTestCase):
    def setUp(self):
        config = RunConfig(full_committee_params(), 1, 'coin', (0,) * 4)
        self.network = Network(config, None)
        self.instance = b'inst'
        origin = self.network.contexts[1]
        self.vrf = origin.vrf(coin_input(self.instance, 1))
        self.first = elected_message(origin, CoinFirst(self.instance, 1, 1, vrf=self.vrf))

    def _second(self, round=1, **overrides):
        fields = dict(value=self.vrf.value, origin=1, origin_vrf_proof=self.vrf.proof,
                      origin_proof=self.first.proof)
        fields.update(overrides)
        return elected_message(self.network.contexts[2], CoinSecond(self.instance, round, 2, **fields))

    def test_genuine_relay(self):
        self.assertTrue(verify_second(self.network.checks, self._second()))

    def test_forged_relays(self):
        """
        Test that a relayed value must be the origin's VRF output on this round.
        """
        checks = self.network.checks
        self.assertFalse(verify_second(checks, self._second(value=self.vrf.value ^ 1)))
        self.assertFalse(verify_second(checks, self._second(origin=3)))
        self.assertFalse(verify_second(checks, self._second(origin_proof=None)))

    def test_stale_round_replay(self):
        """
        Test that a genuine round-1 minimum replayed into round 2 is rejected.
        """
        checks = self.network.checks

        # Assert the same relay verifies in its own round only
        self.assertTrue(verify_second(checks, self._second(round=1)))
        self.assertFalse(verify_second(checks, self._second(round=2)))
