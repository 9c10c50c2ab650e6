import math

from django.test import SimpleTestCase

from params.engine import (
    SystemParams, coin_common_probability_bound, coin_rate_root, coin_success_rate,
    common_value_bound, derive_params, expected_committee_size, intersection_margins,
)
from params.exceptions import (
    ConstraintViolation, DOutOfRange, EpsilonOutOfRange, InvalidProcessCount,
)


class DeriveParamsTest(SimpleTestCase):
    def test_reference_configuration(self):
        """
        Test the constants derived for n=256, epsilon=0.25, d=0.05.
        """
        p = derive_params(256, 0.25, 0.05)

        # Assert that lambda is 8 ln n
        self.assertAlmostEqual(p.lam, 44.361, places=3)

        # Assert the rounded thresholds and the Byzantine count
        self.assertEqual(p.W, 37)
        self.assertEqual(p.B, 12)
        self.assertEqual(p.f, 21)

        # Assert the coin success rate
        self.assertAlmostEqual(p.rho, 0.018035, places=5)

    def test_larger_configuration(self):
        """
        Test the thresholds for n=1000, epsilon=0.2, d=0.05.
        """
        p = derive_params(1000, 0.2, 0.05)
        self.assertEqual(p.W, 46)
        self.assertEqual(p.B, 15)

    def test_formula_grid(self):
        """
        Test that every valid grid point follows the closed-form formulas.
        """
        for n in (64, 256, 1000, 4096):
            for epsilon in (0.2, 0.25, 0.3):
                lam = expected_committee_size(n)
                d_low = max(1 / lam, 0.0362)
                d_high = epsilon / 3 - 1 / (3 * lam)
                if d_low >= d_high:
                    continue
                d = (d_low + d_high) / 2
                p = derive_params(n, epsilon, d)

                # Assert each derived constant matches its formula
                self.assertEqual(p.W, math.ceil((2 / 3 + 3 * d) * lam))
                self.assertEqual(p.B, math.floor((1 / 3 - d) * lam))
                self.assertEqual(p.f, math.floor((1 / 3 - epsilon) * n))
                self.assertGreater(p.W, 2 * p.B)

    def test_d_below_range(self):
        """
        Test that d under its lower bound is rejected with the bound named.
        """
        with self.assertRaises(DOutOfRange) as caught:
            derive_params(256, 0.25, 0.036)
        self.assertIn('0.0362', str(caught.exception))

    def test_d_above_range(self):
        with self.assertRaises(DOutOfRange):
            derive_params(256, 0.25, 0.08)

    def test_epsilon_out_of_range(self):
        """
        Test both sides of the epsilon interval.
        """
        with self.assertRaises(EpsilonOutOfRange):
            derive_params(256, 0.05, 0.05)
        with self.assertRaises(EpsilonOutOfRange):
            derive_params(256, 0.34, 0.05)

    def test_invalid_process_count(self):
        with self.assertRaises(InvalidProcessCount):
            derive_params(1, 0.25, 0.05)


class MarginsTest(SimpleTestCase):
    def test_reference_margins(self):
        """
        Test the two intersection margins at the reference configuration.
        """
        s5, s6 = intersection_margins(derive_params(256, 0.25, 0.05))
        self.assertAlmostEqual(s5, 15.42, places=2)
        self.assertAlmostEqual(s6, 3.42, places=2)

    def test_margins_positive_across_valid_range(self):
        """
        Test that both margins stay at least 1 wherever the constraints hold.
        """
        for n in (128, 256, 1000, 10000):
            lam = expected_committee_size(n)
            for epsilon in (0.22, 0.27, 0.32):
                d_low = max(1 / lam, 0.0362)
                d_high = epsilon / 3 - 1 / (3 * lam)
                for step in range(1, 5):
                    d = d_low + (d_high - d_low) * step / 5
                    if not d_low < d < d_high:
                        continue
                    s5, s6 = intersection_margins(derive_params(n, epsilon, d))

                    # Assert both intersection arguments have slack
                    self.assertGreaterEqual(s5, 1)
                    self.assertGreaterEqual(s6, 1)


class CoinRateTest(SimpleTestCase):
    def test_root(self):
        """
        Test that rho vanishes at the positive root of its numerator.
        """
        root = coin_rate_root()
        self.assertAlmostEqual(root, 0.036165, places=5)
        self.assertAlmostEqual(coin_success_rate(root), 0.0, places=12)
        self.assertLess(coin_success_rate(0.036), 0)

    def test_rho_increases_with_d(self):
        rates = [coin_success_rate(0.037 + step * 0.01) for step in range(27)]
        self.assertEqual(rates, sorted(rates))

    def test_common_value_bounds(self):
        """
        Test the common-value bound and the clipped probability bound.
        """
        p = derive_params(256, 0.25, 0.05)
        c = common_value_bound(p.d, p.lam)
        self.assertAlmostEqual(c, 0.05 * (11 - 0.15) / 1.45 * p.lam)

        # Assert that fewer than B common values clip to zero
        self.assertEqual(coin_common_probability_bound(p.B - 1, p.B, p.d, p.lam), 0.0)
        self.assertGreater(coin_common_probability_bound(c + p.B, p.B, p.d, p.lam), 0.0)


class CustomParamsTest(SimpleTestCase):
    def test_full_committee_instance(self):
        """
        Test a hand-traceable instance where every process sits on every committee.
        """
        p = SystemParams.custom(4, 4, 3, 0)
        self.assertEqual(p.sampling_probability, 1.0)
        self.assertEqual(p.rho, 0.0)

    def test_structural_chain(self):
        with self.assertRaises(ConstraintViolation):
            SystemParams.custom(4, 4, 2, 1)
        with self.assertRaises(ConstraintViolation):
            SystemParams.custom(4, 4, 5, 0)
