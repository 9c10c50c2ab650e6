from dataclasses import replace

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from committee.keys import KeyRegistry
from committee.sampling import committee_val, sample, sign, vrf_eval
from committee.tags import committee_tag, encode_parts
from params.engine import derive_params


class SignatureTest(SimpleTestCase):
    def test_sign_and_verify(self):
        """
        Test signatures under both backends.
        """
        for scheme in ('hmac', 'ed25519'):
            registry = KeyRegistry(1, 4, scheme)
            verifier = registry.verifier()
            signature = sign(registry.keypair(2), b'payload')

            # Assert the signer's own signature verifies
            self.assertTrue(verifier.verify_from(2, b'payload', signature))

            # Assert a different payload or a different claimed signer fails
            self.assertFalse(verifier.verify_from(2, b'other', signature))
            self.assertFalse(verifier.verify_from(1, b'payload', signature))
            self.assertFalse(verifier.verify_from(9, b'payload', signature))

    def test_tampered_tag(self):
        registry = KeyRegistry(1, 4)
        signature = sign(registry.keypair(0), b'payload')
        forged = replace(signature, tag=bytes(32))
        self.assertFalse(registry.verifier().verify_from(0, b'payload', forged))

    def test_keys_follow_the_seed(self):
        """
        Test that the registry is a function of (seed, process id).
        """
        first = KeyRegistry(3, 4)
        second = KeyRegistry(3, 4)
        other = KeyRegistry(4, 4)
        self.assertEqual(first.public_id(1), second.public_id(1))
        self.assertNotEqual(first.public_id(1), other.public_id(1))


class CommitteeValTest(SimpleTestCase):
    def setUp(self):
        self.registry = KeyRegistry(5, 4)
        self.verifier = self.registry.verifier()
        self.tag = committee_tag('approver', b'i', 'init')

    def test_full_committee(self):
        """
        Test that lambda = n elects every process with a valid proof.
        """
        for pid in range(4):
            elected, proof = sample(self.registry.keypair(pid), self.tag, 4, 4)
            self.assertTrue(elected)
            self.assertTrue(committee_val(self.verifier, self.tag, 4, pid, proof))

    def test_empty_committee(self):
        """
        Test that lambda = 0 elects nobody and no proof verifies.
        """
        elected, proof = sample(self.registry.keypair(0), self.tag, 0, 4)
        self.assertFalse(elected)
        self.assertFalse(committee_val(self.verifier, self.tag, 0, 0, proof))

    def test_proof_is_bound_to_its_tag_and_owner(self):
        """
        Test domain separation: a proof for one committee string or process
        does not verify for another.
        """
        _, proof = sample(self.registry.keypair(1), self.tag, 4, 4)
        other_tag = committee_tag('approver', b'i', 'ok')

        # Assert another committee string is rejected
        self.assertFalse(committee_val(self.verifier, other_tag, 4, 1, proof))

        # Assert another process id is rejected
        self.assertFalse(committee_val(self.verifier, self.tag, 4, 2, proof))

        # Assert a tampered VRF proof is rejected
        tampered = replace(proof, proof=bytes(len(proof.proof)))
        self.assertFalse(committee_val(self.verifier, self.tag, 4, 1, tampered))

    def test_vrf_low_bit_is_balanced(self):
        """
        Test that the VRF's least significant bit is close to uniform.
        """
        key = KeyRegistry(11, 1).keypair(0)
        samples = 4000 if settings.SQBA_SLOW_TESTS else 2000
        ones = sum(vrf_eval(key, encode_parts('coin', index)).value & 1 for index in range(samples))
        self.assertLess(abs(ones / samples - 0.5), 0.05)

    def test_vrf_verifies(self):
        key = self.registry.keypair(3)
        output = vrf_eval(key, b'round-1')
        self.assertTrue(self.verifier.vrf_verify(3, b'round-1', output))
        self.assertFalse(self.verifier.vrf_verify(2, b'round-1', output))


class CommitteeSizeTest(SimpleTestCase):
    def test_mean_size_is_lambda(self):
        """
        Test that sampled committees have mean size lambda at n=256.
        """
        params = derive_params(256, 0.25, 0.05)
        registry = KeyRegistry(2, params.n)
        tags = 1000 if settings.SQBA_SLOW_TESTS else 300
        sizes = np.array([
            sum(sample(registry.keypair(pid), committee_tag('approver', encode_parts('size', index), 'init'),
                       params.lam, params.n)[0]
                for pid in range(params.n))
            for index in range(tags)
        ], dtype=float)
        p = params.lam / params.n
        stderr = np.sqrt(params.n * p * (1 - p) / tags)

        # Assert the mean is lambda within four standard errors
        self.assertLess(abs(sizes.mean() - params.lam), 4 * stderr)

        # Assert the spread matches a binomial draw
        self.assertLess(abs(sizes.std() / np.sqrt(params.n * p * (1 - p)) - 1), 0.2)
