"""
Keys, signatures, VRF outputs and committee proofs.

The KeyRegistry is the trusted PKI of a run: it derives every process's
key from the run seed. Processes get their own KeyPair; everyone else
(processes, the adversary) only gets a Verifier.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from committee.backends import get_backend
from committee.tags import digest, encode_parts

VRF_WIDTH = 256
VRF_RANGE = 1 << VRF_WIDTH


@dataclass(frozen=True)
class KeyPair:
    process_id: int
    secret_seed: bytes = field(repr=False)
    public_id: bytes
    scheme: str = 'hmac'


@dataclass(frozen=True)
class Signature:
    signer: int
    payload_digest: bytes
    tag: bytes

    def encode(self):
        return encode_parts(self.signer, self.payload_digest, self.tag)


@dataclass(frozen=True)
class VrfOutput:
    value: int
    proof: bytes


@dataclass(frozen=True)
class CommitteeProof:
    """Election proof sigma_i for committee string ``tag_string``."""
    process_id: int
    tag_string: bytes
    threshold: float
    proof: bytes

    def encode(self):
        return encode_parts(self.process_id, self.tag_string, repr(self.threshold), self.proof)


def below_threshold(value, lam, n):
    """value / 2^256 < lambda / n, evaluated exactly."""
    return Fraction(value, VRF_RANGE) < Fraction(lam) / n


class KeyRegistry:
    """
    Deterministic PKI for one run.

    Key material is a function of (seed, process id), so identical seeds
    reproduce identical signatures, VRF values and elections.
    """

    def __init__(self, seed, n, scheme='hmac'):
        self.n = n
        self.scheme = scheme
        self.backend = get_backend(scheme)
        self._keys = []
        self._material = []
        for pid in range(n):
            secret = digest(encode_parts('sqba/key', seed, pid))
            public_id = self.backend.public_id(secret)
            self._keys.append(KeyPair(pid, secret, public_id, scheme))
            self._material.append(self.backend.verifier_material(secret))
        self._by_public = {key.public_id: key.process_id for key in self._keys}
        if len(self._by_public) != n:
            raise ValueError('key derivation produced a duplicate public id')
        self._verifier = Verifier(self)

    def keypair(self, pid):
        return self._keys[pid]

    def public_id(self, pid):
        return self._keys[pid].public_id

    def verifier(self):
        return self._verifier


class Verifier:
    """
    Public verification functions: signatures, VRF proofs, committee-val.

    Results are memoised; every check is a pure function of public data.
    """

    def __init__(self, registry):
        self.n = registry.n
        self._registry = registry
        self._backend = registry.backend
        self._memo = {}

    def public_id(self, pid):
        return self._registry.public_id(pid)

    def process_of(self, public_id):
        return self._registry._by_public.get(public_id)

    def memo(self, key, compute):
        try:
            return self._memo[key]
        except KeyError:
            result = self._memo[key] = bool(compute())
            return result

    def verify(self, public_id, payload, sig):
        pid = self.process_of(public_id)
        if pid is None or not isinstance(sig, Signature) or sig.signer != pid:
            return False
        payload_digest = digest(payload)
        if sig.payload_digest != payload_digest:
            return False
        return self.memo(
            ('sig', pid, payload_digest, sig.tag),
            lambda: self._backend.check(self._registry._material[pid], payload_digest, sig.tag),
        )

    def verify_from(self, pid, payload, sig):
        if not 0 <= pid < self.n:
            return False
        return self.verify(self.public_id(pid), payload, sig)

    def vrf_verify(self, pid, data, output):
        if not 0 <= pid < self.n or not isinstance(output, VrfOutput):
            return False
        if output.value != self._backend.vrf_value(output.proof):
            return False
        return self.memo(
            ('vrf', pid, data, output.proof),
            lambda: self._backend.vrf_check(self._registry._material[pid], data, output.proof),
        )

    def committee_val(self, tag, lam, pid, proof):
        """True iff ``proof`` shows ``pid`` was sampled to C(tag, lam)."""
        if not isinstance(proof, CommitteeProof):
            return False
        if proof.process_id != pid or proof.tag_string != tag or proof.threshold != lam:
            return False
        if not isinstance(proof.proof, bytes) or not 0 <= pid < self.n:
            return False
        value = self._backend.vrf_value(proof.proof)
        if not below_threshold(value, lam, self.n):
            return False
        return self.vrf_verify(pid, tag, VrfOutput(value, proof.proof))
