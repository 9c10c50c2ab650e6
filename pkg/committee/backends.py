"""
Signature/VRF backends.

``hmac`` is the simulation-grade backend: keyed SHA-256 stands in for both
signatures and the VRF, and verification re-derives the tag with the
secret held by the verifier role. ``ed25519`` produces real signatures;
its VRF value is the hash of the deterministic signature on the input.
"""
from functools import lru_cache

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, hmac
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey, Ed25519PublicKey,
)
from cryptography.hazmat.primitives.constant_time import bytes_eq
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from committee.tags import digest

SIGNATURE_LABEL = b'sig'
VRF_LABEL = b'vrf'


class HmacBackend:
    name = 'hmac'

    def public_id(self, secret):
        return digest(b'sqba/public' + secret)

    def verifier_material(self, secret):
        return secret

    @staticmethod
    def _mac(secret, label, data):
        mac = hmac.HMAC(secret, hashes.SHA256())
        mac.update(label)
        mac.update(data)
        return mac.finalize()

    def sign(self, secret, data):
        return self._mac(secret, SIGNATURE_LABEL, data)

    def check(self, material, data, tag):
        if not isinstance(tag, bytes):
            return False
        return bytes_eq(self._mac(material, SIGNATURE_LABEL, data), tag)

    def vrf_prove(self, secret, data):
        return self._mac(secret, VRF_LABEL, data)

    def vrf_check(self, material, data, proof):
        if not isinstance(proof, bytes):
            return False
        return bytes_eq(self._mac(material, VRF_LABEL, data), proof)

    def vrf_value(self, proof):
        return int.from_bytes(proof, 'big')


@lru_cache(maxsize=4096)
def _ed25519_key(secret):
    return Ed25519PrivateKey.from_private_bytes(secret[:32])


class Ed25519Backend:
    name = 'ed25519'

    def public_id(self, secret):
        return _ed25519_key(secret).public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)

    def verifier_material(self, secret):
        return Ed25519PublicKey.from_public_bytes(self.public_id(secret))

    def sign(self, secret, data):
        return _ed25519_key(secret).sign(SIGNATURE_LABEL + data)

    @staticmethod
    def _verify(material, data, tag):
        if not isinstance(tag, bytes):
            return False
        try:
            material.verify(tag, data)
        except InvalidSignature:
            return False
        return True

    def check(self, material, data, tag):
        return self._verify(material, SIGNATURE_LABEL + data, tag)

    def vrf_prove(self, secret, data):
        return _ed25519_key(secret).sign(VRF_LABEL + data)

    def vrf_check(self, material, data, proof):
        return self._verify(material, VRF_LABEL + data, proof)

    def vrf_value(self, proof):
        return int.from_bytes(digest(proof), 'big')


BACKENDS = {
    HmacBackend.name: HmacBackend(),
    Ed25519Backend.name: Ed25519Backend(),
}


def get_backend(name):
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f'unknown crypto backend {name!r}; choose one of {sorted(BACKENDS)}') from None
