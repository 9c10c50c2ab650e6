"""
Process-side crypto operations: sign, VRF evaluation, committee sampling.

Each of these needs the caller's own KeyPair, so only the owning process
(or the adversary, for processes it has corrupted) can run them.
"""
from committee.backends import get_backend
from committee.keys import CommitteeProof, Signature, VrfOutput, below_threshold
from committee.tags import digest


def sign(key, payload):
    payload_digest = digest(payload)
    tag = get_backend(key.scheme).sign(key.secret_seed, payload_digest)
    return Signature(signer=key.process_id, payload_digest=payload_digest, tag=tag)


def vrf_eval(key, data):
    backend = get_backend(key.scheme)
    proof = backend.vrf_prove(key.secret_seed, data)
    return VrfOutput(value=backend.vrf_value(proof), proof=proof)


def sample(key, tag, lam, n):
    """
    sample_i(s, lambda): elected iff VRF_i(s) / 2^256 < lambda / n.

    Returns (elected, proof); the proof verifies under committee_val
    exactly when ``elected`` is true.
    """
    output = vrf_eval(key, tag)
    elected = below_threshold(output.value, lam, n)
    return elected, CommitteeProof(
        process_id=key.process_id, tag_string=tag, threshold=lam, proof=output.proof,
    )


def committee_val(verifier, tag, lam, pid, proof):
    return verifier.committee_val(tag, lam, pid, proof)
