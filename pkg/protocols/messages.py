"""
Wire messages of the agreement stack.

Every message is a frozen dataclass with a canonical byte encoding. The
signed part (``body``) covers the message content; the committee proof and
the signature travel next to it. Word costs live in one table.
"""
from dataclasses import dataclass, replace
from functools import cached_property
from typing import ClassVar, Optional

from committee.keys import CommitteeProof, Signature, VrfOutput
from committee.tags import committee_tag, digest, encode_parts
from netsim.config import RESERVED_DEFAULT

BOTTOM = RESERVED_DEFAULT

APPROVER = 'approver'
COIN = 'coin'
MULTIVALUED = 'mv'

INIT = 'init'
ECHO = 'echo'
OK = 'ok'
FIRST = 'first'
SECOND = 'second'
MV_INIT = 'mv_init'
CONVERGE = 'converge'

# value/VRF output + signature + committee proof (+ the extra proofs a message carries)
WORD_COSTS = {
    INIT: 3,
    ECHO: 3,
    OK: 3,
    FIRST: 4,
    SECOND: 5,
    MV_INIT: 3,
    CONVERGE: 3,
}

APPROVER_KINDS = (INIT, ECHO, OK)
COIN_KINDS = (FIRST, SECOND)
MULTIVALUED_KINDS = (MV_INIT, CONVERGE)


@dataclass(frozen=True, eq=False)
class Message:
    kind: ClassVar[str] = ''

    def body(self):
        raise NotImplementedError

    def extra_parts(self):
        return ()

    def encode(self):
        signature = self.signature.encode() if isinstance(self.signature, Signature) else b''
        proof = self.proof.encode() if isinstance(self.proof, CommitteeProof) else b''
        return encode_parts(self.kind, self.sender, self.body(), proof, signature, *self.extra_parts())

    @cached_property
    def digest(self):
        return digest(self.encode())

    @property
    def carries_certificate(self):
        return False

    def words(self, W):
        return WORD_COSTS[self.kind] + (W if self.carries_certificate else 0)


@dataclass(frozen=True, eq=False)
class ApproverInit(Message):
    kind: ClassVar[str] = INIT
    instance: bytes
    sender: int
    value: bytes
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        return encode_parts(APPROVER, INIT, self.instance, self.value)


@dataclass(frozen=True, eq=False)
class ApproverEcho(Message):
    kind: ClassVar[str] = ECHO
    instance: bytes
    sender: int
    value: bytes
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        return encode_parts(APPROVER, ECHO, self.instance, self.value)


@dataclass(frozen=True, eq=False)
class OkProof:
    """W signed echoes for one value from members of its echo committee."""
    value: bytes
    echoes: tuple

    def encode(self):
        return encode_parts(self.value, *(echo.encode() for echo in self.echoes))


@dataclass(frozen=True, eq=False)
class ApproverOk(Message):
    kind: ClassVar[str] = OK
    instance: bytes
    sender: int
    value: bytes
    ok_proof: Optional[OkProof] = None
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        return encode_parts(APPROVER, OK, self.instance, self.value)

    def extra_parts(self):
        return (self.ok_proof.encode() if isinstance(self.ok_proof, OkProof) else b'',)

    @property
    def carries_certificate(self):
        return True


@dataclass(frozen=True, eq=False)
class CoinFirst(Message):
    kind: ClassVar[str] = FIRST
    instance: bytes
    round: int
    sender: int
    vrf: Optional[VrfOutput] = None
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        value, vrf_proof = (self.vrf.value, self.vrf.proof) if self.vrf else (0, b'')
        return encode_parts(COIN, FIRST, self.instance, self.round, value.to_bytes(32, 'big'), vrf_proof)


@dataclass(frozen=True, eq=False)
class CoinSecond(Message):
    """Phase-two relay of the smallest VRF value seen, with its provenance."""
    kind: ClassVar[str] = SECOND
    instance: bytes
    round: int
    sender: int
    value: int
    origin: int
    origin_vrf_proof: bytes = b''
    origin_proof: Optional[CommitteeProof] = None
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        origin_proof = self.origin_proof.encode() if isinstance(self.origin_proof, CommitteeProof) else b''
        return encode_parts(COIN, SECOND, self.instance, self.round, self.value.to_bytes(32, 'big'),
                            self.origin, self.origin_vrf_proof, origin_proof)


@dataclass(frozen=True, eq=False)
class MvInit(Message):
    kind: ClassVar[str] = MV_INIT
    instance: bytes
    sender: int
    value: bytes
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        return encode_parts(MULTIVALUED, INIT, self.instance, self.value)


@dataclass(frozen=True, eq=False)
class QuorumCertificate:
    """W signed init messages on one value from members of the init committee."""
    value: bytes
    inits: tuple

    def encode(self):
        return encode_parts(self.value, *(init.encode() for init in self.inits))

    @cached_property
    def digest(self):
        return digest(self.encode())

    @property
    def signers(self):
        return tuple(init.sender for init in self.inits)


@dataclass(frozen=True, eq=False)
class Converge(Message):
    kind: ClassVar[str] = CONVERGE
    instance: bytes
    sender: int
    content: bool
    qc: Optional[QuorumCertificate] = None
    proof: Optional[CommitteeProof] = None
    signature: Optional[Signature] = None

    def body(self):
        qc = self.qc.encode() if isinstance(self.qc, QuorumCertificate) else b''
        return encode_parts(MULTIVALUED, CONVERGE, self.instance, self.content, qc)

    @property
    def carries_certificate(self):
        return self.content


# committee strings


def approver_init_tag(instance):
    return committee_tag(APPROVER, instance, INIT)


def approver_echo_tag(instance, value):
    return committee_tag(APPROVER, instance, ECHO, value=value)


def approver_ok_tag(instance):
    return committee_tag(APPROVER, instance, OK)


def coin_first_tag(instance, round):
    return committee_tag(COIN, instance, FIRST, round=round)


def coin_second_tag(instance, round):
    return committee_tag(COIN, instance, SECOND, round=round)


def coin_input(instance, round):
    """VRF input of the coin for ``round``: VRF_i(r)."""
    return encode_parts(COIN, instance, round)


def mv_init_tag(instance):
    return committee_tag(MULTIVALUED, instance, INIT)


def mv_converge_tag(instance):
    return committee_tag(MULTIVALUED, instance, CONVERGE)


def committee_tag_of(message):
    """The committee string a message's sender must belong to."""
    if isinstance(message, ApproverInit):
        return approver_init_tag(message.instance)
    if isinstance(message, ApproverEcho):
        return approver_echo_tag(message.instance, message.value)
    if isinstance(message, ApproverOk):
        return approver_ok_tag(message.instance)
    if isinstance(message, CoinFirst):
        return coin_first_tag(message.instance, message.round)
    if isinstance(message, CoinSecond):
        return coin_second_tag(message.instance, message.round)
    if isinstance(message, MvInit):
        return mv_init_tag(message.instance)
    if isinstance(message, Converge):
        return mv_converge_tag(message.instance)
    raise TypeError(f'not a protocol message: {type(message).__name__}')


# building and checking


def seal(actor, message, proof):
    """Attach ``actor``'s committee proof and signature to ``message``."""
    unsigned = replace(message, proof=proof)
    return replace(unsigned, signature=actor.sign(unsigned.body()))


def elected_message(actor, message):
    """Sample ``actor`` for the message's committee; sealed message if elected, else None."""
    elected, proof = actor.sample(committee_tag_of(message))
    if not elected:
        return None
    return seal(actor, message, proof)


def valid_member_message(checks, message):
    """Signature and committee membership of the sender, memoised per message."""
    def compute():
        if not isinstance(message.sender, int) or not isinstance(message.signature, Signature):
            return False
        if not checks.verify(message.sender, message.body(), message.signature):
            return False
        return checks.committee_val(committee_tag_of(message), message.sender, message.proof)
    return checks.memo(('member', message.digest), compute)
