"""
Canonical byte encodings.

Committee strings, signed payloads and message digests are all built from
length-prefixed parts so that no two distinct part sequences share an
encoding. The layout is pinned by golden-vector tests.
"""
import hashlib

LENGTH_PREFIX = 4
INT_WIDTH = 8


def encode_part(part):
    if isinstance(part, bool):
        raw = b'\x01' if part else b'\x00'
    elif isinstance(part, int):
        raw = part.to_bytes(INT_WIDTH, 'big')
    elif isinstance(part, str):
        raw = part.encode('utf-8')
    elif isinstance(part, (bytes, bytearray)):
        raw = bytes(part)
    elif part is None:
        raw = b''
    else:
        raise TypeError(f'cannot encode {type(part).__name__} as a tag part')
    return len(raw).to_bytes(LENGTH_PREFIX, 'big') + raw


def encode_parts(*parts):
    return b''.join(encode_part(part) for part in parts)


def committee_tag(protocol, instance, step, round=0, value=None):
    """
    Committee string s = (protocol-name, instance-id, round, step-label[, value]).

    The value is appended only for per-value committees such as the
    approver's echo committees.
    """
    parts = [protocol, instance, round, step]
    if value is not None:
        parts.append(value)
    return encode_parts(*parts)


def sub_instance(instance, label):
    """Instance id of a protocol nested inside ``instance`` (e.g. the alert BA)."""
    return encode_parts(instance, label)


def digest(data):
    return hashlib.sha256(data).digest()


def derive_seed(seed, *labels):
    """64-bit sub-seed for an independent deterministic stream of ``seed``."""
    material = encode_parts(seed, *labels)
    return int.from_bytes(hashlib.sha256(material).digest()[:8], 'big')
