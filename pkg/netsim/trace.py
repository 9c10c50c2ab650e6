"""
Run traces.

A RunTrace is the complete, replayable record of one run: the ordered event
log, the per-process decision record, counters collected by the network and
the blocked flag. Its JSONL export is canonical (sorted keys, fixed
separators) so equal runs export byte-identical text.
"""
import hashlib
import json
from collections import Counter

from netsim.config import TRACE_FULL

SEND = 'send'
DELIVER = 'deliver'
UNDELIVERED = 'undelivered'
CORRUPT = 'corrupt'
DECIDE = 'decide'
FINISH = 'finish'
BLOCKED = 'blocked'
ROUND_CAP = 'round_cap'
INVALID = 'audit.invalid'
SAFETY = 'audit.safety'

ENVELOPE_KINDS = (SEND, DELIVER, UNDELIVERED)


def jsonable(value):
    """Plain JSON rendering of annotation values (bytes as text, sets sorted)."""
    if isinstance(value, (bytes, bytearray)):
        return bytes(value).decode('utf-8', 'backslashreplace')
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(item) for item in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    return value


class RunTrace:
    def __init__(self, config):
        self.config = config
        self.full = config.trace_level == TRACE_FULL
        self.events = []
        self.decisions = {}
        self.stats = Counter()
        self.messages_by_kind = Counter()
        self.committees = []
        self.corrupted = {}
        self.blocked = False
        self.blocked_processes = []
        self.metrics = None

    def log(self, step, kind, sender=None, to=None, digest=None, **annotations):
        self.events.append({
            'step': step,
            'kind': kind,
            'from': sender,
            'to': to,
            'digest': digest.hex() if isinstance(digest, bytes) else digest,
            'annotations': jsonable(annotations),
        })

    def log_envelope(self, kind, step, envelope):
        if self.full:
            self.log(step, kind, envelope.sender, envelope.to, envelope.digest,
                     seq=envelope.seq, msg=envelope.kind, sent=envelope.send_step)

    def decide(self, step, pid, value, **extra):
        if pid in self.decisions:
            raise AssertionError(f'process {pid} decided twice')
        record = {'value': jsonable(value), 'step': step}
        record.update(jsonable(extra))
        self.decisions[pid] = record
        self.log(step, DECIDE, pid, value=value, **extra)

    def events_of(self, kind):
        return [event for event in self.events if event['kind'] == kind]

    def lines(self):
        for event in self.events:
            yield json.dumps(event, sort_keys=True, separators=(',', ':'), ensure_ascii=False)

    def to_jsonl(self):
        return ''.join(line + '\n' for line in self.lines())

    def write_jsonl(self, path):
        with open(path, 'w', encoding='utf-8') as handle:
            for line in self.lines():
                handle.write(line + '\n')

    def fingerprint(self):
        return hashlib.sha256(self.to_jsonl().encode('utf-8')).hexdigest()

    @property
    def outcome(self):
        if self.blocked:
            return 'blocked'
        return 'finished'
