"""
Mechanical trace audits for the network contract.

Each audit takes a full-level RunTrace and returns a list of human-readable
problems; an empty list means the trace passed.
"""
from collections import defaultdict

from netsim import trace as events


def _require_full(trace):
    if not trace.full:
        raise ValueError('envelope audits need a trace recorded at the "full" level')


def _envelope_events(trace):
    sends, deliveries, undelivered = {}, defaultdict(list), set()
    for event in trace.events:
        kind = event['kind']
        if kind == events.SEND:
            sends[event['annotations']['seq']] = event
        elif kind == events.DELIVER:
            deliveries[event['annotations']['seq']].append(event)
        elif kind == events.UNDELIVERED:
            undelivered.add(event['annotations']['seq'])
    return sends, deliveries, undelivered


def audit_delayed_adaptive(trace):
    """
    Every envelope a process sent before its corruption is delivered exactly
    as sent (or still in flight when the run ended); nothing is injected
    under a correct sender's name.
    """
    _require_full(trace)
    problems = []
    sends, deliveries, undelivered = _envelope_events(trace)

    for seq, delivered in sorted(deliveries.items()):
        sent = sends.get(seq)
        if sent is None:
            problems.append(f'envelope {seq} delivered but never sent')
            continue
        for event in delivered:
            if (event['from'], event['to'], event['digest']) != (sent['from'], sent['to'], sent['digest']):
                problems.append(f'envelope {seq} altered in flight')

    for pid, corrupted_at in sorted(trace.corrupted.items()):
        for seq, sent in sends.items():
            if sent['from'] != pid or sent['step'] >= corrupted_at:
                continue
            if seq not in deliveries and seq not in undelivered:
                problems.append(f'envelope {seq} sent by {pid} before corruption was suppressed')
    return problems


def audit_send_monotonicity(trace):
    """Each process's send steps strictly increase."""
    _require_full(trace)
    problems = []
    last = {}
    for event in trace.events:
        if event['kind'] != events.SEND:
            continue
        sender = event['from']
        if sender in last and event['step'] <= last[sender]:
            problems.append(f'process {sender} sent at step {event["step"]} after step {last[sender]}')
        last[sender] = event['step']
    return problems


def audit_no_duplication(trace):
    """No envelope is delivered twice and delivery never precedes sending."""
    _require_full(trace)
    problems = []
    sends, deliveries, _ = _envelope_events(trace)
    for seq, delivered in sorted(deliveries.items()):
        if len(delivered) > 1:
            problems.append(f'envelope {seq} delivered {len(delivered)} times')
        sent = sends.get(seq)
        if sent is not None and delivered[0]['step'] < sent['step']:
            problems.append(f'envelope {seq} delivered before it was sent')
    return problems


def audit_network(trace):
    return audit_delayed_adaptive(trace) + audit_send_monotonicity(trace) + audit_no_duplication(trace)
