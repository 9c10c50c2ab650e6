"""
Per-run metrics and property checks.

Everything here reads a finished run (its trace, plus the harness view of
committees for the coin's minimum) and turns it into counters: words sent
by correct processes, decision rounds, coin agreement, committee census and
one 0/1 flag per property a run can violate.
"""
import logging
import random
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field

import numpy as np

from committee.keys import KeyRegistry
from committee.tags import derive_seed, encode_parts
from experiments.inputs import is_unanimous
from netsim import trace as events
from netsim.conditioning import CommitteeGuard
from netsim.config import APPROVER, BINARY, CONDITIONED, FAITHFUL, MULTIVALUED
from params.oracles import sampling_failure_table
from protocols import approver, binary_ba, coin, mv_ba

logger = logging.getLogger(__name__)

VIOLATIONS = (
    'validity', 'agreement', 'termination', 'graded_agreement', 'two_values',
    'ok_once', 'unique_qc', 'eventual_qc', 'coin_common',
)


@dataclass
class Metrics:
    seed: int
    protocol: str
    n: int
    lam: float
    words_sent_by_correct: int = 0
    messages_by_kind: dict = field(default_factory=dict)
    decisions: dict = field(default_factory=dict)
    decision_rounds: dict = field(default_factory=dict)
    coin_agreement: list = field(default_factory=list)
    committee_stats: dict = field(default_factory=dict)
    violations: dict = field(default_factory=lambda: dict.fromkeys(VIOLATIONS, 0))
    blocked: bool = False
    compromised: bool = False
    unanimous: bool = False
    round_cap_exceeded: int = 0
    invalid_messages: int = 0
    rejections: int = 0
    corruptions: int = 0
    steps: int = 0
    fingerprint: str = ''

    @property
    def word_ratio(self):
        return self.words_sent_by_correct / (self.n * self.lam ** 2) if self.lam else 0.0

    @property
    def total_violations(self):
        return sum(self.violations.values())

    def as_dict(self):
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        data['word_ratio'] = self.word_ratio
        data['decisions'] = {str(pid): value for pid, value in self.decisions.items()}
        data['decision_rounds'] = {str(pid): value for pid, value in self.decision_rounds.items()}
        return data


def _correct_at(trace, pid, step):
    corrupted_at = trace.corrupted.get(pid)
    return corrupted_at is None or step < corrupted_at


def _by_instance(trace, kind, correct):
    grouped = defaultdict(list)
    for event in trace.events_of(kind):
        if event['from'] in correct:
            grouped[event['annotations']['instance']].append(event)
    return grouped


def _render(value):
    return events.jsonable(value)


def check_approver_use(trace, correct, metrics):
    """At most two distinct inputs per approver instance, at most one ok per process."""
    for invocations in _by_instance(trace, approver.INVOKE, correct).values():
        if len({event['annotations']['value'] for event in invocations}) > 2:
            metrics.violations['two_values'] = 1
    oks = Counter((event['from'], event['annotations']['instance'])
                  for event in trace.events_of(approver.OK_SENT))
    if any(count > 1 for count in oks.values()):
        metrics.violations['ok_once'] = 1


def check_approver_outputs(outputs, unanimous_value, metrics):
    """Validity and graded agreement over the correct processes' returned sets."""
    if unanimous_value is not None:
        expected = {_render(unanimous_value)}
        if any(values != expected for values in outputs.values()):
            metrics.violations['validity'] = 1
    singletons = {next(iter(values)) for values in outputs.values() if len(values) == 1}
    if len(singletons) > 1:
        metrics.violations['graded_agreement'] = 1
    for value in singletons:
        if any(value not in values for values in outputs.values()):
            metrics.violations['graded_agreement'] = 1


def coin_invocations(network, correct):
    """
    One record per coin (instance, round): whether every correct output
    agreed, the minimum over the first committee, whether that minimum was
    common (held by B+1 correct second-committee members after phase one)
    and the number c of common values.
    """
    trace = network.trace
    B = network.params.B
    outputs = defaultdict(dict)
    for event in trace.events_of(coin.OUTPUT):
        if event['from'] in correct:
            notes = event['annotations']
            outputs[(notes['instance'], notes['round'])][event['from']] = notes['bit']
    phase_one = defaultdict(list)
    for event in trace.events_of(coin.PHASE_ONE):
        if _correct_at(trace, event['from'], event['step']):
            notes = event['annotations']
            phase_one[(notes['instance'], notes['round'])].append(notes['origins'])

    records = []
    for (instance, round), bits in sorted(outputs.items(), key=lambda item: (item[0][1], item[0][0])):
        origin, value = coin.first_committee_minimum(network, bytes.fromhex(instance), round) or (None, None)
        holders = Counter(origin_id for origins in phase_one[(instance, round)] for origin_id in origins)
        common_min = origin is not None and holders[origin] >= B + 1
        distinct = set(bits.values())
        records.append({
            'instance': instance,
            'round': round,
            'all_agree': len(distinct) == 1,
            'bit': next(iter(distinct)) if len(distinct) == 1 else None,
            'outputs': len(bits),
            'common_min': common_min,
            'min_bit': value & 1 if value is not None else None,
            'common_values': sum(1 for count in holders.values() if count >= B + 1),
        })
    return records


def committee_summary(committees, params):
    if not committees:
        return {'count': 0}
    sizes = np.array([entry['size'] for entry in committees], dtype=float)
    correct = np.array([entry['correct'] for entry in committees], dtype=float)
    byzantine = np.array([entry['byzantine'] for entry in committees], dtype=float)
    rejections = np.array([entry['rejections'] for entry in committees], dtype=float)
    return {
        'count': len(committees),
        'mean_size': float(sizes.mean()),
        'mean_correct': float(correct.mean()),
        'mean_byzantine': float(byzantine.mean()),
        'mean_rejections': float(rejections.mean()),
        's3_failures': int((correct < params.W).sum()),
        's4_failures': int((byzantine > params.B).sum()),
    }


def collect_metrics(network):
    trace = network.trace
    config = network.config
    params = network.params
    correct = set(network.correct_processes())

    metrics = Metrics(seed=config.seed, protocol=config.protocol, n=params.n, lam=params.lam)
    metrics.words_sent_by_correct = trace.stats['words_sent_by_correct']
    metrics.messages_by_kind = dict(sorted(trace.messages_by_kind.items()))
    metrics.blocked = trace.blocked
    metrics.steps = trace.stats['steps']
    metrics.rejections = trace.stats['rejections']
    metrics.corruptions = len(trace.corrupted)
    metrics.invalid_messages = len(trace.events_of(events.INVALID))
    metrics.round_cap_exceeded = len(trace.events_of(events.ROUND_CAP))
    metrics.compromised = bool(trace.events_of(events.SAFETY))
    metrics.committee_stats = committee_summary(trace.committees, params)
    metrics.fingerprint = trace.fingerprint()

    for pid in sorted(correct):
        record = trace.decisions.get(pid)
        if record is not None:
            metrics.decisions[pid] = record['value']
            if record.get('round') is not None:
                metrics.decision_rounds[pid] = record['round']

    correct_inputs = {config.inputs[pid] for pid in correct}
    metrics.unanimous = is_unanimous(correct_inputs)
    unanimous_value = next(iter(correct_inputs)) if metrics.unanimous else None

    if config.sampling_mode == CONDITIONED and any(pid not in metrics.decisions for pid in correct):
        metrics.violations['termination'] = 1

    check_approver_use(trace, correct, metrics)
    metrics.coin_agreement = coin_invocations(network, correct)
    for record in metrics.coin_agreement:
        if record['common_min'] and any(
                event['annotations']['bit'] != record['min_bit']
                for event in trace.events_of(coin.OUTPUT)
                if event['from'] in correct and event['annotations']['instance'] == record['instance']
                and event['annotations']['round'] == record['round']):
            metrics.violations['coin_common'] = 1

    decided = list(metrics.decisions.values())
    if config.protocol == APPROVER:
        outputs = {pid: set(values) for pid, values in metrics.decisions.items()}
        check_approver_outputs(outputs, unanimous_value, metrics)
    elif config.protocol == BINARY:
        if len(set(decided)) > 1:
            metrics.violations['agreement'] = 1
        if unanimous_value is not None and any(value != unanimous_value for value in decided):
            metrics.violations['validity'] = 1
    elif config.protocol == MULTIVALUED:
        _check_multivalued(network, correct, unanimous_value, metrics)

    if metrics.compromised:
        logger.warning('run seed=%d compromised: approver returned conflicting values', config.seed)
    if metrics.total_violations:
        logger.warning('run seed=%d violations: %s', config.seed,
                       {name: count for name, count in metrics.violations.items() if count})
    return metrics


def _check_multivalued(network, correct, unanimous_value, metrics):
    trace = network.trace
    decided = set(metrics.decisions.values())
    if len(decided) > 1:
        metrics.violations['agreement'] = 1
    all_correct = not trace.corrupted and network.budget == 0
    if all_correct and unanimous_value is not None and decided - {_render(unanimous_value)}:
        metrics.violations['validity'] = 1

    certified = {event['annotations']['value'] for event in trace.events_of(mv_ba.CONVERGE_SENT)
                 if event['annotations']['content'] and _correct_at(trace, event['from'], event['step'])}
    certified |= {event['annotations']['value'] for event in trace.events_of(mv_ba.QC_HELD)
                  if event['from'] in correct}
    if len(certified) > 1:
        metrics.violations['unique_qc'] = 1

    content_sent = any(event['annotations']['content'] and _correct_at(trace, event['from'], event['step'])
                       for event in trace.events_of(mv_ba.CONVERGE_SENT))
    binary_zero = any(event['annotations']['value'] == 0 and event['from'] in correct
                      for event in trace.events_of(binary_ba.DECIDED))
    if binary_zero and not content_sent:
        metrics.violations['eventual_qc'] = 1


def sample_committee_statistics(params, samples, seed=0, crypto='hmac'):
    """
    Faithful-mode committee census over ``samples`` fresh committee strings,
    with a Byzantine population of f seeded processes. Returns one row per
    sampling property: empirical failure rate, its standard error and the
    exact binomial-tail probability.
    """
    if samples < 1:
        raise ValueError(f'samples must be >= 1, got {samples}')
    registry = KeyRegistry(seed, params.n, crypto)
    pool = random.Random(derive_seed(seed, 'pool')).sample(range(params.n), params.f)
    guard = CommitteeGuard(params, registry, pool, FAITHFUL, 0)

    size_high = int(np.floor((1 + params.d) * params.lam)) + 1
    size_low = int(np.ceil((1 - params.d) * params.lam)) - 1
    failures = {'S1': [], 'S2': [], 'S3': [], 'S4': []}
    for index in range(samples):
        committee = guard.census(encode_parts('census', seed, index))
        failures['S1'].append(committee.size >= size_high)
        failures['S2'].append(committee.size <= size_low)
        failures['S3'].append(committee.correct < params.W)
        failures['S4'].append(committee.byzantine > params.B)

    rows = []
    for row in sampling_failure_table(params):
        observed = np.array(failures[row.prop], dtype=float)
        rate = float(observed.mean())
        stderr = float(np.sqrt(max(rate * (1 - rate), row.exact * (1 - row.exact)) / samples))
        rows.append({
            'property': row.prop,
            'description': row.description,
            'samples': samples,
            'empirical': rate,
            'stderr': stderr,
            'exact': row.exact,
            'chernoff': row.chernoff,
            'within_3se': abs(rate - row.exact) <= 3 * stderr,
        })
    return rows
