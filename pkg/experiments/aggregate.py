"""
Aggregation of per-run metrics into versioned reports.

Safety-compromised runs (an approver returned two different bits) are
counted but left out of every whp statistic.
"""
import csv

import numpy as np

from experiments.metrics import VIOLATIONS
from experiments.schema import SCHEMA_VERSION
from netsim.config import BINARY, CONDITIONED, MULTIVALUED
from params.engine import (
    coin_common_probability_bound, common_value_bound, expected_word_complexity,
)

CSV_COLUMNS = (
    'schema_version', 'protocol', 'n', 'seed', 'adversary', 'mode', 'outcome',
    'violations', 'compromised', 'words_sent_by_correct', 'word_ratio', 'max_decision_round',
)


def _summary(values):
    if len(values) == 0:
        return None
    array = np.asarray(values, dtype=float)
    return {
        'mean': float(array.mean()),
        'median': float(np.median(array)),
        'p90': float(np.quantile(array, 0.9)),
        'max': float(array.max()),
    }


def coin_statistics(runs, params):
    invocations = [record for metrics in runs for record in metrics.coin_agreement]
    total = len(invocations)
    if not total:
        return None
    stats = {'invocations': total, 'rho': params.rho}
    for bit in (0, 1):
        agreed = sum(1 for record in invocations if record['all_agree'] and record['bit'] == bit)
        rate = agreed / total
        stats[f'agree_{bit}'] = agreed
        stats[f'success_rate_{bit}'] = rate
        stats[f'stderr_{bit}'] = float(np.sqrt(rate * (1 - rate) / total))
    stats['meets_rho'] = all(
        stats[f'success_rate_{bit}'] >= params.rho - 3 * stats[f'stderr_{bit}'] for bit in (0, 1))
    common = np.array([record['common_values'] for record in invocations], dtype=float)
    stats['common_min_fraction'] = sum(1 for record in invocations if record['common_min']) / total
    stats['common_values_mean'] = float(common.mean())
    stats['common_value_bound'] = common_value_bound(params.d, params.lam)
    stats['common_min_bound'] = coin_common_probability_bound(
        float(common.mean()), params.B, params.d, params.lam)
    return stats


def round_bound(config):
    """Mean decision round the agreement protocols must stay under: 1/rho."""
    if config.protocol in (BINARY, MULTIVALUED) and config.params.rho > 0:
        return 1 / config.params.rho
    return None


def aggregate(config, runs):
    """Report section for one base configuration and its per-run metrics."""
    if not runs:
        raise ValueError('aggregate needs at least one run')
    params = config.params
    sound = [metrics for metrics in runs if not metrics.compromised]

    violations = {name: sum(metrics.violations[name] for metrics in sound) for name in VIOLATIONS}
    rounds = [value for metrics in sound for value in metrics.decision_rounds.values()]
    unanimous = [metrics for metrics in sound if metrics.unanimous]
    words = [metrics.words_sent_by_correct for metrics in sound]
    ratios = [metrics.word_ratio for metrics in sound]

    section = {
        'config': {key: value for key, value in config.describe().items() if key != 'seed'},
        'seeds': [metrics.seed for metrics in runs],
        'runs': len(runs),
        'violations': violations,
        'total_violations': sum(violations.values()),
        'blocked': sum(1 for metrics in runs if metrics.blocked),
        'compromised': len(runs) - len(sound),
        'round_cap_exceeded': sum(metrics.round_cap_exceeded for metrics in sound),
        'invalid_messages': sum(metrics.invalid_messages for metrics in runs),
        'decision_rounds': _summary(rounds),
        'round_bound': round_bound(config),
        'unanimous_round_one': (
            sum(1 for metrics in unanimous if metrics.decision_rounds
                and set(metrics.decision_rounds.values()) == {1}) / len(unanimous)
            if unanimous and config.protocol == BINARY else None),
        'words': _summary(words),
        'word_ratio': _summary(ratios),
        'expected_word_complexity': expected_word_complexity(params),
        'coin': coin_statistics(sound, params),
        'committees': {
            'count': sum(metrics.committee_stats.get('count', 0) for metrics in runs),
            's3_failures': sum(metrics.committee_stats.get('s3_failures', 0) for metrics in runs),
            's4_failures': sum(metrics.committee_stats.get('s4_failures', 0) for metrics in runs),
            'mean_rejections': float(np.mean([metrics.rejections for metrics in runs])),
        },
        'fingerprints': {str(metrics.seed): metrics.fingerprint for metrics in runs},
    }
    ok = section['total_violations'] == 0
    bound = section['round_bound']
    if bound is not None and section['decision_rounds'] is not None:
        ok = ok and section['decision_rounds']['mean'] <= bound
    if config.sampling_mode == CONDITIONED:
        ok = ok and section['blocked'] == 0 and section['compromised'] == 0
    section['exit_ok'] = ok
    return section


def scaling_table(sections):
    rows = []
    for section in sections:
        params = section['config']['params']
        ratio = section['word_ratio']
        rows.append({
            'n': params['n'],
            'lambda': params['lambda'],
            'mean_words': section['words']['mean'] if section['words'] else None,
            'ratio': ratio['mean'] if ratio else None,
        })
    ratios = [row['ratio'] for row in rows if row['ratio']]
    spread = max(ratios) / min(ratios) if len(ratios) > 1 else None
    return rows, spread


def build_report(protocol, groups):
    """Full report for [(base config, [metrics, ...]), ...]."""
    sections = [aggregate(config, runs) for config, runs in groups]
    scaling, spread = scaling_table(sections)
    totals = {
        'runs': sum(section['runs'] for section in sections),
        'violations': sum(section['total_violations'] for section in sections),
        'blocked': sum(section['blocked'] for section in sections),
        'compromised': sum(section['compromised'] for section in sections),
    }
    return {
        'schema_version': SCHEMA_VERSION,
        'protocol': protocol,
        'groups': sections,
        'scaling': scaling,
        'scaling_spread': spread,
        'totals': totals,
        'exit_ok': all(section['exit_ok'] for section in sections),
    }


def csv_rows(groups):
    for config, runs in groups:
        for metrics in runs:
            rounds = metrics.decision_rounds.values()
            yield {
                'schema_version': SCHEMA_VERSION,
                'protocol': config.protocol,
                'n': metrics.n,
                'seed': metrics.seed,
                'adversary': str(config.adversary),
                'mode': config.sampling_mode,
                'outcome': 'blocked' if metrics.blocked else 'finished',
                'violations': metrics.total_violations,
                'compromised': int(metrics.compromised),
                'words_sent_by_correct': metrics.words_sent_by_correct,
                'word_ratio': f'{metrics.word_ratio:.6f}',
                'max_decision_round': max(rounds) if rounds else '',
            }


def write_csv(handle, groups):
    """One CSV row per run, written to an open text handle."""
    writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(csv_rows(groups))
