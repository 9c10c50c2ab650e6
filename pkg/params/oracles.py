"""
Exact committee-sampling probabilities.

The binomial tails below are the ground truth the Monte Carlo committee
statistics are compared against; the Chernoff bounds are the analytic
upper bounds the whp claims rest on.
"""
import math
from dataclasses import dataclass

from scipy.stats import binom

LOWER = 'lower'
UPPER = 'upper'


def binomial_tail_oracle(n, p, k, side):
    """
    P[Bin(n, p) <= k] for side='lower', P[Bin(n, p) >= k] for side='upper'.
    """
    if not 0 <= p <= 1:
        raise ValueError(f'p must lie in [0, 1], got {p}')
    if not 0 <= k <= n:
        raise ValueError(f'k must lie in [0, n={n}], got {k}')
    if side == LOWER:
        return float(binom.cdf(k, n, p))
    if side == UPPER:
        return float(binom.sf(k - 1, n, p))
    raise ValueError(f"side must be '{LOWER}' or '{UPPER}', got {side!r}")


@dataclass(frozen=True)
class SamplingRow:
    """Per-committee failure probability of one sampling property."""
    prop: str
    description: str
    exact: float
    chernoff: float

    def as_dict(self):
        return {
            'property': self.prop,
            'description': self.description,
            'exact': self.exact,
            'chernoff': self.chernoff,
        }


def _lower_tail(population, q, k):
    if k < 0:
        return 0.0
    return binomial_tail_oracle(population, q, min(k, population), LOWER)


def _upper_tail(population, q, k):
    if k > population:
        return 0.0
    return binomial_tail_oracle(population, q, max(k, 0), UPPER)


def s3_failure_probability(p):
    """P[a committee has fewer than W correct members]."""
    return _lower_tail(p.n - p.f, p.sampling_probability, p.W - 1)


def s4_failure_probability(p):
    """P[a committee has more than B Byzantine members]."""
    return _upper_tail(p.f, p.sampling_probability, p.B + 1)


def sampling_failure_table(p):
    q = p.sampling_probability
    lam, d, eps = p.lam, p.d, p.epsilon

    size_high = math.floor((1 + d) * lam) + 1
    size_low = math.ceil((1 - d) * lam) - 1

    delta3 = 1 - (2 / 3 + 3 * d + 1 / lam) / (2 / 3 + eps)
    s3_bound = math.exp(-(delta3 ** 2) * (2 / 3 + eps) * lam / 2) if delta3 > 0 else 1.0

    byz_share = 1 / 3 - eps
    if byz_share > 0:
        delta4 = (eps - d) / byz_share
        s4_bound = math.exp(-(delta4 ** 2) * byz_share * lam / (2 + delta4))
    else:
        s4_bound = 0.0

    return [
        SamplingRow('S1', 'committee size at most (1+d)lambda',
                    _upper_tail(p.n, q, size_high), math.exp(-(d ** 2) * lam / (2 + d))),
        SamplingRow('S2', 'committee size at least (1-d)lambda',
                    _lower_tail(p.n, q, size_low), math.exp(-(d ** 2) * lam / 2)),
        SamplingRow('S3', 'at least W correct members',
                    s3_failure_probability(p), min(1.0, s3_bound)),
        SamplingRow('S4', 'at most B Byzantine members',
                    s4_failure_probability(p), min(1.0, s4_bound)),
    ]
