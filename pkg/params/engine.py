"""
System constants of the committee-based agreement stack.

Every quantity the protocols and the analysis use is derived here from
(n, epsilon, d): the expected committee size lambda = 8 ln n, the wait
threshold W, the Byzantine committee bound B and the coin success rate rho.
All functions are pure.
"""
import math
from dataclasses import asdict, dataclass

from params.exceptions import (
    ConstraintViolation, DOutOfRange, EpsilonOutOfRange, InvalidProcessCount,
)

SAMPLING_CONSTANT = 8
D_LOWER_CONSTANT = 0.0362


@dataclass(frozen=True)
class SystemParams:
    """
    Derived protocol constants.

    ``lam`` is the expected committee size (kept real); ``W`` and ``B`` are
    its ceil/floor-rounded thresholds.
    """
    n: int
    f: int
    epsilon: float
    d: float
    lam: float
    W: int
    B: int
    rho: float

    @property
    def sampling_probability(self):
        return min(1.0, self.lam / self.n)

    def as_dict(self):
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        return data

    @classmethod
    def custom(cls, n, lam, W, B, f=0, epsilon=0.0, d=0.0):
        """
        Hand-picked constants for small traceable instances (e.g. n=4 with
        lambda=n so every process sits on every committee).

        Only the structural chain W > 2B, B >= 0, W <= n is enforced.
        """
        if n < 1:
            raise InvalidProcessCount(f'n must be >= 1, got {n}')
        if B < 0 or W <= 2 * B:
            raise ConstraintViolation(f'need W > 2B and B >= 0, got W={W}, B={B}')
        if W > n:
            raise ConstraintViolation(f'W={W} exceeds n={n}; no committee can ever reach it')
        rho = coin_success_rate(d) if d > 0 else 0.0
        return cls(n=n, f=f, epsilon=epsilon, d=d, lam=float(lam), W=W, B=B, rho=rho)


def expected_committee_size(n):
    return SAMPLING_CONSTANT * math.log(n)


def derive_params(n, epsilon, d):
    """
    Derive and validate SystemParams for (n, epsilon, d).

    Raises the first violated constraint: InvalidProcessCount,
    EpsilonOutOfRange (1/(2 ln n) < epsilon < 1/3) or DOutOfRange
    (max{1/lambda, 0.0362} < d < epsilon/3 - 1/(3 lambda)).
    """
    if n < 2:
        raise InvalidProcessCount(f'n must be >= 2, got {n}')

    eps_low = 1 / (2 * math.log(n))
    eps_high = 1 / 3
    if not eps_low < epsilon < eps_high:
        raise EpsilonOutOfRange(
            f'need 1/(2 ln n) < epsilon < 1/3, i.e. {eps_low:.6f} < epsilon < {eps_high:.6f}; '
            f'got epsilon={epsilon}')

    lam = expected_committee_size(n)
    d_low = max(1 / lam, D_LOWER_CONSTANT)
    d_high = epsilon / 3 - 1 / (3 * lam)
    if not d_low < d < d_high:
        raise DOutOfRange(
            f'need max{{1/lambda, {D_LOWER_CONSTANT}}} < d < epsilon/3 - 1/(3 lambda), '
            f'i.e. {d_low:.6f} < d < {d_high:.6f}; got d={d}')

    f = math.floor((1 / 3 - epsilon) * n)
    W = math.ceil((2 / 3 + 3 * d) * lam)
    B = math.floor((1 / 3 - d) * lam)
    rho = coin_success_rate(d)

    if B < 0 or W <= 2 * B:
        raise ConstraintViolation(f'need W > 2B and B >= 0, got W={W}, B={B}')
    if rho <= 0:
        raise ConstraintViolation(f'coin success rate must be positive, got rho={rho}')

    return SystemParams(n=n, f=f, epsilon=epsilon, d=d, lam=lam, W=W, B=B, rho=rho)


def coin_success_rate(d):
    """rho(d) = (18d^2 + 27d - 1) / (3 (5 + 6d) (1 - d) (1 + 9d))."""
    return (18 * d ** 2 + 27 * d - 1) / (3 * (5 + 6 * d) * (1 - d) * (1 + 9 * d))


def coin_rate_root():
    """Positive root of 18d^2 + 27d - 1, below which rho(d) is not positive."""
    return (-27 + math.sqrt(27 ** 2 + 4 * 18)) / (2 * 18)


def common_value_bound(d, lam):
    """Lower bound on the number of common values c: d(11 - 3d)/(1 + 9d) * lambda."""
    return d * (11 - 3 * d) / (1 + 9 * d) * lam


def coin_common_probability_bound(c, B, d, lam):
    """
    Lower bound on P[v_min is common] given c common values.

    2/(3(1-d)) * (c - B)/((1+d) lambda - B), clipped at 0.
    """
    bound = 2 / (3 * (1 - d)) * (c - B) / ((1 + d) * lam - B)
    return max(0.0, bound)


def intersection_margins(p):
    """
    Slack in the two committee intersection arguments.

    s5: two W-subsets of a committee of size at most (1+d)lambda share more
        than B members (2W - (1+d)lambda - B >= 1).
    s6: a W-subset and a (B+1)-subset share a member
        (W + (B+1) - (1+d)lambda >= 1).
    """
    size_bound = (1 + p.d) * p.lam
    s5_margin = 2 * p.W - size_bound - p.B
    s6_margin = p.W + (p.B + 1) - size_bound
    return s5_margin, s6_margin


def expected_word_complexity(p):
    """Leading-term estimate n * W * lambda of one multivalued instance."""
    return p.n * p.W * p.lam
