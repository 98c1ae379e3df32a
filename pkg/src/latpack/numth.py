"""Number-theoretic and geometric scalar primitives.

Moebius function by trial division, divisor-weighted sums, unit-ball
volumes via log-Gamma (safe up to dimensions in the thousands) and the
half-ball counting bound used to budget lattice-point enumerations.
"""

import math
from functools import lru_cache

from .errors import InputError

#: Trial division is plenty at the scales this package needs; refuse
#: anything that would make it slow.
_MOBIUS_CAP = 10**6


@lru_cache(maxsize=None)
def mobius(k: int) -> int:
    """Moebius function mu(k) in {-1, 0, 1}."""
    if k < 1:
        raise InputError(f"mobius requires k >= 1, got {k}")
    if k > _MOBIUS_CAP:
        raise InputError(f"mobius argument {k} exceeds cap {_MOBIUS_CAP}")
    if k == 1:
        return 1
    result = 1
    p = 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if k > 1:
        result = -result
    return result


def divisors(k: int) -> list[int]:
    """All positive divisors of k, ascending."""
    if k < 1:
        raise InputError(f"divisors requires k >= 1, got {k}")
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d != k // d:
                large.append(k // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def mobius_weight(k: int, n: int) -> float:
    """The factor sum_{l | k} mu(l) / l^(n-1).

    Equals the Euler product prod_{p | k} (1 - 1/p^(n-1)); both forms are
    computed and must agree to 1e-14 relative.
    """
    if k < 1:
        raise InputError(f"mobius_weight requires k >= 1, got {k}")
    if n < 2:
        raise InputError(f"mobius_weight requires n >= 2, got {n}")
    direct = sum(mobius(l) / l ** (n - 1) for l in divisors(k))
    product = 1.0
    m, p = k, 2
    while p * p <= m:
        if m % p == 0:
            product *= 1.0 - 1.0 / p ** (n - 1)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        product *= 1.0 - 1.0 / m ** (n - 1)
    if abs(direct - product) > 1e-14 * max(1.0, abs(product)):
        raise AssertionError(
            f"divisor sum {direct} and Euler product {product} disagree"
        )
    return direct


def log_ball_volume(n: int) -> float:
    """log of the volume of the n-dimensional unit ball."""
    if n < 0:
        raise InputError(f"log_ball_volume requires n >= 0, got {n}")
    return (n / 2.0) * math.log(math.pi) - math.lgamma(n / 2.0 + 1.0)


def ball_volume(n: int) -> float:
    """Volume pi^(n/2) / (n/2)! of the n-dimensional unit ball."""
    return math.exp(log_ball_volume(n))


def ball_point_count_bound(n: int, mu: int) -> float:
    """Upper bound 2 * sqrt(mu + n/4)^n * V_n on the number of integer
    points of squared norm <= mu in dimension n."""
    if n < 1 or mu < 1:
        raise InputError(f"ball_point_count_bound requires n, mu >= 1")
    return 2.0 * math.exp(
        (n / 2.0) * math.log(mu + n / 4.0) + log_ball_volume(n)
    )
