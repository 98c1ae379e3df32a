"""Density inequality machinery.

Evaluates the Moebius-weighted sum F_n(x, y), its implicit inverse
Y_n(x) defined by F_n(x, Y_n(x)) = 1/V_{n-1}, the increasing envelope
C_n(x) = sup ξ Y_n(ξ)^{2/n}, instance checks of the dimension-lifting
inequality in its three equivalent forms, Mordell's upper bound and the
elementary chain that recovers the 2^{1-n} packing bound.
"""

import math

from scipy import special

from . import numth
from .errors import InputError

_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: Term-by-term summation cap; beyond this the Moebius-swapped
#: Euler-Maclaurin evaluation takes over (it gets *more* accurate as the
#: term count grows, and is within ~1e-9 at the crossover).
_K_EXACT = 20000


def _eval_F_exact(n, x, y, kmax):
    total = 0.0
    for k in range(1, kmax + 1):
        base = x - (k / y) ** 2
        if base <= 0.0:
            continue
        total += numth.mobius_weight(k, n) * math.exp(
            ((n - 1) / 2.0) * math.log(base)
        )
    return total


def _eval_F_large(n, x, y, kmax):
    """F via sum over Moebius indices l of S(l) = sum_m g(l m / y).

    Each S(l) is a Riemann sum of g(t) = (x - t^2)^((n-1)/2) with tiny
    spacing l/y, evaluated by Euler-Maclaurin with the incomplete-beta
    closed form of the integral.  The l-sum is truncated where its
    1/l^(n-1) decay drops below 1e-13 relative.
    """
    p = (n - 1) / 2.0
    sqx = math.sqrt(x)
    beta_full = special.beta(0.5, p + 1.0)
    lmax = min(kmax, max(2, math.ceil((1e13 / (n - 1)) ** (1.0 / (n - 1)))), 30000)
    g0 = x**p
    total = 0.0
    for l in range(1, lmax + 1):
        weight = numth.mobius(l)
        if weight == 0:
            continue
        m_count = kmax // l
        if m_count == 0:
            break
        h = l / y
        b = min(m_count * h, sqx)
        base = x - b * b
        integral = (
            x ** (p + 0.5) * 0.5 * beta_full * special.betainc(0.5, p + 1.0, (b / sqx) ** 2)
        )
        g_b = base**p if base > 0.0 else 0.0
        gp_b = -(n - 1) * b * base ** ((n - 3) / 2.0) if base > 0.0 else 0.0
        s_l = integral / h + 0.5 * (g_b - g0) + (h / 12.0) * gp_b
        total += weight / l ** (n - 1) * s_l
    return total


def eval_F(n: int, x: float, y: float) -> float:
    """F_n(x, y) = sum_{k <= sqrt(x) y} w(k, n) (x - (k/y)^2)^((n-1)/2)."""
    if n < 2:
        raise InputError(f"eval_F requires n >= 2, got {n}")
    if x <= 0 or y < 0:
        raise InputError("eval_F requires x > 0 and y >= 0")
    if y == 0.0 or y <= 1.0 / math.sqrt(x):
        return 0.0
    kmax = math.floor(math.sqrt(x) * y)
    # Euler-Maclaurin converges like the (n-3)rd derivative at the cell
    # scale; n = 3, 4 need a much later crossover than n >= 5.
    threshold = _K_EXACT if n <= 4 else 400
    if kmax <= threshold or n == 2:
        return _eval_F_exact(n, x, y, kmax)
    return _eval_F_large(n, x, y, kmax)


def eval_Y(n: int, x: float, tol: float = 0.0) -> float:
    """Solve F_n(x, y) = 1/V_{n-1} for y by bisection.

    F is nondecreasing and continuous in y, zero at y = 1/sqrt(x), so
    bisection between there and a doubled-out upper bracket is safe.
    The default tolerance of zero bisects down to float spacing.
    """
    target = 1.0 / numth.ball_volume(n - 1)
    lo = 1.0 / math.sqrt(x)
    hi = max(2.0 * lo, 1.0)
    doublings = 0
    while eval_F(n, x, hi) < target:
        hi *= 2.0
        doublings += 1
        # The solution can sit near x^(-n/2), astronomically large for
        # small x at high dimension; 2^200 still fits in a double.
        if doublings > 200:
            raise InputError("eval_Y bracket expansion failed to converge")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if eval_F(n, x, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def eval_C(n: int, x: float) -> float:
    """Envelope C_n(x) = sup over 0 < ξ <= x of ξ Y_n(ξ)^(2/n).

    The sup is searched on a geometric grid over [x/100, x] with a
    golden-section refinement of the best bracket; the right-edge value
    is always included.
    """

    def value(xi):
        return xi * eval_Y(n, xi) ** (2.0 / n)

    points = 256
    ratio = 100.0 ** (1.0 / (points - 1))
    grid = [x / 100.0 * ratio**i for i in range(points)]
    grid[-1] = x
    values = [value(xi) for xi in grid]
    best = max(range(points), key=values.__getitem__)
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, points - 1)]
    # Golden-section refinement of the bracketed maximum.
    c = b - _PHI * (b - a)
    d = a + _PHI * (b - a)
    fc, fd = value(c), value(d)
    while b - a > 1e-10 * max(1.0, x):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _PHI * (b - a)
            fc = value(c)
        else:
            a, c, fc = c, d, fd
            d = a + _PHI * (b - a)
            fd = value(d)
    refined = max(fc, fd)
    return max(refined, max(values), value(x))


def convert(kind_from: str, kind_to: str, value: float, n: int) -> float:
    """Convert among density, center-density and Hermite-constant scales."""
    if value <= 0:
        raise InputError("conversion requires a positive value")
    kinds = ("density", "center", "hermite")
    if kind_from not in kinds or kind_to not in kinds:
        raise InputError(f"kinds must be one of {kinds}")
    if kind_from == "density":
        delta = value / numth.ball_volume(n)
    elif kind_from == "center":
        delta = value
    else:
        delta = math.exp((n / 2.0) * math.log(value / 4.0))
    if kind_to == "density":
        return delta * numth.ball_volume(n)
    if kind_to == "center":
        return delta
    return 4.0 * delta ** (2.0 / n)


def _lhs_center(n: int, delta_prev: float, delta_cur: float) -> float:
    """Center-density form of the lifting inequality, left-hand side."""
    kmax = math.floor(2.0 * delta_cur / delta_prev)
    vol = numth.ball_volume(n - 1)
    total = 0.0
    for k in range(1, kmax + 1):
        base = 1.0 - (k * delta_prev / (2.0 * delta_cur)) ** 2
        if base <= 0.0:
            continue
        total += numth.mobius_weight(k, n) * base ** ((n - 1) / 2.0)
    return 2.0 ** (n - 1) * delta_prev * vol * total


def _lhs_density(n: int, density_prev: float, density_cur: float) -> float:
    vn1 = numth.ball_volume(n - 1)
    vn = numth.ball_volume(n)
    kmax = math.floor(2.0 * density_cur * vn1 / (density_prev * vn))
    total = 0.0
    for k in range(1, kmax + 1):
        base = 1.0 - (k * density_prev * vn / (2.0 * density_cur * vn1)) ** 2
        if base <= 0.0:
            continue
        total += numth.mobius_weight(k, n) * base ** ((n - 1) / 2.0)
    return 2.0 ** (n - 1) * density_prev * total


def _lhs_hermite(n: int, gamma_prev: float, gamma_cur: float) -> float:
    vn1 = numth.ball_volume(n - 1)
    kmax = math.floor(
        math.exp((n / 2.0) * math.log(gamma_cur)
                 - ((n - 1) / 2.0) * math.log(gamma_prev))
    )
    total = 0.0
    for k in range(1, kmax + 1):
        base = gamma_prev - k * k * (gamma_prev / gamma_cur) ** n
        if base <= 0.0:
            continue
        total += numth.mobius_weight(k, n) * base ** ((n - 1) / 2.0)
    return vn1 * total


def check_theorem1(n, delta_prev, delta_cur, form="center"):
    """LHS - 1 residual of the lifting inequality in the chosen form.

    Inputs are center densities regardless of form; the density and
    Hermite forms are evaluated after algebraic conversion and must
    agree with the center form to high accuracy.
    """
    if delta_prev <= 0 or delta_cur <= 0:
        raise InputError("densities must be positive")
    if form == "center":
        return _lhs_center(n, delta_prev, delta_cur) - 1.0
    if form == "density":
        return _lhs_density(
            n,
            convert("center", "density", delta_prev, n - 1),
            convert("center", "density", delta_cur, n),
        ) - 1.0
    if form == "hermite":
        return _lhs_hermite(
            n,
            convert("center", "hermite", delta_prev, n - 1),
            convert("center", "hermite", delta_cur, n),
        ) - 1.0
    raise InputError(f"unknown form {form!r}")


def mordell_upper(n: int, gamma_prev: float) -> float:
    """Mordell's bound gamma_n <= gamma_{n-1}^((n-1)/(n-2))."""
    if n < 3:
        raise InputError(f"mordell_upper requires n >= 3, got {n}")
    if gamma_prev <= 0:
        raise InputError("gamma must be positive")
    return gamma_prev ** ((n - 1) / (n - 2))


def marin_chain(n: int, delta_prev: float, delta_cur: float):
    """The three stages of the elementary majorization chain.

    Stage 1 is the lifting-inequality LHS, stage 2 drops the Moebius
    weights and rescales each summand, stage 3 majorizes the Riemann sum
    by the half-ball integral, giving 2^(n-1) Delta_n.
    """
    if delta_prev <= 0 or delta_cur <= 0:
        raise InputError("densities must be positive")
    lhs = _lhs_center(n, delta_prev, delta_cur)
    kmax = math.floor(2.0 * delta_cur / delta_prev)
    vol_prev = numth.ball_volume(n - 1)
    step = delta_prev / (2.0 * delta_cur)
    mid = 0.0
    for k in range(1, kmax + 1):
        base = 1.0 - (k * step) ** 2
        if base <= 0.0:
            continue
        mid += base ** ((n - 1) / 2.0) * step
    mid *= 2.0**n * delta_cur * vol_prev
    rhs = 2.0 ** (n - 1) * delta_cur * numth.ball_volume(n)
    return lhs, mid, rhs


def trivial_lower(delta_prev: float) -> float:
    """Orthogonal-sum bound delta_n >= delta_{n-1} / 2."""
    return delta_prev / 2.0
