"""Theta-tail dynamics behind the existence bound.

tau(x) = sum_{k>=1} exp(-pi (k/x)^2) is half the third Jacobi theta
function minus 1/2; psi is its inverse, Omega(x) = x psi(1/x) the
transfer map with attracting fixed point xi = 1/tau(1), and the d_n
recursion follows the per-dimension implicit maps f_n whose limit is
Omega.  All power terms go through log1p so dimension 1024 is routine.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import numth
from .errors import InputError


@dataclass(frozen=True)
class ThetaParams:
    tolerance: float = 1e-15


def tau(x: float, params: ThetaParams = ThetaParams()) -> float:
    """Truncated theta tail sum_{k>=1} exp(-pi (k/x)^2).

    Truncation stops at the first term below tolerance times the partial
    sum; the neglected tail is dominated by twice that term.
    """
    if x <= 0:
        raise InputError(f"tau requires x > 0, got {x}")
    total = 0.0
    k = 1
    while True:
        term = math.exp(-math.pi * (k / x) ** 2)
        if k > 1 and term < params.tolerance * total:
            break
        if term == 0.0 and k > 1:
            break
        total += term
        if term == 0.0:
            break
        k += 1
    return total


def tau_derivative(x: float, params: ThetaParams = ThetaParams()) -> float:
    """tau'(x) = (2 pi / x^3) sum k^2 exp(-pi (k/x)^2)."""
    if x <= 0:
        raise InputError(f"tau_derivative requires x > 0, got {x}")
    total = 0.0
    k = 1
    while True:
        term = k * k * math.exp(-math.pi * (k / x) ** 2)
        if k > 1 and term < params.tolerance * total:
            break
        if term == 0.0 and k > 1:
            break
        total += term
        if term == 0.0:
            break
        k += 1
    return 2.0 * math.pi / x**3 * total


def psi(t: float, params: ThetaParams = ThetaParams()) -> float:
    """Inverse of tau by bisection on the bracket (2t, 2t + 2)."""
    if t <= 0:
        raise InputError(f"psi requires t > 0, got {t}")
    lo = max(2.0 * t, 1e-300)
    hi = 2.0 * t + 2.0
    # tau(x) < x/2 gives tau(lo) < t; x/2 - 1 < tau(x) gives tau(hi) > t.
    while hi - lo > 1e-13 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if tau(mid, params) < t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def omega(x: float, params: ThetaParams = ThetaParams()) -> float:
    """Transfer map Omega(x) = x psi(1/x); always > 2."""
    if x <= 0:
        raise InputError(f"omega requires x > 0, got {x}")
    return x * psi(1.0 / x, params)


def fixpoint(params: ThetaParams = ThetaParams()):
    """Fixed point xi = 1/tau(1) and the derivative 1 - tau(1)/tau'(1)."""
    t1 = tau(1.0, params)
    return 1.0 / t1, 1.0 - t1 / tau_derivative(1.0, params)


def f_step(n: int, x: float, rel_tol: float = 1e-12) -> float:
    """Implicit per-dimension map: solve for y in

        x * sum_{k=1}^{floor(y V_n / (x V_{n+1}))}
            (1 - k^2 (x V_{n+1} / (y V_n))^2)^(n/2) = 1.

    The left side is continuous and nondecreasing in y, zero for small y
    and unbounded, so bisection is well posed.
    """
    if n < 1 or x <= 0:
        raise InputError("f_step requires n >= 1 and x > 0")
    ratio = math.exp(numth.log_ball_volume(n + 1) - numth.log_ball_volume(n))

    def lhs(y):
        step = x * ratio / y
        kmax = math.floor(1.0 / step)
        total = 0.0
        for k in range(1, kmax + 1):
            t = (k * step) ** 2
            if t >= 1.0:
                continue
            total += math.exp((n / 2.0) * math.log1p(-t))
        return x * total

    lo = x * ratio
    hi = 2.0 * lo
    doublings = 0
    while lhs(hi) < 1.0:
        hi *= 2.0
        doublings += 1
        if doublings > 60:
            raise InputError("f_step bracket expansion failed to converge")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if lhs(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class FlowRow:
    n: int
    d: float
    omega_iterate: float
    scaled_diff: float
    A: int


@dataclass(frozen=True)
class FlowTrace:
    rows: tuple
    xi: float
    xi_derivative: float

    def row(self, n: int) -> FlowRow:
        return self.rows[n - 1]


def iterate_d(max_n: int, params: ThetaParams = ThetaParams()) -> FlowTrace:
    """Run d_1 = 2, d_{n+1} = f_n(d_n) with the parallel Omega iterates."""
    if max_n < 1:
        raise InputError(f"iterate_d requires max_n >= 1, got {max_n}")
    xi, deriv = fixpoint(params)
    rows = []
    d = 2.0
    w = 2.0
    prev_d = None
    for n in range(1, max_n + 1):
        if n > 1:
            prev_d = d
            d = f_step(n - 1, d)
            w = omega(w, params)
        if prev_d is None:
            a_n = 0
        else:
            a_n = math.floor(
                d * math.exp(numth.log_ball_volume(n - 1) - numth.log_ball_volume(n))
                / prev_d
            )
        rows.append(
            FlowRow(n=n, d=d, omega_iterate=w, scaled_diff=n * (d - w), A=a_n)
        )
    return FlowTrace(rows=tuple(rows), xi=xi, xi_derivative=deriv)


def iterate_perturbed(f_seq, x0: float, steps: int):
    """Drive s_n = f_n(s_{n-1}) for a sequence of maps; returns s_1..s_steps."""
    values = []
    x = x0
    for i in range(steps):
        try:
            x = f_seq[i](x)
        except Exception as exc:
            raise InputError(f"map {i + 1} failed at input {x!r}: {exc}") from exc
        if not math.isfinite(x):
            raise InputError(f"iteration escaped the domain at step {i + 1}")
        values.append(x)
    return values


def perturbation_error_bounds(lam: float, initial_gap: float, sup_diffs):
    """Per-step bounds lam^n |x0 - xi| + sum lam^(n-k) sup|f_k - f|."""
    bounds = []
    acc = abs(initial_gap)
    for diff in sup_diffs:
        acc = lam * acc + abs(diff)
        bounds.append(acc)
    return bounds


@dataclass(frozen=True)
class AsymptoticFit:
    c0: float
    c1: float
    c2: float
    c3: float
    ladder: tuple = field(default=(128, 256, 512, 1024))

    def predict(self, n: int) -> float:
        return self.c0 + self.c1 / n + self.c2 / n**2 + self.c3 / n**3


def asymptotic_fit(trace: FlowTrace, ladder=(128, 256, 512, 1024)) -> AsymptoticFit:
    """Fit d_n = c0 + c1/n + c2/n^2 + c3/n^3 through four ladder points."""
    if len(set(ladder)) != 4:
        raise InputError("ladder must contain four distinct indices")
    if max(ladder) > len(trace.rows):
        raise InputError("trace does not reach the requested ladder")
    u = np.array([1.0 / n for n in ladder])
    vand = np.vander(u, 4, increasing=True)
    rhs = np.array([trace.row(n).d for n in ladder])
    c = np.linalg.solve(vand, rhs)
    return AsymptoticFit(
        c0=float(c[0]), c1=float(c[1]), c2=float(c[2]), c3=float(c[3]),
        ladder=tuple(ladder),
    )
