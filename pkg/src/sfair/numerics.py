"""Shared statistical primitives: min-max scaling, Lorenz/Gini, Pearson, t-test.

Everything here is pure stdlib float arithmetic so results are deterministic
across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

SIGNIFICANCE_LEVEL = 0.05

# Relative tolerance of the incomplete-beta continued fraction.
_BETA_EPS = 1e-12
_BETA_MAX_ITER = 500


@dataclass(frozen=True)
class LorenzCurve:
    """Rank fractiles x_i = i/n and cumulated share fractiles y_i, ascending order."""

    n: int
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_value: float
    significant: bool


def min_max_normalize(values: Sequence[float], value: float) -> float:
    """Scale `value` into [0, 1] against the span of `values`.

    A degenerate span (all values equal) maps to 0: the sole option is
    treated as the best available one.
    """
    if not values:
        raise ValueError("cannot normalize against an empty value set")
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return 0.0
    return (value - lo) / (hi - lo)


def lorenz(values: Sequence[float]) -> LorenzCurve:
    """Lorenz curve of a nonnegative series, cumulated from the lowest value."""
    if not values:
        raise ValueError("lorenz curve needs at least one value")
    for v in values:
        if v < 0:
            raise ValueError(f"lorenz curve values must be nonnegative, got {v}")
    ordered = sorted(values)
    n = len(ordered)
    cum: list[float] = []
    running = 0.0
    for v in ordered:
        running += v
        cum.append(running)
    total = cum[-1]
    if total <= 0:
        raise ValueError("lorenz curve needs a positive total")
    x = tuple((i + 1) / n for i in range(n))
    y = tuple(c / total for c in cum)
    return LorenzCurve(n=n, x=x, y=y)


def gini(values: Sequence[float]) -> float:
    """Gini coefficient G = (2/n) * sum(x_i - y_i) over the ascending Lorenz curve.

    0 means a perfectly even distribution.  Note the formula's ceiling is
    (n-1)/n, reached when the whole total sits in a single value, not 1.
    """
    curve = lorenz(values)
    acc = 0.0
    for xi, yi in zip(curve.x, curve.y):
        acc += xi - yi
    return (2.0 / curve.n) * acc


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise ValueError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise ValueError(f"correlation needs at least 3 points, got {n}")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for x, y in zip(xs, ys):
        dx = x - mx
        dy = y - my
        sxy += dx * dy
        sxx += dx * dx
        syy += dy * dy
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for a zero-variance series")
    return sxy / math.sqrt(sxx * syy)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the regularized incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), computed via the continued fraction with the symmetry transform."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, df: int) -> float:
    """CDF of Student's t distribution with `df` degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def correlation_significance(r: float, n: int) -> CorrelationResult:
    """Two-sided t-test of a Pearson coefficient against zero, alpha 0.05.

    |r| == 1 short-circuits (t diverges): reported as p = 0, significant.
    """
    if n < 3:
        raise ValueError(f"t-test needs at least 3 samples, got {n}")
    if abs(r) > 1.0:
        raise ValueError(f"correlation coefficient out of range [-1, 1]: {r}")
    if abs(r) == 1.0:
        t = math.inf if r > 0 else -math.inf
        return CorrelationResult(r=r, n=n, t_stat=t, p_value=0.0, significant=True)
    df = n - 2
    t = r * math.sqrt(df / (1.0 - r * r))
    # Two-sided p: P(|T| >= |t|) = I_x(df/2, 1/2) at x = df / (df + t^2).
    p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t)) if t != 0.0 else 1.0
    return CorrelationResult(
        r=r, n=n, t_stat=t, p_value=p, significant=p < SIGNIFICANCE_LEVEL
    )
