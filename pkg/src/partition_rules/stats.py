"""Student t machinery for partition precision.

The t distribution is computed here from the regularized incomplete beta
function (continued fraction, modified Lentz) so that critical values do not
depend on an external statistics package. Tests cross-check against scipy and
mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

__all__ = [
    "DegenerateVarianceError",
    "DegeneratePoolError",
    "OneSidedTest",
    "TwoSidedTest",
    "TABLE_MAX_DOF",
    "betainc",
    "t_sf",
    "t_cdf",
    "t_pdf",
    "t_isf",
    "t_critical",
    "one_sided_t",
    "one_sided_test",
    "two_sided_t",
]

_EPS = 1e-16
_TINY = 1e-300
_MAXITER = 100_000

#: Largest dof listed individually by the "table" convention; beyond it the
#: normal quantile (the infinity row of a printed t-table) is used.
TABLE_MAX_DOF = 120


class DegenerateVarianceError(ValueError):
    """Observed precision is exactly 0 or 1, so the normal approximation has no variance."""


class DegeneratePoolError(ValueError):
    """Pooled proportion is exactly 0 or 1."""


def _betacf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _stirling_corr(x: float) -> float:
    # lgamma(x) - [(x - 1/2) log x - x + log(2 pi)/2], asymptotic series
    x2 = x * x
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x


def _log_beta_ratio(a: float, b: float) -> float:
    """lgamma(a + b) - lgamma(a) - lgamma(b), without cancellation for one huge argument."""
    big, small = (a, b) if a >= b else (b, a)
    if big < 100.0:
        return math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    # lgamma(big + small) - lgamma(big) by differencing Stirling's formula
    diff = (
        (big - 0.5) * math.log1p(small / big)
        + small * math.log(big + small)
        - small
        + _stirling_corr(big + small)
        - _stirling_corr(big)
    )
    return diff - math.lgamma(small)


def _betainc(a: float, b: float, x: float, xc: float, log_x: float, log_xc: float) -> float:
    front = math.exp(_log_beta_ratio(a, b) + a * log_x + b * log_xc)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, xc) / b


def betainc(a: float, b: float, x: float, xc: float | None = None) -> float:
    """Regularized incomplete beta function I_x(a, b).

    ``xc`` may carry ``1 - x`` computed without cancellation.
    """
    if a <= 0 or b <= 0:
        raise ValueError("betainc requires a > 0 and b > 0")
    if xc is None:
        xc = 1.0 - x
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    return _betainc(a, b, x, xc, math.log(x), math.log(xc))


def t_sf(t: float, dof: float) -> float:
    """Upper tail P(T > t) of Student's t with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError("dof must be positive")
    if t == 0:
        return 0.5
    t2 = t * t
    # x = dof/(dof+t^2) and 1-x = t^2/(dof+t^2), with logs taken without cancellation
    r = t2 / dof
    tail = 0.5 * _betainc(
        dof / 2.0, 0.5, 1.0 / (1.0 + r), r / (1.0 + r), -math.log1p(r), math.log(r) - math.log1p(r)
    )
    return tail if t > 0 else 1.0 - tail


def t_cdf(t: float, dof: float) -> float:
    return t_sf(-t, dof)


def t_pdf(t: float, dof: float) -> float:
    v = float(dof)
    log_pdf = (
        math.lgamma((v + 1) / 2)
        - math.lgamma(v / 2)
        - 0.5 * math.log(v * math.pi)
        - (v + 1) / 2 * math.log1p(t * t / v)
    )
    return math.exp(log_pdf)


def t_isf(q: float, dof: float) -> float:
    """Inverse survival function: the ``c`` with P(T > c) = q."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    if dof <= 0:
        raise ValueError("dof must be positive")
    if q == 0.5:
        return 0.0
    if q > 0.5:
        return -t_isf(1.0 - q, dof)

    # Cornish-Fisher start from the normal quantile, then safeguarded Newton.
    z = NormalDist().inv_cdf(1.0 - q)
    g1 = (z**3 + z) / 4.0
    g2 = (5 * z**5 + 16 * z**3 + 3 * z) / 96.0
    c = z + g1 / dof + g2 / dof**2
    if not math.isfinite(c) or c <= 0:
        c = z

    lo, hi = 0.0, max(c, 1.0)
    while t_sf(hi, dof) > q:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("t quantile bracket overflow")
    if not lo < c < hi:
        c = 0.5 * (lo + hi)

    for _ in range(200):
        f = t_sf(c, dof) - q
        if f > 0:
            lo = c
        else:
            hi = c
        pdf = t_pdf(c, dof)
        step = f / pdf if pdf > 0 else math.inf
        nxt = c + step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - c) <= 1e-14 * max(1.0, abs(c)):
            return nxt
        c = nxt
    return c


def t_critical(
    alpha: float, dof: float, two_sided: bool = True, convention: str = "exact"
) -> float:
    """Critical value of Student's t at significance ``alpha``.

    One-sided: P(T > c) = alpha. Two-sided: P(|T| > c) = alpha.

    ``convention="table"`` reproduces a printed t-table: exact quantiles up to
    :data:`TABLE_MAX_DOF` degrees of freedom and the normal quantile above.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if dof < 1:
        raise ValueError("dof must be at least 1")
    q = alpha / 2.0 if two_sided else alpha
    if convention == "table":
        if dof > TABLE_MAX_DOF:
            return NormalDist().inv_cdf(1.0 - q)
    elif convention != "exact":
        raise ValueError(f"unknown critical-value convention {convention!r}")
    return t_isf(q, dof)


def one_sided_t(p_k: float, p: float, n: int) -> float:
    """t statistic for the observed precision ``p_k`` against the requirement ``p``."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    if p_k <= 0.0 or p_k >= 1.0:
        raise DegenerateVarianceError(f"p_k={p_k} has zero binomial variance")
    return (p_k - p) / math.sqrt(p_k * (1.0 - p_k) / n)


@dataclass(frozen=True)
class OneSidedTest:
    """Outcome of testing that a partition's precision exceeds ``p``.

    ``verdict`` is ``"pass"`` or ``"fail"`` for the t-test proper. When the
    observed precision is exactly 0 or 1 the normal approximation is undefined
    and the verdict is ``"trivial-pass"``, ``"trivial-fail"`` or
    ``"insufficient"`` (all successes, but too few to beat ``p`` at ``alpha``).
    """

    p_k: float
    p: float
    n: int
    t: float | None
    dof: int
    alpha: float
    t_crit: float | None
    accept: bool
    verdict: str
    questionable: bool


def one_sided_test(in_count: int, out_count: int, p: float, alpha: float = 0.05) -> OneSidedTest:
    n = in_count + out_count
    if n < 1:
        raise ValueError("partition has no documents")
    if not 0.0 < p < 1.0:
        raise ValueError("required precision must lie in (0, 1)")
    p_k = in_count / n
    dof = n - 1
    questionable = n < 30 or min(p_k, 1.0 - p_k) < 2.0 / math.sqrt(n)

    if p_k == 0.0:
        return OneSidedTest(p_k, p, n, None, dof, alpha, None, False, "trivial-fail", questionable)
    if p_k == 1.0:
        # n straight successes are unlikely (< alpha) under precision p only when p**n < alpha
        min_n = math.ceil(math.log(alpha) / math.log(p))
        ok = n >= min_n
        return OneSidedTest(
            p_k, p, n, None, dof, alpha, None, ok, "trivial-pass" if ok else "insufficient", questionable
        )

    t = one_sided_t(p_k, p, n)
    t_crit = t_critical(alpha, dof, two_sided=False)
    accept = t > t_crit
    return OneSidedTest(
        p_k, p, n, t, dof, alpha, t_crit, accept, "pass" if accept else "fail", questionable
    )


@dataclass(frozen=True)
class TwoSidedTest:
    """Pooled two-sample comparison of training and testing precision."""

    p: float
    p_prime: float
    p_hat: float
    n: int
    n_prime: int
    t: float
    dof: int
    alpha: float
    t_crit: float
    reject: bool


def two_sided_t(
    in_a: int,
    out_a: int,
    in_b: int,
    out_b: int,
    alpha: float = 0.05,
    convention: str = "exact",
) -> TwoSidedTest:
    """Test ``p == p'`` for training counts ``(in_a, out_a)`` and testing counts ``(in_b, out_b)``.

    Degrees of freedom are ``min(n, n') - 1``.
    """
    n = in_a + out_a
    n_prime = in_b + out_b
    if n < 2 or n_prime < 2:
        raise ValueError(f"each sample needs at least 2 documents (got {n} and {n_prime})")
    p = in_a / n
    p_prime = in_b / n_prime
    p_hat = (in_a + in_b) / (n + n_prime)
    if p_hat <= 0.0 or p_hat >= 1.0:
        raise DegeneratePoolError(f"pooled proportion {p_hat} leaves no variance")
    t = (p - p_prime) / math.sqrt(p_hat * (1.0 - p_hat) * (1.0 / n_prime + 1.0 / n))
    dof = min(n, n_prime) - 1
    t_crit = t_critical(alpha, dof, two_sided=True, convention=convention)
    return TwoSidedTest(p, p_prime, p_hat, n, n_prime, t, dof, alpha, t_crit, abs(t) > t_crit)
