"""Closed-form bound quantities: digit sums, exponent constants, the
sub-Gaussian tail bound, and the exact tail of a sum of discrete uniforms.

The exponent constants use the natural logarithm: the deduction of the
k-th power density bound from the general map bound goes through
e^(-m^2/2nd^2) <= q^(-cn) with m >= n/k and d the base-q digit sum, which
forces c = (2 k^2 D^2 ln q)^(-1).

Tail probabilities are exact rationals: the number of exponent vectors in
{0,...,q-1}^n of weight j is the coefficient of x^j in (1+x+...+x^(q-1))^n,
computed by integer convolution and never rounded.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError


def digit_sum(k: int, q: int) -> int:
    """Sum of the base-q digits of k."""
    if k < 1 or q < 2:
        raise ContractError("digit_sum needs k >= 1 and q >= 2")
    s = 0
    while k:
        s += k % q
        k //= q
    return s


def c_main(k: int, q: int) -> float:
    """Density exponent for the k-th power problem: 1/(2 k^2 D_q(k)^2 ln q)."""
    if k < 2 or q < 2:
        raise ContractError("c_main needs k >= 2 and q >= 2")
    d = digit_sum(k, q)
    return 1.0 / (2.0 * k * k * d * d * math.log(q))


def c_prime(k: int, q: int) -> float:
    """Density exponent for a general degree-k image polynomial."""
    if k < 1 or q < 2:
        raise ContractError("c_prime needs k >= 1 and q >= 2")
    lg = 1.0 + math.log(k, q)
    return 1.0 / (2.0 * k * k * (q - 1) ** 2 * lg * lg * math.log(q))


def hoeffding_bound(q: int, n: int, m: int, d: int) -> float:
    """The closed-form set-size bound 2 q^n e^(-m^2 / 2 n d^2)."""
    if not (0 < m <= n):
        raise ContractError(f"need 0 < m <= n, got m={m} n={n}")
    if d < 1:
        raise ContractError(f"need d >= 1, got d={d}")
    log_val = n * math.log(q) - m * m / (2.0 * n * d * d)
    try:
        return 2.0 * math.exp(log_val)
    except OverflowError:
        return math.inf


@functools.lru_cache(maxsize=None)
def weight_counts(q: int, n: int) -> tuple[int, ...]:
    """counts[j] = #{alpha in {0..q-1}^n : alpha_1 + ... + alpha_n = j}."""
    counts = [1]
    for _ in range(n):
        nxt = [0] * (len(counts) + q - 1)
        for j, c in enumerate(counts):
            for a in range(q):
                nxt[j + a] += c
        counts = nxt
    return tuple(counts)


def monomial_count_at_most(q: int, n: int, t) -> int:
    """#{alpha in {0..q-1}^n : |alpha| <= t}, t an exact rational."""
    t = Fraction(t)
    if t < 0:
        return 0
    cap = math.floor(t)
    counts = weight_counts(q, n)
    return sum(counts[: min(cap, len(counts) - 1) + 1])


def exact_tail(q: int, n: int, t) -> Fraction:
    """P(X_1 + ... + X_n <= t) for i.i.d. uniforms on {0,...,q-1}, exact."""
    return Fraction(monomial_count_at_most(q, n, t), q ** n)


def theorem_threshold(which: str, q: int, n: int, k: int) -> float:
    """The density threshold 2 q^((1-c)n) above which the theorems bite."""
    if which == "thm1":
        c = c_main(k, q)
    elif which == "thm2":
        c = c_prime(k, q)
    else:
        raise ContractError(f"unknown theorem tag {which!r}")
    try:
        return 2.0 * math.exp((1.0 - c) * n * math.log(q))
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class BoundReport:
    """All closed-form quantities for one (q, n, k) or (q, n, m, d) instance."""
    q: int
    n: int
    k: int | None
    m: int
    d: int
    D: int | None
    c: float | None
    c_prime: float | None
    threshold_thm1: float | None
    threshold_thm2: float | None
    hoeffding: float
    tail: Fraction
    exact_count: int

    @property
    def vacuous(self) -> bool:
        """True when the closed-form bound does not beat the whole space."""
        return self.hoeffding >= self.q ** self.n


def bound_report(q: int, n: int, k: int | None = None,
                 m: int | None = None, d: int | None = None) -> BoundReport:
    """Assemble a BoundReport.

    With k given, m defaults to floor((n-1)/k) + 1 and d to the base-q digit
    sum of k, matching the k-th power map construction.
    """
    if q < 2 or n < 1:
        raise ContractError(f"need q >= 2 and n >= 1, got q={q} n={n}")
    dd = cc = ccp = t1 = t2 = None
    if k is not None:
        if k < 2:
            raise ContractError("k must be >= 2")
        dd = digit_sum(k, q)
        cc = c_main(k, q)
        ccp = c_prime(k, q)
        t1 = theorem_threshold("thm1", q, n, k)
        t2 = theorem_threshold("thm2", q, n, k)
        if m is None:
            m = (n - 1) // k + 1
        if d is None:
            d = dd
    if m is None or d is None:
        raise ContractError("need k, or explicit m and d")
    t = Fraction(q - 1) * (Fraction(n) - Fraction(m, d)) / 2
    return BoundReport(
        q=q, n=n, k=k, m=m, d=d, D=dd, c=cc, c_prime=ccp,
        threshold_thm1=t1, threshold_thm2=t2,
        hoeffding=hoeffding_bound(q, n, m, d),
        tail=exact_tail(q, n, t),
        exact_count=monomial_count_at_most(q, n, t),
    )
