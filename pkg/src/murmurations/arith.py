"""Exact integer number theory: smallest-prime-factor sieve, multiplicative
functions, the Kronecker symbol, Ramanujan sums, and the analytic-conductor
scale for even weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "FactorSieve",
    "build_factor_sieve",
    "kronecker",
    "ramanujan_sum",
    "euler_constant_C",
    "default_euler_constant",
    "digamma",
    "AnalyticConductor",
    "analytic_conductor",
]


class FactorSieve:
    """Smallest-prime-factor table for 2..bound.

    ``spf[n]`` is the least prime dividing n, so any n <= bound factors by
    repeated division.  Immutable after construction; safe to share between
    threads.
    """

    __slots__ = ("bound", "spf", "primes")

    def __init__(self, bound: int, spf: np.ndarray, primes: np.ndarray):
        self.bound = bound
        self.spf = spf
        self.primes = primes

    def is_prime(self, n: int) -> bool:
        if not 2 <= n <= self.bound:
            raise ValueError(f"{n} outside sieve range [2, {self.bound}]")
        return int(self.spf[n]) == n

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n as (p, exponent) pairs, p ascending."""
        if not 1 <= n <= self.bound:
            raise ValueError(f"{n} outside sieve range [1, {self.bound}]")
        spf = self.spf
        out = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def mobius(self, n: int) -> int:
        fac = self.factorize(n)
        if any(e > 1 for _, e in fac):
            return 0
        return -1 if len(fac) % 2 else 1

    def euler_phi(self, n: int) -> int:
        phi = 1
        for p, e in self.factorize(n):
            phi *= (p - 1) * p ** (e - 1)
        return phi

    def sigma(self, n: int) -> int:
        s = 1
        for p, e in self.factorize(n):
            s *= (p ** (e + 1) - 1) // (p - 1)
        return s

    def divisors(self, n: int) -> list[int]:
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return sorted(divs)

    def radical(self, n: int) -> int:
        r = 1
        for p, _ in self.factorize(n):
            r *= p
        return r

    def f_multiplicative(self, t: int) -> float:
        """prod over p | t of (1 + 1/(p^2-p-1)); depends only on radical(t).

        t = 0 is taken as the product over every sieve prime (the limit of
        divisibility by all primes); see ``f_zero_tail_bound`` for the size
        of the omitted tail.
        """
        if t == 0:
            p = self.primes.astype(np.float64)
            return math.exp(math.fsum(np.log1p(1.0 / (p * p - p - 1.0))))
        t = abs(t)
        if t > self.bound:
            raise ValueError(f"|t|={t} exceeds sieve bound {self.bound}")
        val = 1.0
        for p, _ in self.factorize(t):
            val *= 1.0 + 1.0 / (p * p - p - 1)
        return val

    def f_zero_tail_bound(self) -> float:
        """Upper bound for the relative tail omitted by f_multiplicative(0).

        The omitted factor is prod_{p > bound} (1 + 1/(p^2-p-1)) which is at
        most exp(sum_{n > bound} 2/n^2) <= exp(2/bound).
        """
        return math.expm1(2.0 / self.bound)


def build_factor_sieve(bound: int) -> FactorSieve:
    """Sieve smallest prime factors for 2..bound (4 bytes per entry)."""
    if bound < 2:
        raise ValueError("sieve bound must be at least 2")
    if bound >= 2**31:
        raise ValueError("sieve bound must fit in 32 bits")
    spf = np.zeros(bound + 1, dtype=np.int32)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    # untouched entries are prime
    idx = np.arange(2, bound + 1, dtype=np.int32)
    unmarked = spf[2:] == 0
    spf[2:][unmarked] = idx[unmarked]
    primes = idx[spf[2:] == idx].astype(np.int64)
    return FactorSieve(bound, spf, primes)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), fully extended (n may be 0 or negative)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        e = 0
        while n % 2 == 0:
            n //= 2
            e += 1
        if e % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive; run the Jacobi reciprocity loop
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def ramanujan_sum(sieve: FactorSieve, q: int, t: int) -> int:
    """c_q(t) = mu(q/g) phi(q) / phi(q/g) with g = gcd(q, t).

    Equals the exponential sum over primitive residues a mod q of e(at/q).
    """
    if not 1 <= q <= sieve.bound:
        raise ValueError(f"q={q} outside sieve range")
    g = math.gcd(q, abs(t))
    qg = q // g
    mu = sieve.mobius(qg)
    if mu == 0:
        return 0
    phi_q = sieve.euler_phi(q)
    phi_qg = sieve.euler_phi(qg)
    return mu * (phi_q // phi_qg)


def euler_constant_C(prime_bound: int) -> float:
    """Truncated Euler product prod_{p <= bound} (1 - 1/((p-1)^2 (p+1))).

    Accumulated in log space over ascending primes; the result is monotone
    decreasing in prime_bound and converges like sum_{p > bound} p^-3.
    """
    if prime_bound < 2:
        raise ValueError("prime_bound must be at least 2")
    is_p = np.ones(prime_bound + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(prime_bound) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    p = np.nonzero(is_p)[0].astype(np.float64)
    logs = np.log1p(-1.0 / ((p - 1.0) ** 2 * (p + 1.0)))
    return math.exp(math.fsum(logs))


@lru_cache(maxsize=1)
def default_euler_constant() -> float:
    """euler_constant_C at the standard working bound 10^6."""
    return euler_constant_C(10**6)


# B_{2n}/(2n) for 2n = 2, 4, ..., 12; the asymptotic series is applied only
# for arguments >= 16 where the first omitted term is below 1e-18.
_DIGAMMA_COEFFS = (
    1.0 / 12,
    -1.0 / 120,
    1.0 / 252,
    -1.0 / 240,
    1.0 / 132,
    -691.0 / 32760,
)


def digamma(x: float) -> float:
    """Digamma via upward recurrence onto the asymptotic-series region."""
    if x <= 0:
        raise ValueError("digamma requires a positive argument")
    acc = 0.0
    while x < 16.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = math.log(x) - 0.5 / x
    power = inv2
    for c in _DIGAMMA_COEFFS:
        s -= c * power
        power *= inv2
    return s + acc


@dataclass(frozen=True)
class AnalyticConductor:
    """Size parameter N = (exp(digamma(k/2)) / 2 pi)^2 of an even weight k."""

    k: float
    N: float


def analytic_conductor(k: float) -> AnalyticConductor:
    if k < 4:
        raise ValueError("weight must be at least 4")
    n = (math.exp(digamma(k / 2.0)) / (2.0 * math.pi)) ** 2
    return AnalyticConductor(k=k, N=n)
