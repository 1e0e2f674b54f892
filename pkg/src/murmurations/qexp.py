"""Independent ground truth for Hecke traces on level-1 cusp forms: integer
q-expansions built from the eta product and Eisenstein series.

Deliberately self-contained (its own divisor sums, no sieve machinery) so it
can validate the trace-formula module without shared code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "IntegerPowerSeries",
    "eta_power_24",
    "eisenstein",
    "newform_qexp",
    "oracle_trace",
    "hecke_coefficient",
    "dimension_supported",
]

# weights with dim S_k(1) = 1 and the (a, b) in Delta * E4^a * E6^b
_NEWFORM_FACTORS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}
_ZERO_DIM_WEIGHTS = {4, 6, 8, 10, 14}


@dataclass
class IntegerPowerSeries:
    """Truncated integer power series; coeffs[i] is the q^i coefficient.

    Exponents 0..prec-1 are known; offset records the first structurally
    nonzero exponent.  Python integers keep every coefficient exact.
    """

    coeffs: list[int]
    offset: int = 0

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if n >= self.prec:
            raise IndexError(f"coefficient q^{n} beyond precision {self.prec}")
        return self.coeffs[n] if n >= 0 else 0

    def mul(self, other: "IntegerPowerSeries") -> "IntegerPowerSeries":
        n = min(self.prec + other.offset, other.prec + self.offset)
        out = [0] * n
        for i in range(self.offset, min(self.prec, n)):
            a = self.coeffs[i]
            if a == 0:
                continue
            jmax = min(other.prec, n - i)
            for j in range(other.offset, jmax):
                out[i + j] += a * other.coeffs[j]
        return IntegerPowerSeries(out, self.offset + other.offset)

    def pow(self, e: int) -> "IntegerPowerSeries":
        result = IntegerPowerSeries([1] + [0] * (self.prec - 1), 0)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    def scale(self, k: int) -> "IntegerPowerSeries":
        return IntegerPowerSeries([k * a for a in self.coeffs], self.offset)

    def sub(self, other: "IntegerPowerSeries") -> "IntegerPowerSeries":
        n = min(self.prec, other.prec)
        return IntegerPowerSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(n)],
            min(self.offset, other.offset),
        )


def _sigma_power(n: int, k: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            q = n // d
            if q != d:
                total += q**k
        d += 1
    return total


def _euler_product(prec: int) -> IntegerPowerSeries:
    # prod (1 - q^m) via the pentagonal number expansion
    coeffs = [0] * prec
    coeffs[0] = 1
    j = 1
    while True:
        hit = False
        for g in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if g < prec:
                coeffs[g] += (-1) ** j
                hit = True
        if not hit:
            break
        j += 1
    return IntegerPowerSeries(coeffs, 0)


def eta_power_24(precision: int) -> IntegerPowerSeries:
    """q * prod (1 - q^m)^24 with coefficients through q^precision."""
    if not 1 <= precision <= 10**4:
        raise ValueError("precision must be in [1, 10^4]")
    p24 = _euler_product(precision).pow(24)
    return IntegerPowerSeries([0] + p24.coeffs[: precision], 1)


def eisenstein(k: int, precision: int) -> IntegerPowerSeries:
    if k == 4:
        mult, power = 240, 3
    elif k == 6:
        mult, power = -504, 5
    else:
        raise ValueError("only Eisenstein weights 4 and 6 are provided")
    coeffs = [1] + [mult * _sigma_power(n, power) for n in range(1, precision + 1)]
    return IntegerPowerSeries(coeffs, 0)


def newform_qexp(k: int, precision: int) -> IntegerPowerSeries:
    """The normalized eigenform of one-dimensional S_k(1), coefficients
    lambda_f(n) n^((k-1)/2) through q^precision."""
    if k not in _NEWFORM_FACTORS:
        raise ValueError(f"weight {k} does not have a one-dimensional cusp space")
    a, b = _NEWFORM_FACTORS[k]
    series = eta_power_24(precision)
    if a:
        series = series.mul(eisenstein(4, precision).pow(a))
    if b:
        series = series.mul(eisenstein(6, precision).pow(b))
    return IntegerPowerSeries(series.coeffs[: precision + 1], 1)


def hecke_coefficient(series: IntegerPowerSeries, n: int, k: int, m: int) -> int:
    """q^m coefficient of T_n applied to the series (weight k action)."""
    g = math.gcd(n, m)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += d ** (k - 1) * series[n * m // (d * d)]
    return total


def dimension_supported(k: int) -> bool:
    return k in _ZERO_DIM_WEIGHTS or k in _NEWFORM_FACTORS or k == 24


def oracle_trace(k: int, n: int) -> int:
    """Exact trace of T_n on S_k(1) from q-expansions.

    Zero-dimensional weights give 0; one-dimensional weights read the
    newform coefficient; k = 24 takes the matrix trace of T_n on the basis
    {Delta E4^3, Delta E6^2} computed coefficient-wise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if k in _ZERO_DIM_WEIGHTS:
        return 0
    if k in _NEWFORM_FACTORS:
        return newform_qexp(k, n)[n]
    if k != 24:
        raise ValueError(f"weight {k} not supported by the q-expansion oracle")
    prec = 2 * n + 1
    delta = eta_power_24(prec)
    g1 = delta.mul(eisenstein(4, prec).pow(3))
    g2 = delta.mul(eisenstein(6, prec).pow(2))
    a2, b2 = g1[2], g2[2]
    # T_n g_i = alpha g1 + beta g2 is determined by the q^1, q^2 coefficients
    trace = Fraction(0)
    for g in (g1, g2):
        c1 = hecke_coefficient(g, n, 24, 1)
        c2 = hecke_coefficient(g, n, 24, 2)
        if g is g1:
            trace += Fraction(c2 - c1 * b2, a2 - b2)
        else:
            trace += Fraction(c1 * a2 - c2, a2 - b2)
    if trace.denominator != 1:
        raise ArithmeticError(f"non-integral trace {trace} for k=24, n={n}")
    return int(trace)
