"""Eichler-Selberg trace formula for level 1: exact Hecke traces, the
normalized eigenvalue sum at primes in cosine form, and closed-form cosine
sums over weight progressions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import FactorSieve, kronecker
from .classnum import ClassNumberTable, decompose_discriminant

__all__ = [
    "TableBoundError",
    "TraceContext",
    "EllipticAngle",
    "trace_hecke",
    "eigenvalue_sum_prime",
    "progression_cosine_sum",
    "progression_weights",
]


class TableBoundError(ValueError):
    """A query needs class numbers beyond the sieved bound."""

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"class-number table covers |D| <= {available}, need {required}"
        )


@dataclass(frozen=True)
class EllipticAngle:
    """Angle phi = arcsin(t / 2 sqrt(n)) in (-pi/2, pi/2) for t^2 < 4n."""

    t: int
    n: int
    phi: float

    @classmethod
    def of(cls, t: int, n: int) -> "EllipticAngle":
        if t * t >= 4 * n:
            raise ValueError(f"t^2 = {t*t} must be below 4n = {4*n}")
        return cls(t=t, n=n, phi=math.asin(t / (2.0 * math.sqrt(n))))


@dataclass
class TraceContext:
    """Shared immutable state for trace evaluations.

    The elliptic-term Dirichlet values L(1, psi_D) for all D down to -bound
    are materialized lazily as one float array; construction is the only
    mutation, queries afterwards are pure and thread-safe.
    """

    table: ClassNumberTable
    sieve: FactorSieve
    _l1: np.ndarray | None = field(default=None, repr=False)
    _w12: dict = field(default_factory=dict, repr=False)

    def require(self, abs_disc: int) -> None:
        if abs_disc > self.table.bound:
            raise TableBoundError(abs_disc, self.table.bound)
        if abs_disc > self.sieve.bound:
            raise TableBoundError(abs_disc, self.sieve.bound)

    def weight12(self, D: int) -> int:
        """12 h(d)/w(d) * prod_{p | ell}(p^e + (1 - (d/p))(p^e - 1)/(p - 1)).

        Exact integer: w(d) divides 12.  Cached per discriminant.
        """
        w = self._w12.get(D)
        if w is not None:
            return w
        fac = decompose_discriminant(D, self.sieve)
        hd = int(self.table.h[-fac.d])
        if fac.d == -3:
            units = 6
        elif fac.d == -4:
            units = 4
        else:
            units = 2
        prod = 1
        for p, e in self.sieve.factorize(fac.ell):
            pe = p**e
            prod *= pe + (1 - kronecker(fac.d, p)) * (pe - 1) // (p - 1)
        w = 12 * hd * prod // units
        self._w12[D] = w
        return w

    def l1_array(self) -> np.ndarray:
        """L(1, psi_D) indexed by |D| for every D = 0, 1 mod 4, -bound <= D < 0."""
        if self._l1 is None:
            bound = self.table.bound
            w12 = np.zeros(bound + 1, dtype=np.float64)
            for n in range(3, bound + 1):
                if n % 4 in (0, 3):
                    w12[n] = self.weight12(-n)
            absd = np.arange(bound + 1, dtype=np.float64)
            absd[0] = 1.0
            # L(1, psi_D) = 2 pi (h(d)/w(d)) prod(...) / sqrt|D|
            self._l1 = (2.0 * math.pi / 12.0) * w12 / np.sqrt(absd)
            self._w12.clear()
        return self._l1

    def l1(self, D: int) -> float:
        self.require(-D)
        return float(self.l1_array()[-D])


def _lucas_row(t: int, n: int, jmax: int) -> list[int]:
    """u_0..u_jmax with u_{j+1} = t u_j - n u_{j-1}; u_j = (rho^{j+1} -
    conj^{j+1})/(rho - conj) for the roots of X^2 - t X + n."""
    row = [1] * (jmax + 1)
    if jmax >= 1:
        row[1] = t
    for j in range(2, jmax + 1):
        row[j] = t * row[j - 1] - n * row[j - 2]
    return row


def trace_hecke(ctx: TraceContext, k: int, n: int) -> int:
    """Exact integer trace of T_n on S_k(1), k even >= 2.

    All four pieces are accumulated in twelfths so the elliptic weights
    h(d)/w(d) stay integral; the total is exactly divisible by 12.
    """
    if k < 2 or k % 2:
        raise ValueError("weight must be an even integer >= 2")
    if n < 1:
        raise ValueError("n must be positive")
    ctx.require(4 * n)
    twelfths = 0
    root = math.isqrt(n)
    if root * root == n:
        twelfths += n ** (k // 2 - 1) * (k - 1)
    # elliptic terms over t^2 < 4n, symmetric in t for even k
    tmax = math.isqrt(4 * n - 1)
    for t in range(0, tmax + 1):
        u = _lucas_row(t, n, k - 2)[k - 2]
        term = u * ctx.weight12(t * t - 4 * n)
        twelfths -= term if t == 0 else 2 * term
    # hyperbolic: (1/2) sum over d | n of min(d, n/d)^(k-1)
    hyp = sum(min(d, n // d) ** (k - 1) for d in ctx.sieve.divisors(n))
    twelfths -= 6 * hyp
    if k == 2:
        twelfths += 12 * ctx.sieve.sigma(n)
    if twelfths % 12:
        raise ArithmeticError(f"non-integral trace for k={k}, n={n}")
    return twelfths // 12


def eigenvalue_sum_prime(ctx: TraceContext, k: int, p: int) -> float:
    """sum over f in H_k(1) of lambda_f(p) for prime p, by the cosine form:

    -p^((1-k)/2) + ((-1)^(k/2) / pi) * sum_{t^2 < 4p} cos((k-1) phi_{t,p})
    L(1, psi_{t^2 - 4p}).
    """
    if k < 4 or k % 2:
        raise ValueError("weight must be an even integer >= 4")
    if not ctx.sieve.is_prime(p):
        raise ValueError(f"{p} is not prime")
    ctx.require(4 * p)
    l1 = ctx.l1_array()
    tmax = math.isqrt(4 * p - 1)
    t = np.arange(1, tmax + 1, dtype=np.int64)
    phi = np.arcsin(t / (2.0 * math.sqrt(p)))
    inner = float(l1[4 * p]) + 2.0 * float(
        np.dot(np.cos((k - 1) * phi), l1[4 * p - t * t])
    )
    sign = 1.0 if k % 4 == 0 else -1.0
    return -math.exp(0.5 * (1 - k) * math.log(p)) + sign * inner / math.pi


def progression_weights(K: float, H: float, delta: int) -> tuple[int, int]:
    """(k_min, count) of even weights k = 2 delta mod 4 in [K-H, K+H], k >= 4."""
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    if H < 0:
        raise ValueError("H must be nonnegative")
    residue = 2 * delta if delta else 4
    lo = max(4.0, K - H)
    k_min = residue + 4 * math.ceil((lo - residue) / 4.0)
    k_max = residue + 4 * math.floor((K + H - residue) / 4.0)
    if k_max < k_min:
        return k_min, 0
    return k_min, (k_max - k_min) // 4 + 1


def progression_cosine_sum(K: float, H: float, delta: int, phi: float) -> float:
    """sum of cos((k-1) phi) over the weight progression of (K, H, delta).

    Closed Dirichlet-kernel form Re(e^{i(kmin-1)phi} (e^{4im phi}-1) /
    (e^{4i phi}-1)) with a direct-summation fallback near the degenerate
    denominator |sin 2 phi| < 1e-8.
    """
    k_min, m = progression_weights(K, H, delta)
    if m == 0:
        return 0.0
    if abs(math.sin(2.0 * phi)) < 1e-8:
        return float(
            np.sum(np.cos((k_min - 1 + 4 * np.arange(m, dtype=np.float64)) * phi))
        )
    num = complex(math.cos(4 * m * phi), math.sin(4 * m * phi)) - 1.0
    den = complex(math.cos(4 * phi), math.sin(4 * phi)) - 1.0
    lead = complex(math.cos((k_min - 1) * phi), math.sin((k_min - 1) * phi))
    return (lead * num / den).real
