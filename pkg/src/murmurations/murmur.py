"""The averaged-eigenvalue statistic over weight windows: per-prime numerator
and denominator terms, cumulative scaled curves, and the integer-summation
variant of the limit measure."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import analytic_conductor
from .nu import Interval
from .trace import TableBoundError, TraceContext, progression_weights

__all__ = [
    "MurmurationRequest",
    "MurmurationSeries",
    "dimension_S_k",
    "compute_series",
    "cumulative_curve",
    "integer_murmuration_nu",
]

_CHUNK = 512


def dimension_S_k(k: int) -> int:
    """dim S_k(1) for even k >= 0 (0 for k in {0, 2})."""
    if k % 2 or k < 0:
        raise ValueError("weight must be an even nonnegative integer")
    if k < 4:
        return 0
    return k // 12 - (1 if k % 12 == 2 else 0)


@dataclass(frozen=True)
class MurmurationRequest:
    """Parameters of one statistic run.

    delta selects the root-number class k = 2 delta mod 4; weights range over
    |k - K| <= H (k >= 4); E is the window in y = n / N.  weighting 'sqrt_p'
    averages lambda_f(p) sqrt(p) instead; summand_domain 'integers' sums over
    all n with the full trace formula rather than primes only.
    """

    delta: int
    K: float
    H: float
    E: Interval
    weighting: str = "unit"
    summand_domain: str = "primes"

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")
        if not 0 < self.H < self.K:
            raise ValueError("need 0 < H < K (weights stay >= 4)")
        if self.weighting not in ("unit", "sqrt_p"):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        if self.summand_domain not in ("primes", "integers"):
            raise ValueError(f"unknown summand domain {self.summand_domain!r}")


@dataclass
class MurmurationSeries:
    """Per-summand numerator/denominator values and the running scaled ratio.

    n holds the summation points (primes, or all integers), x = n / N,
    numerator[i] = log(n) * (weighted eigenvalue sum over the k-window),
    denominator[i] = log(n) * (count of forms in the window), and
    cumulative[i] = x[i] sqrt(N) * (partial numerator sum / partial
    denominator sum).
    """

    N: float
    delta: int
    weighting: str
    summand_domain: str
    n: np.ndarray
    x: np.ndarray
    numerator: np.ndarray
    denominator: np.ndarray
    cumulative: np.ndarray

    @property
    def num_total(self) -> float:
        return float(math.fsum(self.numerator))

    @property
    def den_total(self) -> float:
        return float(math.fsum(self.denominator))


def _geometric_progression_sum(r: float, k_min: int, m: int) -> float:
    """sum_{j=0}^{m-1} r^(k_min - 1 + 4j) for 0 <= r <= 1."""
    if m == 0:
        return 0.0
    if r >= 1.0:
        return float(m)
    lead = r ** (k_min - 1)
    if lead == 0.0:
        return 0.0
    r4 = r**4
    return lead * (1.0 - r4**m) / (1.0 - r4)


def _elliptic_inner(n: int, k_min: int, m: int, l1: np.ndarray) -> float:
    """sum_{t^2 < 4n} L(1, psi_{t^2-4n}) * sum_{k in window} cos((k-1) phi_{t,n}).

    The k-sum is the closed Dirichlet-kernel form; t = 0 contributes the
    window count m exactly.  Vector-safe: for t >= 1 the denominator
    |e^{4 i phi} - 1| stays well away from 0 (phi in (0, pi/2)).
    """
    tmax = math.isqrt(4 * n - 1)
    total = float(m) * float(l1[4 * n])
    if tmax >= 1:
        t = np.arange(1, tmax + 1, dtype=np.int64)
        phi = np.arcsin(t / (2.0 * math.sqrt(n)))
        lead = np.exp(1j * (k_min - 1) * phi)
        num = np.exp(1j * 4.0 * m * phi) - 1.0
        den = np.exp(1j * 4.0 * phi) - 1.0
        kernel = (lead * num / den).real
        total += 2.0 * float(np.dot(kernel, l1[4 * n - t * t]))
    return total


def _chunk_terms(ns, req: MurmurationRequest, ctx: TraceContext, k_min, m, d_prog, l1):
    sign = 1.0 if req.delta == 0 else -1.0
    ksum1 = m * (k_min - 1 + 2 * (m - 1))  # sum of (k - 1) over the window
    num = np.empty(len(ns))
    den = np.empty(len(ns))
    for i, n in enumerate(ns):
        n = int(n)
        logn = math.log(n)
        inner = sign / math.pi * _elliptic_inner(n, k_min, m, l1)
        if req.summand_domain == "primes":
            val = -_geometric_progression_sum(n**-0.5, k_min, m) + inner
        else:
            val = inner
            root = math.isqrt(n)
            if root * root == n:
                val += ksum1 / (12.0 * root)
            rn = math.sqrt(n)
            half = 0.0
            for d in ctx.sieve.divisors(n):
                if d * d > n:
                    break
                if d * d == n:
                    half += float(m)
                else:
                    half += 2.0 * _geometric_progression_sum(min(d, n // d) / rn, k_min, m)
            val -= 0.5 * half
        if req.weighting == "sqrt_p":
            val *= math.sqrt(n)
        num[i] = logn * val
        den[i] = logn * d_prog
    return num, den


def compute_series(
    req: MurmurationRequest, ctx: TraceContext, threads: int | None = None
) -> MurmurationSeries:
    """Evaluate the statistic for every summation point with n/N in E.

    Work is split into fixed chunks of summation points; chunks may run on a
    thread pool but are reassembled in index order, so results are identical
    for any thread count.
    """
    N = analytic_conductor(req.K).N
    lo = float(req.E.lo) * N
    hi = float(req.E.hi) * N
    n_max = math.floor(hi)
    if n_max < 2:
        ns = np.zeros(0, dtype=np.int64)
    elif req.summand_domain == "primes":
        if n_max > ctx.sieve.bound:
            raise TableBoundError(n_max, ctx.sieve.bound)
        primes = ctx.sieve.primes
        ns = primes[(primes >= lo) & (primes <= hi)]
    else:
        ns = np.arange(max(1, math.ceil(lo)), n_max + 1, dtype=np.int64)
    if ns.size and 4 * int(ns[-1]) > ctx.table.bound:
        raise TableBoundError(4 * int(ns[-1]), ctx.table.bound)
    k_min, m = progression_weights(req.K, req.H, req.delta)
    if m == 0:
        raise ValueError("no admissible weights in [K-H, K+H]")
    d_prog = sum(dimension_S_k(k_min + 4 * j) for j in range(m))
    l1 = ctx.l1_array()

    if threads is None:
        threads = int(os.environ.get("MURMUR_THREADS", "0")) or min(
            8, os.cpu_count() or 1
        )
    chunks = [ns[i : i + _CHUNK] for i in range(0, ns.size, _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda c: _chunk_terms(c, req, ctx, k_min, m, d_prog, l1), chunks
                )
            )
    else:
        parts = [_chunk_terms(c, req, ctx, k_min, m, d_prog, l1) for c in chunks]
    if parts:
        num = np.concatenate([p[0] for p in parts])
        den = np.concatenate([p[1] for p in parts])
    else:
        num = np.zeros(0)
        den = np.zeros(0)
    x = ns / N
    cum_num = np.cumsum(num)
    cum_den = np.cumsum(den)
    with np.errstate(divide="ignore", invalid="ignore"):
        cumulative = np.where(cum_den > 0, x * math.sqrt(N) * cum_num / cum_den, 0.0)
    return MurmurationSeries(
        N=N,
        delta=req.delta,
        weighting=req.weighting,
        summand_domain=req.summand_domain,
        n=ns,
        x=x,
        numerator=num,
        denominator=den,
        cumulative=cumulative,
    )


def cumulative_curve(series: MurmurationSeries, grid) -> list[tuple[float, float]]:
    """r(t) = t sqrt(N) * (numerator / denominator over points with x <= t).

    Grid values left of the first summation point report 0 (empty range).
    """
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(np.diff(grid) <= 0) or np.any(grid <= 0):
        raise ValueError("grid must be strictly increasing and positive")
    out = []
    cn = np.cumsum(series.numerator)
    cd = np.cumsum(series.denominator)
    idx = np.searchsorted(series.x, grid, side="right") - 1
    root_n = math.sqrt(series.N)
    for t, i in zip(grid, idx):
        if i < 0 or cd[i] == 0:
            out.append((float(t), 0.0))
        else:
            out.append((float(t), float(t * root_n * cn[i] / cd[i])))
    return out


def integer_murmuration_nu(E: Interval, a_max: int) -> float:
    """Integer-summation analogue of the limit measure: sum over a >= 1 with
    a^-2 in E of a^-3, halving terms that sit exactly on an exact endpoint."""
    if a_max < 1:
        raise ValueError("a_max must be positive")
    total = 0.0
    for a in range(1, a_max + 1):
        pos = E.locate(Fraction(1, a * a))
        if pos == "in":
            total += a**-3.0
        elif pos in ("lo", "hi"):
            total += 0.5 * a**-3.0
    return total
