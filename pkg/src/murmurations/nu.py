"""The limiting measure on conductor-normalized primes: rational-atom and
Fourier-series evaluations, the associated jump function on frequencies, and
the numeric main-term check for the exponential sum near rationals."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .arith import FactorSieve, default_euler_constant
from .window import WindowFunction, make_window

__all__ = [
    "Interval",
    "NuPart",
    "NuEvaluation",
    "nu_rational",
    "nu_fourier",
    "evaluate_nu",
    "s_alpha_jump",
    "s_alpha_fourier",
    "CircleCheck",
    "prop_circle_check",
    "multiplicative_f_array",
]

ZETA2 = math.pi**2 / 6.0
_EULER_GAMMA_EXP = 1.7810724179901979  # e^gamma, Rosser-Schoenfeld phi bound

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


@dataclass(frozen=True)
class Interval:
    """Interval [lo, hi] in the normalized-prime variable y = p/N.

    Endpoints given as ``Fraction`` are exact and can carry half-weighted
    atoms of the singular measure; float endpoints are treated as irrational
    (no atom ever sits exactly on them).
    """

    lo: Fraction | float
    hi: Fraction | float

    def __post_init__(self):
        if float(self.lo) < 0:
            raise ValueError("interval must sit in y >= 0")
        if not float(self.lo) < float(self.hi):
            raise ValueError("interval needs lo < hi")

    @staticmethod
    def _parse_endpoint(text: str) -> Fraction | float:
        text = text.strip()
        if _RATIONAL_RE.match(text):
            return Fraction(text)
        return float(text)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        parts = text.split(":")
        if len(parts) != 2:
            raise ValueError(f"interval must look like 'lo:hi', got {text!r}")
        return cls(cls._parse_endpoint(parts[0]), cls._parse_endpoint(parts[1]))

    @property
    def lo_exact(self) -> bool:
        return isinstance(self.lo, Fraction)

    @property
    def hi_exact(self) -> bool:
        return isinstance(self.hi, Fraction)

    @property
    def width(self) -> float:
        return float(self.hi) - float(self.lo)

    def locate(self, y: Fraction) -> str:
        """Position of an exact point: 'in', 'lo', 'hi', or 'out'."""
        lo_cmp = y - self.lo if self.lo_exact else float(y) - float(self.lo)
        hi_cmp = self.hi - y if self.hi_exact else float(self.hi) - float(y)
        if self.lo_exact and lo_cmp == 0:
            return "lo"
        if self.hi_exact and hi_cmp == 0:
            return "hi"
        if lo_cmp > 0 and hi_cmp > 0:
            return "in"
        return "out"


@dataclass
class NuPart:
    """One evaluation route: value plus an upper bound for what was cut off."""

    value: float
    tail_bound: float
    endpoint_atoms: list = field(default_factory=list)


@dataclass
class NuEvaluation:
    """Both routes to the measure of an interval, with truncation metadata."""

    E: Interval
    rational_form_value: float
    fourier_form_value: float | None
    rational_tail_bound: float
    fourier_tail_bound: float | None
    q_max: int
    t_max: int | None
    endpoint_terms: list


_TAIL_CUT = 4096


@lru_cache(maxsize=8)
def _tail_table(w: int):
    b = np.arange(1, _TAIL_CUT + 1, dtype=np.float64)
    vals = b ** (-float(w))
    return np.cumsum(vals[::-1])[::-1]


def _em_tail(w: int, B: int) -> float:
    # Euler-Maclaurin for sum_{b >= B} b^-w; next omitted term is O(B^-w-3)
    x = float(B)
    return x ** (1 - w) / (w - 1) + 0.5 * x ** (-w) + w / 12.0 * x ** (-w - 1)


def _zeta_tail(w: int, B: int) -> float:
    """sum_{b >= B} b^-w for w in {3, 4}."""
    if B < 1:
        B = 1
    if B <= _TAIL_CUT:
        return float(_tail_table(w)[B - 1]) + _em_tail(w, _TAIL_CUT + 1)
    return _em_tail(w, B)


def _coprime_tail(
    q: int, divisors_mu: list[tuple[int, int]], w: int, a_min: int, a_max: int | None = None
) -> float:
    """sum over a in [a_min, a_max] (a_max None: unbounded) with gcd(a, q) = 1
    of a^-w, via Moebius over d | q and zeta tails."""
    total = 0.0
    for d, mu in divisors_mu:
        if mu == 0:
            continue
        part = _zeta_tail(w, -(-a_min // d))
        if a_max is not None:
            part -= _zeta_tail(w, a_max // d + 1)
        total += mu * d ** (-float(w)) * part
    return total


def _mu_divisors(sieve: FactorSieve, q: int) -> list[tuple[int, int]]:
    out = [(1, 1)]
    for p, _ in sieve.factorize(q):
        out += [(d * p, -mu) for d, mu in out]
    return out


def _rational_tail_bound(E: Interval, w: int, q_max: int) -> float:
    """Documented bound for the atoms dropped beyond q_max.

    Each squarefree q contributes at most v^{w/2} (1 + q L) q^w/(phi^2 sigma)
    atoms mass, with L the a/q-range length (or 1/((w-1) sqrt(v)) when the
    range is one-sided).  With phi sigma >= q^2/zeta(2) and the explicit
    phi(q) > q / (e^gamma lnln q + 2.51/lnln q) bound, summing q > Q gives
    tail <= v^{w/2} G(Q) (L + 1/Q) / Q, G(Q) = e^gamma (lnln Q + 1) + 2.51.
    """
    v = float(E.hi)
    u = float(E.lo)
    if u > 0:
        L = u ** (-0.5) - v ** (-0.5)
    else:
        L = 1.0 / ((w - 1) * math.sqrt(v))
    Q = max(q_max, 16)
    G = _EULER_GAMMA_EXP * (math.log(math.log(Q)) + 1.0) + 2.51
    return v ** (w / 2.0) * G * (L + 1.0 / Q) / Q


def _atom_range(q: int, E: Interval) -> tuple[int, int | None, int | None, int | None]:
    """a-range with (q/a)^2 in E, plus the a values sitting exactly on the
    endpoints (None when absent).  Exact endpoints use integer predicates."""
    # lower a bound from the upper interval endpoint: a^2 >= q^2 / v
    if E.hi_exact:
        vn, vd = E.hi.numerator, E.hi.denominator
        target = q * q * vd
        a_lo = math.isqrt(target // vn) if vn else 1
        while a_lo >= 1 and (a_lo - 1) * (a_lo - 1) * vn >= target:
            a_lo -= 1
        while a_lo * a_lo * vn < target:
            a_lo += 1
        hi_atom = a_lo if a_lo * a_lo * vn == target else None
    else:
        a_lo = max(1, math.ceil(q / math.sqrt(float(E.hi))))
        hi_atom = None
    a_lo = max(a_lo, 1)
    # upper a bound from the lower endpoint: a^2 <= q^2 / u (u = 0: unbounded)
    if float(E.lo) == 0:
        return a_lo, None, None, hi_atom
    if E.lo_exact:
        un, ud = E.lo.numerator, E.lo.denominator
        target = q * q * ud
        a_hi = math.isqrt(target // un)
        while (a_hi + 1) * (a_hi + 1) * un <= target:
            a_hi += 1
        while a_hi >= 1 and a_hi * a_hi * un > target:
            a_hi -= 1
        lo_atom = a_hi if a_hi * a_hi * un == target else None
    else:
        a_hi = math.floor(q / math.sqrt(float(E.lo)))
        lo_atom = None
    return a_lo, a_hi, lo_atom, hi_atom


def nu_rational(
    E: Interval, q_max: int, sieve: FactorSieve, weight: str = "cubic"
) -> NuPart:
    """Atom-sum form: (1/zeta(2)) sum over coprime a, q with (a/q)^-2 in E of
    mu(q)^2/(phi(q)^2 sigma(q)) (q/a)^w, w = 3 (or 4 for the sqrt-weighted
    variant); atoms exactly on an exact endpoint count half."""
    if q_max < 1:
        raise ValueError("q_max must be positive")
    if q_max > sieve.bound:
        raise ValueError("q_max exceeds sieve bound")
    w = {"cubic": 3, "quartic": 4}[weight]
    total = 0.0
    atoms = []
    for q in range(1, q_max + 1):
        if q > 1 and sieve.mobius(q) == 0:
            continue
        coeff = 1.0 / (sieve.euler_phi(q) ** 2 * sieve.sigma(q))
        a_lo, a_hi, lo_atom, hi_atom = _atom_range(q, E)
        if a_hi is not None and a_hi < a_lo:
            continue
        inner = float(q) ** w * _coprime_tail(q, _mu_divisors(sieve, q), w, a_lo, a_hi)
        for a_edge, side in ((lo_atom, "lo"), (hi_atom, "hi")):
            if a_edge is not None and math.gcd(a_edge, q) == 1:
                inner -= 0.5 * (q / a_edge) ** w
                atoms.append((a_edge, q, side))
        total += coeff * inner
    return NuPart(
        value=total / ZETA2,
        tail_bound=_rational_tail_bound(E, w, q_max),
        endpoint_atoms=atoms,
    )


_SI_ASYMPTOTIC_SWITCH = 40.0


def _si_minus_half_pi(x: np.ndarray) -> np.ndarray:
    """Si(x) - pi/2 for x > 0, accurate in relative terms.

    The shifted value decays like cos(x)/x; the library Si is only
    absolutely accurate near its pi/2 limit, which is fatal once multiplied
    by the t^3 prefactor of the quartic antiderivative.  Past the switch the
    auxiliary asymptotic expansion Si = pi/2 - f cos - g sin is summed to its
    optimal truncation (error ~ e^-x).
    """
    out = np.empty_like(x)
    small = x < _SI_ASYMPTOTIC_SWITCH
    if small.any():
        si, _ = sici(x[small])
        out[small] = si - 0.5 * math.pi
    big = ~small
    if big.any():
        xb = x[big]
        inv2 = 1.0 / (xb * xb)
        f = np.zeros_like(xb)
        g = np.zeros_like(xb)
        term_f = 1.0 / xb
        term_g = inv2.copy()
        sign = 1.0
        for k in range(18):
            f += sign * term_f
            g += sign * term_g
            term_f *= (2 * k + 1) * (2 * k + 2) * inv2
            term_g *= (2 * k + 2) * (2 * k + 3) * inv2
            sign = -sign
        out[big] = -f * np.cos(xb) - g * np.sin(xb)
    return out


def _cubic_antiderivative(a: np.ndarray, s: float) -> np.ndarray:
    # antiderivative in s of cos(a s) / s^3, a vectorized
    x = a * s
    _, ci = sici(x)
    return -np.cos(x) / (2 * s * s) + a * np.sin(x) / (2 * s) - 0.5 * a * a * ci


def _quartic_antiderivative(a: np.ndarray, s: float) -> np.ndarray:
    # antiderivative in s of cos(a s) / s^4, shifted by the constant
    # a^3 pi / 12 (constants cancel in endpoint differences)
    x = a * s
    return (
        -np.cos(x) / (3 * s**3)
        + a * np.sin(x) / (6 * s * s)
        + a * a * np.cos(x) / (6 * s)
        + a**3 * _si_minus_half_pi(x) / 6.0
    )


def _oscillatory_integrals(E: Interval, tmax: int, w: int) -> np.ndarray:
    """integral over E of cos(2 pi t / sqrt(y)) (sqrt(y) if w = 4) dy for
    t = 1..tmax, via the substitution y = s^-2 and exact antiderivatives."""
    u, v = float(E.lo), float(E.hi)
    s1, s2 = 1.0 / math.sqrt(v), 1.0 / math.sqrt(u)
    a = 2.0 * math.pi * np.arange(1, tmax + 1, dtype=np.float64)
    anti = _cubic_antiderivative if w == 3 else _quartic_antiderivative
    out = np.empty(tmax)
    block = 65536
    for i in range(0, tmax, block):
        ab = a[i : i + block]
        out[i : i + block] = 2.0 * (anti(ab, s2) - anti(ab, s1))
    return out


def multiplicative_f_array(sieve: FactorSieve, tmax: int) -> np.ndarray:
    """f(t) = prod_{p | t} (1 + 1/(p^2 - p - 1)) for t = 0..tmax (f[0] = 0,
    unused); built by one sieve pass over primes."""
    if tmax > sieve.bound:
        raise ValueError("tmax exceeds sieve bound")
    f = np.ones(tmax + 1, dtype=np.float64)
    for p in sieve.primes:
        p = int(p)
        if p > tmax:
            break
        f[p::p] *= 1.0 + 1.0 / (p * p - p - 1.0)
    f[0] = 0.0
    return f


def nu_fourier(
    E: Interval,
    t_max: int,
    sieve: FactorSieve,
    quad_tol: float = 1e-9,
    weight: str = "cubic",
) -> NuPart:
    """Fourier form: (1/2) sum over t of prod_{p not dividing t}
    (p^2-p-1)/(p^2-p) * integral over E of cos(2 pi t / sqrt(y)) dy.

    The t = 0 coefficient is exactly 1 (empty product); |t| >= 1 pairs are
    folded and their infinite products evaluated as C f(t) / zeta(2).  The
    y-integrals are done in closed form (sine/cosine integrals), so the
    quadrature error is at rounding level; quad_tol is kept as a floor for
    the reported bound.

    The series converges only conditionally (its tail is a Fourier series
    with jumps), so a plain cutoff at t_max would leave an O(1/t_max)
    oscillatory remainder with a large constant whenever an endpoint of the
    s = y^(-1/2) interval sits near a small-denominator rational.  Terms are
    therefore tapered by the smooth window (full weight below t_max/2); the
    smoothed remainder is governed only by atoms within ~1/t_max of the
    endpoints.
    """
    if float(E.lo) <= 0:
        raise ValueError("Fourier form needs a strictly positive lower endpoint")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    w = {"cubic": 3, "quartic": 4}[weight]
    u, v = float(E.lo), float(E.hi)
    if w == 3:
        base = 0.5 * (v - u)
    else:
        base = (v**1.5 - u**1.5) / 3.0
    if t_max == 0:
        return NuPart(value=base, tail_bound=math.inf)
    coeff = default_euler_constant() / ZETA2 * multiplicative_f_array(sieve, t_max)[1:]
    taper = _taper_window().value_many(np.arange(1, t_max + 1) / float(t_max))
    integrals = _oscillatory_integrals(E, t_max, w)
    value = base + float(np.dot(coeff * taper, integrals))
    tail = 4.0 * v ** ((w - 1) / 2.0) * (1.0 + math.log(t_max)) / t_max
    quad_err = max(quad_tol, 3e-15 * math.sqrt(v) * t_max**1.5)
    return NuPart(value=value, tail_bound=tail + quad_err)


@lru_cache(maxsize=1)
def _taper_window() -> WindowFunction:
    return make_window()


def evaluate_nu(
    E: Interval,
    q_max: int,
    t_max: int | None,
    sieve: FactorSieve,
    weight: str = "cubic",
) -> NuEvaluation:
    rat = nu_rational(E, q_max, sieve, weight=weight)
    four = None
    if t_max is not None and float(E.lo) > 0:
        four = nu_fourier(E, t_max, sieve, weight=weight)
    return NuEvaluation(
        E=E,
        rational_form_value=rat.value,
        fourier_form_value=None if four is None else four.value,
        rational_tail_bound=rat.tail_bound,
        fourier_tail_bound=None if four is None else four.tail_bound,
        q_max=q_max,
        t_max=t_max,
        endpoint_terms=rat.endpoint_atoms,
    )


def _jump_coefficient(sieve: FactorSieve, q: int) -> float:
    return 1.0 / (sieve.euler_phi(q) ** 2 * sieve.sigma(q))


def s_alpha_jump(
    alpha: Fraction | float,
    q_max: int,
    sieve: FactorSieve,
    star: bool = False,
) -> float:
    """Jump function 1/2 - zeta(2) alpha + sum over fractions a/q <= alpha of
    mu(q)^2/(phi(q)^2 sigma(q)), truncated at q_max.

    ``star`` switches to the symmetrized variant that halves the atom at a
    rational alpha (the one the Fourier series converges to).
    """
    if float(alpha) <= 0:
        raise ValueError("alpha must be positive")
    value = 0.5 - ZETA2 * float(alpha)
    exact = isinstance(alpha, Fraction)
    for q in range(1, q_max + 1):
        if q > 1 and sieve.mobius(q) == 0:
            continue
        count = 0
        for d, mu in _mu_divisors(sieve, q):
            if mu == 0:
                continue
            if exact:
                count += mu * ((alpha.numerator * q) // (alpha.denominator * d))
            else:
                count += mu * math.floor(float(alpha) * q / d)
        if count:
            value += _jump_coefficient(sieve, q) * count
    if star and exact:
        q0 = alpha.denominator
        if q0 <= q_max and (q0 == 1 or sieve.mobius(q0) != 0):
            value -= 0.5 * _jump_coefficient(sieve, q0)
    return value


def s_alpha_fourier(alpha: Fraction | float, t_max: int, sieve: FactorSieve) -> float:
    """Partial Fourier series sum_{t <= t_max} L(1, psi_bar_t)/(pi t) sin(2 pi alpha t)."""
    if t_max < 1:
        raise ValueError("t_max must be positive")
    t = np.arange(1, t_max + 1, dtype=np.float64)
    if isinstance(alpha, Fraction):
        q = alpha.denominator
        residues = (np.arange(1, t_max + 1, dtype=np.int64) * alpha.numerator) % q
        phase = 2.0 * math.pi * residues / q
    else:
        phase = 2.0 * math.pi * float(alpha) * t
    f = multiplicative_f_array(sieve, t_max)[1:]
    c = default_euler_constant()
    return float(np.dot(c * f / (math.pi * t), np.sin(phase)))


@dataclass
class CircleCheck:
    """Exponential-sum main-term comparison at alpha = a/q + theta."""

    a: int
    q: int
    theta: float
    x: float
    t_max: int
    lhs: float
    main_term: float

    @property
    def residual(self) -> float:
        return self.lhs - self.main_term


def prop_circle_check(
    a: int,
    q: int,
    theta: float,
    x: float,
    window: WindowFunction,
    sieve: FactorSieve,
    t_mult: float = 120.0,
) -> CircleCheck:
    """Compare sum_t L(1, psi_bar_t) cos(2 pi alpha t) W-hat(t/x) against the
    main term mu(q)^2/(phi(q)^2 sigma(q)) x W(x theta).

    The t-sum runs to t_mult * x; past |xi| = 120 the window transform sits
    at the 1e-12 quadrature floor, so the omitted tail is far below the
    residuals being measured.
    """
    if q < 1 or math.gcd(a, q) != 1:
        raise ValueError("need q >= 1 and gcd(a, q) = 1")
    if x < 1:
        raise ValueError("x must be at least 1")
    t_max = int(t_mult * x)
    f = multiplicative_f_array(sieve, t_max)
    c = default_euler_constant()
    t = np.arange(1, t_max + 1, dtype=np.int64)
    # reduce the rational part of alpha exactly; only theta t needs floats
    phase = 2.0 * math.pi * (((a * t) % q) / float(q) + theta * t)
    what = window.hat_many(t / float(x))
    lhs = c * (
        sieve.f_multiplicative(0) + 2.0 * float(np.dot(f[1:] * np.cos(phase), what))
    )
    if q == 1 or sieve.mobius(q) != 0:
        main = x * window.value(x * theta) / (
            sieve.euler_phi(q) ** 2 * sieve.sigma(q)
        )
    else:
        main = 0.0
    return CircleCheck(a=a, q=q, theta=theta, x=x, t_max=t_max, lhs=lhs, main_term=main)
