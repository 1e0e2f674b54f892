import math
import random
from fractions import Fraction

import numpy as np
import pytest

from murmurations.arith import default_euler_constant
from murmurations.nu import (
    Interval,
    evaluate_nu,
    multiplicative_f_array,
    nu_fourier,
    nu_rational,
    prop_circle_check,
    s_alpha_fourier,
    s_alpha_jump,
)

ZETA2 = math.pi**2 / 6


def test_interval_parsing():
    e = Interval.parse("1/4:4")
    assert e.lo == Fraction(1, 4) and e.lo_exact
    assert e.hi == Fraction(4) and e.hi_exact
    e = Interval.parse("0.25:4")
    assert isinstance(e.lo, float) and not e.lo_exact
    with pytest.raises(ValueError):
        Interval.parse("4:1")
    with pytest.raises(ValueError):
        Interval.parse("1")
    with pytest.raises(ValueError):
        Interval(-0.5, 1.0)


def _brute_nu(E_lo, E_hi, q_max, sieve, w=3, a_cap=4000):
    total = 0.0
    for q in range(1, q_max + 1):
        if q > 1 and sieve.mobius(q) == 0:
            continue
        coeff = 1.0 / (sieve.euler_phi(q) ** 2 * sieve.sigma(q))
        for a in range(1, a_cap):
            if math.gcd(a, q) != 1:
                continue
            y = Fraction(q * q, a * a)
            if E_lo < y < E_hi:
                weight = 1.0
            elif y == E_lo or y == E_hi:
                weight = 0.5
            else:
                continue
            total += coeff * weight * (q / a) ** w
    return total / ZETA2


def test_nu_rational_vs_bruteforce(sieve_1m):
    E = Interval(Fraction(1, 4), Fraction(4))
    for q_max in (10, 50, 200):
        got = nu_rational(E, q_max, sieve_1m).value
        want = _brute_nu(Fraction(1, 4), Fraction(4), q_max, sieve_1m)
        assert abs(got - want) < 1e-12
    atoms = nu_rational(E, 50, sieve_1m).endpoint_atoms
    assert (2, 1, "lo") in atoms and (1, 2, "hi") in atoms


def test_nu_rational_near_one(sieve_1m):
    # [0.9, 1.1] is dominated by the a = q = 1 atom of mass 1/zeta(2)
    val = nu_rational(Interval(Fraction(9, 10), Fraction(11, 10)), 1000, sieve_1m).value
    assert abs(val - 1.0 / ZETA2) < 0.02
    assert val > 1.0 / ZETA2  # higher-q atoms only add mass


def test_quartic_weight_fixed_point(sieve_1m):
    # at q/a = 1 the cubic and quartic atoms coincide
    E = Interval(Fraction(9, 10), Fraction(11, 10))
    cubic = nu_rational(E, 1, sieve_1m).value
    quartic = nu_rational(E, 1, sieve_1m, weight="quartic").value
    assert cubic == quartic == 1.0 / ZETA2


def test_nu_monotone(sieve_1m):
    rng = random.Random(3)
    for _ in range(10):
        u = rng.uniform(0.2, 3.0)
        v = rng.uniform(u + 0.05, 5.0)
        pad = rng.uniform(0.01, 0.15)
        inner = nu_rational(Interval(u, v), 800, sieve_1m).value
        outer = nu_rational(Interval(max(1e-3, u - pad), v + pad), 800, sieve_1m).value
        assert inner <= outer + 1e-15
        assert inner >= 0.0


def test_nu_additivity_with_atom_halving(sieve_1m):
    # y = 4 carries the (a, q) = (1, 2) atom; the halves must recombine
    left = nu_rational(Interval(Fraction(2), Fraction(4)), 2000, sieve_1m).value
    right = nu_rational(Interval(Fraction(4), Fraction(7)), 2000, sieve_1m).value
    full = nu_rational(Interval(Fraction(2), Fraction(7)), 2000, sieve_1m).value
    assert abs(left + right - full) < 1e-12
    # irrational split point: no atom, plain additivity
    v = 3.3141592653589793
    left = nu_rational(Interval(Fraction(2), v), 2000, sieve_1m).value
    right = nu_rational(Interval(v, Fraction(7)), 2000, sieve_1m).value
    assert abs(left + right - full) < 1e-12


def test_rational_tail_bound_is_honest(sieve_1m):
    for E in (Interval(Fraction(1, 4), Fraction(4)), Interval(0.7, 3.1)):
        for q_max in (100, 400, 1600):
            part = nu_rational(E, q_max, sieve_1m)
            refined = nu_rational(E, 4 * q_max, sieve_1m)
            assert abs(refined.value - part.value) <= part.tail_bound


def test_nu_fourier_t_zero_term(sieve_1m):
    E = Interval(Fraction(1, 4), Fraction(4))
    assert nu_fourier(E, 0, sieve_1m).value == 0.5 * E.width
    with pytest.raises(ValueError):
        nu_fourier(Interval(Fraction(0), Fraction(2)), 100, sieve_1m)


def test_two_formula_agreement_quarter_four(sieve_1m):
    E = Interval(Fraction(1, 4), Fraction(4))
    rat = nu_rational(E, 2000, sieve_1m).value
    four = nu_fourier(E, 2000, sieve_1m).value
    assert abs(rat - four) < 5e-4
    rat = nu_rational(E, 5000, sieve_1m).value
    four = nu_fourier(E, 5000, sieve_1m).value
    assert abs(rat - four) < 3e-4


def test_two_formula_agreement_quartic(sieve_1m):
    E = Interval(Fraction(1, 2), Fraction(3))
    rat = nu_rational(E, 4000, sieve_1m, weight="quartic").value
    four = nu_fourier(E, 4000, sieve_1m, weight="quartic").value
    assert abs(rat - four) < 5e-4


def test_evaluation_invariants(sieve_1m):
    rng = random.Random(12)
    for _ in range(5):
        u = rng.uniform(0.25, 3.0)
        v = rng.uniform(u + 0.2, 5.0)
        ev = evaluate_nu(Interval(u, v), 3000, 3000, sieve_1m)
        assert ev.rational_form_value >= 0
        combined = ev.rational_tail_bound + ev.fourier_tail_bound
        assert abs(ev.rational_form_value - ev.fourier_form_value) <= combined


def test_f_array_matches_factorized_values(sieve_1m):
    f = multiplicative_f_array(sieve_1m, 5000)
    for t in (1, 2, 6, 12, 30, 4999):
        assert abs(f[t] - sieve_1m.f_multiplicative(t)) < 1e-12


def test_product_identity_bridge(sieve_1m):
    """prod over p <= 1e6 not dividing t of (p^2-p-1)/(p^2-p) against
    C f(t) / zeta(2): exact when zeta(2) is truncated at the same primes,
    and within the prime tail (~1.3e-7) against the closed constant."""
    p = sieve_1m.primes.astype(np.float64)
    log_all = math.fsum(np.log1p(-1.0 / (p * p - p)))
    log_zeta2_partial = -math.fsum(np.log1p(-1.0 / (p * p)))
    c = default_euler_constant()
    for t in range(1, 101):
        drop = math.fsum(
            math.log1p(-1.0 / (q * q - q)) for q, _ in sieve_1m.factorize(t)
        )
        lhs = math.exp(log_all - drop)
        ft = sieve_1m.f_multiplicative(t)
        assert abs(lhs - c * ft / math.exp(log_zeta2_partial)) < 1e-10
        assert abs(lhs - c * ft / ZETA2) < 5e-7


def test_s_alpha_periodicity(sieve_1m):
    for alpha in (0.3, 0.7, 1.9):
        d = s_alpha_jump(alpha + 1.0, 2000, sieve_1m) - s_alpha_jump(alpha, 2000, sieve_1m)
        # periodic up to the q > q_max truncation of one extra unit of atoms
        assert abs(d) < 1e-3


def test_s_alpha_endpoint_weights(sieve_1m):
    full = s_alpha_jump(Fraction(1), 10**4, sieve_1m)
    halved = s_alpha_jump(Fraction(1), 10**4, sieve_1m, star=True)
    assert abs((full - halved) - 0.5) < 1e-12  # the a/q = 1 atom has mass 1
    # S*(1/2) vanishes by odd symmetry
    assert abs(s_alpha_jump(Fraction(1, 2), 10**4, sieve_1m, star=True)) < 1e-3


def test_s_alpha_mean_value(sieve_1m):
    """Midpoint sampling of the jump function over one period."""
    n = 20000
    alphas = (np.arange(n) + 0.5) / n
    total = 0.5 - ZETA2 * alphas
    for q in range(1, 1001):
        if q > 1 and sieve_1m.mobius(q) == 0:
            continue
        coeff = 1.0 / (sieve_1m.euler_phi(q) ** 2 * sieve_1m.sigma(q))
        count = np.zeros(n)
        for divisor, mu in _mu_divisor_pairs(sieve_1m, q):
            if mu:
                count += mu * np.floor(alphas * q / divisor)
        total += coeff * count
    assert abs(total.mean()) < 1e-3


def _mu_divisor_pairs(sieve, q):
    out = [(1, 1)]
    for p, _ in sieve.factorize(q):
        out += [(d * p, -mu) for d, mu in out]
    return out


def test_s_alpha_fourier_odd_symmetry(sieve_1m):
    for alpha in (0.21, 0.35, 0.47):
        a = s_alpha_fourier(alpha, 2000, sieve_1m)
        b = s_alpha_fourier(1.0 - alpha, 2000, sieve_1m)
        assert abs(a + b) < 1e-9


def test_s_alpha_fourier_vs_jump(sieve_1m):
    for alpha in (Fraction(1, 2), Fraction(1, 3), math.sqrt(2) - 1):
        series = s_alpha_fourier(alpha, 10**5, sieve_1m)
        jump = s_alpha_jump(alpha, 10**4, sieve_1m, star=True)
        assert abs(series - jump) <= 2e-3, alpha


def test_prop_circle_main_term(window, sieve_1m):
    chk = prop_circle_check(1, 1, 0.0, 500.0, window, sieve_1m)
    assert abs(chk.main_term - 500.0) < 1e-9
    assert abs(chk.residual) <= 0.5


def test_prop_circle_non_squarefree(window, sieve_1m):
    chk = prop_circle_check(1, 4, 0.0, 250.0, window, sieve_1m)
    assert chk.main_term == 0.0
    assert abs(chk.lhs) <= 50.0 * 4 / 250.0


def test_prop_circle_support_endpoint(window, sieve_1m):
    # theta = 1/x puts the main term at W(1) = 0
    chk = prop_circle_check(1, 2, 1.0 / 250.0, 250.0, window, sieve_1m)
    assert chk.main_term == 0.0
    assert abs(chk.lhs) <= 50.0 * 2 / 250.0


def test_prop_circle_validation(window, sieve_1m):
    with pytest.raises(ValueError):
        prop_circle_check(2, 4, 0.0, 100.0, window, sieve_1m)
