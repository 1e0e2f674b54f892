"""Class numbers of imaginary quadratic orders via reduced binary quadratic
forms, exact Dirichlet values L(1, psi_D), and the local averages psi_bar_t
of the discriminant characters together with L(1, psi_bar_t) = C f(t)."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import FactorSieve, default_euler_constant, kronecker

__all__ = [
    "DiscriminantFactorization",
    "ClassNumberTable",
    "sieve_class_numbers",
    "unit_count",
    "is_fundamental",
    "decompose_discriminant",
    "psi_D",
    "L1_psi_D",
    "psi_bar_bruteforce",
    "psi_bar_prime_power",
    "psi_bar",
    "L1_psi_bar",
    "save_class_numbers",
    "load_class_numbers",
    "DiscriminantTable",
]

CACHE_MAGIC = b"MRMCLS01"


@dataclass(frozen=True)
class DiscriminantFactorization:
    """A discriminant split as D = d * ell^2 with d fundamental (or d = 1)."""

    D: int
    d: int
    ell: int


@dataclass
class ClassNumberTable:
    """Primitive form class numbers h(D) for every discriminant -bound <= D < 0.

    ``h[n]`` holds h(-n) for n = |D| with n % 4 in {0, 3}; other entries are 0.
    Immutable after the sieve; queries are pure.
    """

    bound: int
    h: np.ndarray

    def class_number(self, D: int) -> int:
        if D >= 0 or D % 4 not in (0, 1):
            raise ValueError(f"{D} is not a negative discriminant")
        if -D > self.bound:
            raise ValueError(f"|D|={-D} exceeds table bound {self.bound}")
        return int(self.h[-D])


def sieve_class_numbers(bound: int) -> ClassNumberTable:
    """Count reduced primitive forms (a, b, c) per discriminant b^2 - 4ac.

    Reduction: |b| <= a <= c with b >= 0 when |b| = a or a = c; forms with
    0 < b < a < c count twice for the +-b pair.  Outer loops run over (a, b)
    with the c range vectorized.
    """
    if bound < 4:
        raise ValueError("bound must be at least 4")
    h = np.zeros(bound + 1, dtype=np.int32)
    amax = math.isqrt(bound // 3)
    for a in range(1, amax + 1):
        for b in range(0, a + 1):
            cmax = (bound + b * b) // (4 * a)
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            g = math.gcd(a, b)
            if g > 1:
                c = c[np.gcd(c, g) == 1]
                if c.size == 0:
                    continue
            idx = 4 * a * c - b * b
            if b == 0 or b == a:
                h[idx] += 1
            else:
                w = np.full(c.size, 2, dtype=np.int32)
                w[c == a] = 1
                h[idx] += w
    return ClassNumberTable(bound=bound, h=h)


def _squarefree_kernel(n: int) -> tuple[int, int]:
    # trial division; used only for validation of small inputs
    s, ell = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                s *= d
            ell *= d ** (e // 2)
        d += 1
    return s * n, ell


def is_fundamental(d: int) -> bool:
    if d == 0 or d % 4 not in (0, 1):
        return False
    if d % 4 == 1:
        s, _ = _squarefree_kernel(abs(d))
        return s == abs(d)
    m = d // 4
    if m % 4 not in (2, 3):
        return False
    s, _ = _squarefree_kernel(abs(m))
    return s == abs(m)


def unit_count(d: int) -> int:
    """Number of units in the order of fundamental discriminant d < 0."""
    if d >= 0 or not is_fundamental(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    if d == -3:
        return 6
    if d == -4:
        return 4
    return 2


def decompose_discriminant(D: int, sieve: FactorSieve) -> DiscriminantFactorization:
    """Split a nonzero discriminant as D = d ell^2, d fundamental or d = 1."""
    if D == 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant (needs D = 0, 1 mod 4)")
    n = abs(D)
    if n > sieve.bound:
        raise ValueError(f"|D|={n} exceeds sieve bound {sieve.bound}")
    ell = 1
    s = 1
    for p, e in sieve.factorize(n):
        ell *= p ** (e // 2)
        if e % 2:
            s *= p
    m = s if D > 0 else -s
    if m % 4 == 1:
        return DiscriminantFactorization(D=D, d=m, ell=ell)
    # m = 2, 3 mod 4 forces ell even because D = m ell^2 = 0, 1 mod 4
    return DiscriminantFactorization(D=D, d=4 * m, ell=ell // 2)


class DiscriminantTable:
    """Precomputed (d, ell) splits for |D| <= bound, both signs of D.

    Speeds up bulk psi_D evaluation; entries for invalid residues are 0.
    """

    __slots__ = ("bound", "d_neg", "ell_neg", "d_pos", "ell_pos")

    def __init__(self, bound: int, sieve: FactorSieve):
        if bound > sieve.bound:
            raise ValueError("decomposition bound exceeds sieve bound")
        self.bound = bound
        self.d_neg = np.zeros(bound + 1, dtype=np.int32)
        self.ell_neg = np.zeros(bound + 1, dtype=np.int32)
        self.d_pos = np.zeros(bound + 1, dtype=np.int32)
        self.ell_pos = np.zeros(bound + 1, dtype=np.int32)
        factorize = sieve.factorize
        for n in range(1, bound + 1):
            r = n % 4
            if r == 2:  # |D| = 2 mod 4 is a discriminant for neither sign
                continue
            ell = 1
            s = 1
            for p, e in factorize(n):
                ell *= p ** (e // 2)
                if e % 2:
                    s *= p
            if r in (0, 3):  # valid |D| for D < 0
                if (-s) % 4 == 1:
                    self.d_neg[n] = -s
                    self.ell_neg[n] = ell
                else:
                    self.d_neg[n] = -4 * s
                    self.ell_neg[n] = ell // 2
            if r in (0, 1):  # valid |D| for D > 0
                if s % 4 == 1:
                    self.d_pos[n] = s
                    self.ell_pos[n] = ell
                else:
                    self.d_pos[n] = 4 * s
                    self.ell_pos[n] = ell // 2
        # keep ell = 0 markers out of gcd paths
        self.ell_neg[self.d_neg == 0] = 1
        self.ell_pos[self.d_pos == 0] = 1

    def split(self, D: int) -> tuple[int, int]:
        n = abs(D)
        if D < 0:
            return int(self.d_neg[n]), int(self.ell_neg[n])
        return int(self.d_pos[n]), int(self.ell_pos[n])


def psi_D(D: int, m: int, sieve: FactorSieve) -> int:
    """Quadratic character (d / (m / gcd(m, ell))) of D = d ell^2; psi_0 = 1."""
    if m < 1:
        raise ValueError("m must be positive")
    if D == 0:
        return 1
    fac = decompose_discriminant(D, sieve)
    return kronecker(fac.d, m // math.gcd(m, fac.ell))


def L1_psi_D(D: int, table: ClassNumberTable, sieve: FactorSieve) -> float:
    """Dirichlet value L(1, psi_D) for D < 0 via the class number formula.

    L(1, psi_D) = 2 pi h(d) / (w(d) sqrt|D|) * prod_{p | ell} (p^ord_p(ell)
    + (1 - (d/p)) (p^ord_p(ell) - 1)/(p - 1)).
    """
    if D >= 0:
        raise ValueError("L1_psi_D requires a negative discriminant")
    if -D > table.bound:
        raise ValueError(f"|D|={-D} exceeds class table bound {table.bound}")
    fac = decompose_discriminant(D, sieve)
    hd = int(table.h[-fac.d])
    if fac.d == -3:
        w = 6
    elif fac.d == -4:
        w = 4
    else:
        w = 2
    prod = 1
    for p, e in sieve.factorize(fac.ell):
        pe = p**e
        prod *= pe + (1 - kronecker(fac.d, p)) * (pe - 1) // (p - 1)
    return 2.0 * math.pi * hd * prod / (w * math.sqrt(-D))


def psi_bar_bruteforce(
    t: int, m: int, sieve: FactorSieve, disc_table: DiscriminantTable | None = None
) -> Fraction:
    """Average of psi_{t^2 - 4n}(m) over invertible residues n mod m^2, exact.

    Discriminants t^2 - 4n cover negative, positive, square, and zero values;
    all go through the same d ell^2 split (square D gives d = 1, the trivial
    character).
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return Fraction(1)
    m2 = m * m
    total = 0
    count = 0
    t2 = t * t
    if disc_table is not None:
        d_neg, ell_neg = disc_table.d_neg, disc_table.ell_neg
        d_pos, ell_pos = disc_table.d_pos, disc_table.ell_pos
        for n in range(1, m2 + 1):
            if math.gcd(n, m) != 1:
                continue
            count += 1
            D = t2 - 4 * n
            if D == 0:
                total += 1
                continue
            if D < 0:
                d, ell = int(d_neg[-D]), int(ell_neg[-D])
            else:
                d, ell = int(d_pos[D]), int(ell_pos[D])
            total += kronecker(d, m // math.gcd(m, ell))
    else:
        for n in range(1, m2 + 1):
            if math.gcd(n, m) != 1:
                continue
            count += 1
            total += psi_D(t2 - 4 * n, m, sieve)
    return Fraction(total, count)


def _phi_pp(p: int, j: int) -> int:
    return 1 if j == 0 else (p - 1) * p ** (j - 1)


def psi_bar_prime_power(t: int, p: int, e: int) -> Fraction:
    """Closed-form local average psi_bar_t(p^e), exact rational.

    Cases: p odd not dividing t; p odd dividing t; p = 2 with t odd,
    2 || t, or 4 | t.  Each is the evaluated residue average.
    """
    if e == 0:
        return Fraction(1)
    if p == 2:
        if t % 2 != 0:
            return Fraction((-1) ** e)
        if t % 4 == 0:
            return Fraction(1, 2) if e % 2 else Fraction(0)
        # 2 || t
        return Fraction(1 + (16 ** (e // 2) - 1) // 15, 2 ** (2 * e - 1))
    if t % p == 0:
        return Fraction(1) if e % 2 == 0 else Fraction(0)
    num = -(p ** (2 * e - 1)) + sum(_phi_pp(p, 4 * k) for k in range(e // 2 + 1))
    return Fraction(num, _phi_pp(p, 2 * e))


def psi_bar(t: int, m: int, sieve: FactorSieve) -> Fraction:
    """psi_bar_t(m) assembled multiplicatively from prime-power values."""
    val = Fraction(1)
    for p, e in sieve.factorize(m):
        val *= psi_bar_prime_power(t, p, e)
        if val == 0:
            return val
    return val


def L1_psi_bar(t: int, sieve: FactorSieve) -> float:
    """L(1, psi_bar_t) = C * f(t) with C the working Euler-product constant."""
    return default_euler_constant() * sieve.f_multiplicative(t)


def save_class_numbers(table: ClassNumberTable, path) -> None:
    """Binary cache: magic, little-endian u64 bound, u32 h values ascending |D|."""
    ds = np.concatenate(
        [np.arange(3, table.bound + 1, 4), np.arange(4, table.bound + 1, 4)]
    )
    ds.sort()
    values = table.h[ds].astype("<u4")
    with open(path, "wb") as f:
        f.write(CACHE_MAGIC)
        f.write(struct.pack("<Q", table.bound))
        values.tofile(f)


def load_class_numbers(path) -> ClassNumberTable:
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != CACHE_MAGIC:
            raise ValueError(f"bad class-number cache magic {magic!r}")
        (bound,) = struct.unpack("<Q", f.read(8))
        ds = np.concatenate([np.arange(3, bound + 1, 4), np.arange(4, bound + 1, 4)])
        ds.sort()
        values = np.fromfile(f, dtype="<u4")
    if values.size != ds.size:
        raise ValueError(
            f"class-number cache truncated: {values.size} entries, expected {ds.size}"
        )
    h = np.zeros(bound + 1, dtype=np.int32)
    h[ds] = values
    return ClassNumberTable(bound=int(bound), h=h)
