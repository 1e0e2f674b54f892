"""Smooth partition-of-unity window on [-1, 1], its Fourier transform, and
the Poisson-summation identity for cosine sums over weights in a fixed
residue class mod 4."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "WindowFunction",
    "make_window",
    "eval_W",
    "eval_W_hat",
    "cosine_progression_sum",
    "poisson_weight_sum",
]

_NODES64, _WEIGHTS64 = np.polynomial.legendre.leggauss(64)
# cubic change of variable s = (3u - u^3)/2 flattens the integrand's
# non-analytic endpoints; order-64 Gauss-Legendre then reaches ~1e-13
_SUB = (3.0 * _NODES64 - _NODES64**3) / 2.0
_SUB_W = _WEIGHTS64 * 1.5 * (1.0 - _NODES64**2)

_NODES16, _WEIGHTS16 = np.polynomial.legendre.leggauss(16)


def _bump_integral(b):
    """integral of exp(-1/(1-t^2)) over [-1, b], vectorized in b."""
    b = np.asarray(b, dtype=np.float64)
    mid = (b - 1.0) / 2.0
    half = (b + 1.0) / 2.0
    t = mid[..., None] + half[..., None] * _SUB
    v = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    v[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return half * (v @ _SUB_W)


class WindowFunction:
    """Even bump W supported on [-1, 1] with W(x) + W(1-x) = 1 on [0, 1].

    W(x) = c * integral of exp(-1/(1-t^2)) over [-1, 1-2|x|]; the same
    normalization makes the integer translates of W a partition of unity,
    so the transform vanishes at nonzero integers and has unit mass at 0.
    Instances are immutable; evaluations are pure.
    """

    __slots__ = ("c",)

    def __init__(self, c: float):
        self.c = c

    def value_many(self, x) -> np.ndarray:
        x = np.abs(np.asarray(x, dtype=np.float64))
        out = np.zeros_like(x)
        inside = x < 1.0
        out[inside] = self.c * _bump_integral(1.0 - 2.0 * x[inside])
        return out

    def value(self, x: float) -> float:
        return float(self.value_many(np.asarray([x]))[0])

    def hat_many(self, xi, block: int = 4096) -> np.ndarray:
        """W-hat on an array of frequencies by composite panel quadrature.

        Panels are sized for the largest |xi| so one node grid (and one set
        of window values) is shared across the whole batch.
        """
        xi = np.asarray(xi, dtype=np.float64)
        if xi.size == 0:
            return np.zeros(0)
        n = max(6, int(math.ceil(np.abs(xi).max())) + 4)
        edges = np.linspace(0.0, 1.0, n + 1)
        half = 0.5 / n
        u = ((edges[:-1] + edges[1:]) / 2.0)[:, None] + half * _NODES16[None, :]
        u = u.ravel()
        wq = np.tile(_WEIGHTS16 * half, n) * self.value_many(u)
        out = np.empty(xi.shape, dtype=np.float64)
        flat = xi.ravel()
        res = out.ravel()
        for i in range(0, flat.size, block):
            seg = flat[i : i + block]
            res[i : i + block] = 2.0 * (np.cos(2.0 * np.pi * seg[:, None] * u) @ wq)
        return out

    def hat(self, xi: float) -> float:
        return float(self.hat_many(np.asarray([xi]))[0])


def make_window() -> WindowFunction:
    c = 1.0 / float(_bump_integral(np.asarray(1.0)))
    return WindowFunction(c=c)


def eval_W(w: WindowFunction, x: float) -> float:
    return w.value(x)


def eval_W_hat(w: WindowFunction, xi: float) -> float:
    return w.hat(xi)


def cosine_progression_sum(w: WindowFunction, k0: int, h: float, phi: float) -> float:
    """Direct sum of cos((k-1) phi) W((k-k0)/(4h)) over k in k0 + 4Z.

    The window support truncates the lattice to |k - k0| < 4h, at most
    2*ceil(h)+1 nonzero terms.
    """
    if h < 1:
        raise ValueError("window width h must be at least 1")
    mmax = math.ceil(h)
    m = np.arange(-mmax, mmax + 1)
    weights = w.value_many(m / h)
    return float(np.dot(np.cos((k0 - 1 + 4 * m) * phi), weights))


def poisson_weight_sum(
    w: WindowFunction, k0: int, h: float, phi: float, tail: float = 1e-12
) -> float:
    """Dual side of the identity: h cos((k0-1) phi) sum_l W-hat(h l + 2 h phi / pi).

    The l-sum is extended until the transform values sit below ``tail`` (and
    in any case to arguments past 200, beyond which the transform is at the
    quadrature noise floor).
    """
    shift = 2.0 * h * phi / math.pi
    total = w.hat(shift)
    ell = 1
    small = 0
    while True:
        a = w.hat(h * ell + shift)
        b = w.hat(-h * ell + shift)
        total += a + b
        if abs(a) < tail and abs(b) < tail:
            small += 1
            if small >= 3 or h * ell > 220.0:
                break
        else:
            small = 0
        ell += 1
    return h * math.cos((k0 - 1) * phi) * total
