"""Digamma and Hurwitz zeta (with s-derivative) by Euler-Maclaurin summation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError, NearPole

EULER_GAMMA = 0.57721566490153286060651209008240243
CATALAN = 0.91596559417721901505460351493238411


def _bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0..B_n (B_1 = -1/2)."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        B[m] = -sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1)
    return B


_B = _bernoulli_numbers(80)
# B_{2k} / (2k)!
_EM_COEF = [float(_B[2 * k] / math.factorial(2 * k)) for k in range(40)]
# B_{2k} / (2k), asymptotic digamma series
_PSI_COEF = [float(_B[2 * k] / (2 * k)) for k in range(1, 12)]

_PSI_SHIFT = 16.0


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z) for Re z > 0 (scalar or ndarray, real or complex).

    Shifts z up by the recurrence psi(z) = psi(z+1) - 1/z until Re z >= 16,
    then applies the asymptotic series.
    """
    arr = np.asarray(z)
    if np.any(np.real(arr) <= 0):
        raise DomainError("digamma implemented for Re z > 0")
    scalar = arr.ndim == 0
    w = arr.astype(complex if np.iscomplexobj(arr) else float)
    acc = np.zeros_like(w)
    shift = int(max(0, math.ceil(_PSI_SHIFT - float(np.min(np.real(w))))))
    for k in range(shift):
        acc = acc - 1.0 / (w + k)
    w = w + shift
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in reversed(_PSI_COEF):
        series = (series + c) * inv2
    res = acc + np.log(w) - 0.5 / w - series
    return res.item() if scalar else res


@dataclass(frozen=True)
class EMParams:
    """Euler-Maclaurin parameters: M direct terms, B Bernoulli corrections."""

    M: int = 30
    B: int = 12
    target: float = 1e-15

    def __post_init__(self):
        if self.M < 10 or self.B % 2 or self.B < 2:
            raise ValueError("need M >= 10 and even B >= 2")


@dataclass(frozen=True)
class HurwitzValue:
    value: complex
    derivative: complex
    error: float


def _em_pole_part(s, x):
    """(x^{1-s} - 1)/(s - 1) and its s-derivative, stable near s = 1."""
    L = math.log(x)
    h = (1 - s) * L
    if abs(h) < 0.5:
        # E(h) = (e^h - 1)/h = sum h^k/(k+1)!
        E, dE, term = 0j, 0j, 1.0 + 0j
        for k in range(30):
            E += term / math.factorial(k + 1)
            if k + 1 < 30:
                dE += (k + 1) * term / math.factorial(k + 2)
            term *= h
        return -L * E, L * L * dE
    xp = cmath.exp(h)
    val = (xp - 1) / (s - 1)
    dval = (-L * xp * (s - 1) - (xp - 1)) / (s - 1) ** 2
    return val, dval


def hurwitz_regular(s: complex, a: float, params: EMParams | None = None) -> HurwitzValue:
    """zeta(s, a) - 1/(s-1) and its s-derivative; entire in s.

    Euler-Maclaurin with M direct terms and B Bernoulli corrections.  The
    returned ``error`` bounds the remainder by the first omitted term times
    |s + 2B + 1| / (Re s + 2B + 1).
    """
    params = params or EMParams()
    s = complex(s)
    if not 0 < a <= 1:
        raise DomainError("Hurwitz parameter a must lie in (0, 1]")
    M, B = params.M, params.B
    k = np.arange(M, dtype=float) + a
    lk = np.log(k)
    pw = np.exp(-s * lk)
    val = complex(pw.sum())
    dval = complex(-(lk * pw).sum())
    x = M + a
    lx = math.log(x)
    xs = cmath.exp(-s * lx)
    pole, dpole = _em_pole_part(s, x)
    val += pole + xs / 2
    dval += dpole - lx * xs / 2
    # Bernoulli terms C_j s(s+1)...(s+2j-2) x^{-s-2j+1}
    poch, dpoch = s, 1.0 + 0j
    xpow = xs / x
    for j in range(1, B + 1):
        t = _EM_COEF[j] * poch * xpow
        val += t
        dval += _EM_COEF[j] * (dpoch - lx * poch) * xpow
        # advance pochhammer by two factors and x power by x^-2
        for i in (2 * j - 1, 2 * j):
            dpoch = dpoch * (s + i) + poch
            poch = poch * (s + i)
        xpow = xpow / (x * x)
    # |remainder| <= 4 |(s)_{2B}| / (2 pi)^{2B} * int_x^inf t^{-Re s - 2B} dt, and the
    # s-derivative picks up (s)_{2B}' and a ln t factor
    p2, dp2 = _pochhammer(s, 2 * B)
    k = s.real + 2 * B - 1
    if k <= 0:
        return HurwitzValue(val, dval, math.inf)
    c = 4 / (2 * math.pi) ** (2 * B) * x ** (-k)
    err = c * abs(p2) / k
    derr = c * (abs(dp2) / k + abs(p2) * (lx / k + 1 / k**2))
    return HurwitzValue(val, dval, max(err, derr))


def _pochhammer(s: complex, n: int) -> tuple[complex, complex]:
    """(s)_n = s(s+1)...(s+n-1) and its s-derivative."""
    p, dp = 1.0 + 0j, 0j
    for i in range(n):
        dp = dp * (s + i) + p
        p = p * (s + i)
    return p, dp


def _auto_params(s: complex, target: float) -> EMParams:
    M = max(10, int(abs(s)) + 25)
    return EMParams(M=M, B=12, target=target)


def hurwitz_zeta(s: complex, a: float = 1.0, derivative: bool = False, target: float = 1e-15, params: EMParams | None = None):
    """zeta(s, a) = sum_{k>=0} (k + a)^{-s} continued to s != 1.

    With ``derivative=True`` returns ``(value, d/ds value)``; the derivative
    is from the term-wise differentiated Euler-Maclaurin formula.
    """
    s = complex(s)
    if abs(s - 1) < 1e-6:
        raise NearPole(f"zeta(s, a) has a pole at s = 1 (|s-1| = {abs(s - 1):.2g})")
    hv = hurwitz_with_error(s, a, target, params)
    val = hv.value + 1 / (s - 1)
    if derivative:
        return val, hv.derivative - 1 / (s - 1) ** 2
    return val


def hurwitz_with_error(s: complex, a: float, target: float = 1e-15, params: EMParams | None = None) -> HurwitzValue:
    """Regular part with M doubled until the remainder bound meets ``target``."""
    params = params or _auto_params(complex(s), target)
    for _ in range(8):
        hv = hurwitz_regular(s, a, params)
        scale = max(1.0, abs(hv.value))
        if hv.error <= target * scale:
            return hv
        params = EMParams(M=params.M * 2, B=params.B, target=target)
    return hv
