"""Dirichlet and Dedekind zeta log-derivatives for Q and quadratic fields.

A field is anything with a ``D`` attribute: the fundamental discriminant of
a quadratic field, or 1 for Q.  Then zeta_K(s) = zeta(s) L(s, chi_D) with
chi_D the Kronecker character, and

    L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q).

Because sum_a chi(a) = 0 the poles of the Hurwitz terms cancel, so L is
evaluated from the regular parts and stays finite at s = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..arith import character_table, kronecker, primes_upto
from ..errors import DomainError, NearPole, NearZeroOfZeta
from .special import digamma, hurwitz_with_error

ZERO_THRESHOLD = 1e-12


@dataclass(frozen=True)
class LValue:
    """L(s, chi), its s-derivative, and an error bound on both."""

    value: complex
    derivative: complex
    error: float


def riemann_regular(s: complex, target: float = 1e-15) -> LValue:
    """G(s) = zeta(s) - 1/(s-1) and G'(s)."""
    hv = hurwitz_with_error(s, 1.0, target)
    return LValue(hv.value, hv.derivative, hv.error)


def dirichlet_l(s: complex, D: int, target: float = 1e-15) -> LValue:
    """L(s, chi_D) for a fundamental discriminant D != 1, with L'(s)."""
    s = complex(s)
    q = abs(D)
    chi = character_table(D)
    val, dval, err = 0j, 0j, 0.0
    for a in np.flatnonzero(chi):
        hv = hurwitz_with_error(s, a / q, target)
        val += chi[a] * hv.value
        dval += chi[a] * hv.derivative
        err += hv.error
    lq = math.log(q)
    qs = cmath.exp(-s * lq)
    # d/ds q^{-s} S = q^{-s}(S' - ln q S)
    return LValue(qs * val, qs * (dval - lq * val), abs(qs) * err * (1 + lq))


def l_at_one(D: int) -> float:
    """L(1, chi_D) = -(1/q) sum_a chi(a) psi(a/q)."""
    q = abs(D)
    chi = character_table(D)
    a = np.flatnonzero(chi)
    return float(-np.sum(chi[a] * digamma(a / q)) / q)


def zeta_k(K, s: complex) -> complex:
    """zeta_K(s) = zeta(s) L(s, chi_D)."""
    s = complex(s)
    if abs(s - 1) < 1e-6:
        raise NearPole("zeta_K has a pole at s = 1")
    G = riemann_regular(s)
    z = 1 / (s - 1) + G.value
    if K.D == 1:
        return z
    return z * dirichlet_l(s, K.D).value


def _log_derivatives(K, s: complex):
    """Return (zeta'/zeta + 1/(s-1), L'/L, |zeta_K(s)| (s-1) scale, error)."""
    s = complex(s)
    G = riemann_regular(s)
    h = s - 1
    denom = 1 + h * G.value  # (s-1) zeta(s)
    if abs(denom) < ZERO_THRESHOLD:
        raise NearZeroOfZeta(f"zeta(s) vanishes near s = {s}")
    reg = (h * G.derivative + G.value) / denom
    err = G.error * (1 + abs(h)) / abs(denom) ** 2
    if K.D == 1:
        return reg, 0j, abs(denom), err
    L = dirichlet_l(s, K.D)
    if abs(L.value) < ZERO_THRESHOLD:
        raise NearZeroOfZeta(f"L(s, chi_{K.D}) vanishes near s = {s}")
    err += L.error * (1 + abs(L.derivative / L.value)) / abs(L.value)
    return reg, L.derivative / L.value, abs(denom * L.value), err


def z_nf_with_error(K, s: complex) -> tuple[complex, float]:
    """Z_K(s) = zeta_K'/zeta_K(s) with a propagated error bound."""
    s = complex(s)
    if abs(s - 1) < 1e-6:
        raise NearPole("Z_K has a pole at s = 1")
    reg, ll, _, err = _log_derivatives(K, s)
    return reg - 1 / (s - 1) + ll, err


def z_nf(K, s: complex) -> complex:
    """Z_K(s) = zeta_K'/zeta_K(s) by Euler-Maclaurin continuation."""
    return z_nf_with_error(K, s)[0]


def z_nf_regularized(K, s: complex) -> complex:
    """Z_K(s) + 1/(s-1), holomorphic at s = 1."""
    reg, ll, _, _ = _log_derivatives(K, s)
    return reg + ll


def prime_ideals(D: int, X: int):
    """(norms, multiplicities) of the prime ideals above rational p <= X.

    Split p gives two ideals of norm p, inert p one of norm p^2 and
    ramified p one of norm p.  D = 1 is Q.
    """
    ps = primes_upto(X)
    if D == 1:
        return ps.astype(float), np.ones(len(ps))
    chi = np.array([kronecker(D, int(p)) for p in ps])
    norms = np.where(chi == -1, ps.astype(float) ** 2, ps.astype(float))
    mult = np.where(chi == 1, 2.0, 1.0)
    return norms, mult


def z_nf_prime_sum(K, s: complex, X: int = 10**6) -> complex:
    """-sum_p ln Np / (Np^s - 1) over prime ideals, for Re s > 1.

    Rational primes up to X are summed directly.  Writing the tail as
    sum_{p>X} (1 + chi(p)) ln p f(p) with f(t) = 1/(t^s - 1), each
    Chebyshev function theta(t, chi) is replaced by its mean (t or 0, minus
    sqrt t from prime squares) with the observed error at X fed in by partial
    summation.  Inert primes above X contribute O(X^{1-2s}) and are dropped.
    """
    s = complex(s)
    if s.real <= 1:
        raise DomainError("the Euler product converges only for Re s > 1")
    norms, mult = prime_ideals(K.D, X)
    logs = np.log(norms)
    direct = -np.sum(mult * logs / (np.exp(s * logs) - 1))
    ps = primes_upto(X)
    lp = np.log(ps)
    fX = 1 / (cmath.exp(s * math.log(X)) - 1)
    tail = _tail_integral(s, X) - (float(np.sum(lp)) - X) * fX
    n_chars = 1
    if K.D != 1:
        chi = np.array([kronecker(K.D, int(p)) for p in ps])
        tail -= float(np.sum(chi * lp)) * fX
        n_chars = 2
    # mean theta(t, chi) bias of -sqrt t, integrated against -f'(t)
    tail -= n_chars * s * X ** (0.5 - s) / (s - 0.5)
    return complex(direct - tail)


def _tail_integral(s: complex, X: float) -> complex:
    """int_X^inf dt / (t^s - 1) via the geometric expansion in t^{-s}."""
    total = 0j
    for k in range(1, 60):
        term = X ** (1 - k * s) / (k * s - 1)
        total += term
        if abs(term) < 1e-20:
            break
    return total


def chebyshev_psi(K, x: float) -> float:
    """Psi(x) = sum of ln Np over prime-ideal powers p^k with Np^k <= x."""
    if x < 2:
        return 0.0
    norms, mult = prime_ideals(K.D, int(x))
    total = 0.0
    for q, m in zip(norms, mult):
        if q > x:
            continue
        # powers q^k <= x, computed in integers to avoid rounding at the edge
        k, qk, qi = 0, 1, int(q)
        while qk * qi <= x:
            qk *= qi
            k += 1
        total += m * k * math.log(q)
    return total
