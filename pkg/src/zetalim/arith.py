"""Small integer arithmetic helpers: sieve, Kronecker symbol, discriminants."""

from __future__ import annotations

import functools

import numpy as np


@functools.lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags)


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # round the cache key up so nearby limits share one sieve
    key = 1 << max(10, int(limit).bit_length())
    ps = _sieve(key)
    return ps[: np.searchsorted(ps, limit, side="right")]


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D | p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    a = D % p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt d) for squarefree d != 0, 1."""
    return d if d % 4 == 1 else 4 * d


def character_table(D: int) -> np.ndarray:
    """chi_D(a) for a = 0..|D|-1, chi_D = (D | .) the Kronecker character."""
    q = abs(D)
    out = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        if np.gcd(a, q) != 1:
            continue
        out[a] = _kronecker_general(D, a)
    return out


def _kronecker_general(D: int, n: int) -> int:
    """(D | n) for n >= 1 via multiplicativity over the factorisation of n."""
    res = 1
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            res *= kronecker(D, d)
            m //= d
        d += 1
    if m > 1:
        res *= kronecker(D, m)
    return res
