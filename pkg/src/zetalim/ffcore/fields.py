"""Finite fields F_{p^m} with discrete-log / Zech-log tables.

Elements are *encoded* as integers ``sum d_i p^i`` where ``d_i`` are the
coordinates in the power basis ``1, a, ..., a^(m-1)`` of a fixed primitive
element ``a``.  Bulk arithmetic is done in the *log domain*: a nonzero
element ``a^k`` is stored as ``k`` and zero as the sentinel ``q - 1``.
Multiplication is then addition of logs and addition uses the Zech table
``zech[k] = log(1 + a^k)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from ..errors import BadModel

_CHUNK = 1 << 18


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FiniteFieldSpec:
    """The base field F_r, r = p^k."""

    p: int
    k: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise BadModel(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise BadModel("extension degree k must be positive")

    @property
    def r(self) -> int:
        return self.p**self.k


# -- polynomials over F_p, little-endian integer lists ----------------------


def _mulmod(a, b, f, p):
    """a*b mod the monic polynomial f (all little-endian, coefficients in F_p)."""
    m = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            for j in range(m + 1):
                prod[i - m + j] = (prod[i - m + j] - c * f[j]) % p
    prod = prod[:m] + [0] * (m - len(prod[:m]))
    return prod


def _x_pow(e, f, p):
    m = len(f) - 1
    result = [1] + [0] * (m - 1)
    base = ([0, 1] + [0] * (m - 2)) if m > 1 else [(-f[0]) % p]
    while e:
        if e & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    return result


@functools.lru_cache(maxsize=None)
def primitive_polynomial(p: int, m: int) -> tuple[int, ...]:
    """First primitive monic polynomial of degree m over F_p.

    Candidates ``x^m + c_{m-1} x^(m-1) + ... + c_0`` are scanned by increasing
    ``sum c_i p^i``.  Returns ``(c_0, ..., c_{m-1}, 1)``.  An element of order
    p^m - 1 in F_p[x]/(f) forces f irreducible, so only the order is tested.
    """
    q1 = p**m - 1
    one = [1] + [0] * (m - 1)
    cofactors = [q1 // ell for ell in prime_factors(q1)]
    for code in range(1, p**m):
        low = [(code // p**i) % p for i in range(m)]
        if low[0] == 0:
            continue
        f = low + [1]
        if _x_pow(q1, f, p) != one:
            continue
        if all(_x_pow(e, f, p) != one for e in cofactors):
            return tuple(f)
    raise BadModel(f"no primitive polynomial of degree {m} over F_{p}")  # unreachable


class GF:
    """F_q, q = p^m, with full log / antilog / Zech tables."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p**m
        self.order = self.q - 1
        self.ZERO = self.q - 1
        self.modulus = primitive_polynomial(p, m)
        self._pw = p ** np.arange(m, dtype=np.int64)
        self._build()

    def _mult_matrix(self):
        p, m = self.p, self.m
        a = np.zeros((m, m), dtype=np.int64)
        for j in range(m - 1):
            a[j + 1, j] = 1
        for i in range(m):
            a[i, m - 1] = (-self.modulus[i]) % p
        return a

    def _build(self):
        p, n = self.p, self.order
        dtype = np.int32 if self.q < 2**31 else np.int64
        antilog = np.empty(n, dtype=np.int64)
        antilog[0] = 1
        power = self._mult_matrix()  # matrix of multiplication by a^filled
        filled = 1
        while filled < n:
            take = min(filled, n - filled)
            mt = power.T.copy()
            for s in range(0, take, _CHUNK):
                e = min(take, s + _CHUNK)
                digits = (antilog[s:e, None] // self._pw) % p
                antilog[filled + s : filled + e] = ((digits @ mt) % p) @ self._pw
            filled += take
            if filled < n:
                power = (power @ power) % p
        log = np.full(self.q, self.ZERO, dtype=np.int64)
        log[antilog] = np.arange(n, dtype=np.int64)
        if np.count_nonzero(log == self.ZERO) != 1:
            raise BadModel("field table construction failed")  # modulus not primitive
        d0 = antilog % p
        one_plus = np.where(d0 == p - 1, antilog - (p - 1), antilog + 1)
        zech = log[one_plus]
        self.antilog = antilog.astype(dtype)
        self.log = log.astype(dtype)
        self.zech = zech.astype(dtype)

    # -- scalar arithmetic on encodings --------------------------------------

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.m)]

    def encode(self, digits) -> int:
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(digits))

    def add(self, a: int, b: int) -> int:
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        return self.encode(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.antilog[(int(self.log[a]) + int(self.log[b])) % self.order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.antilog[(-int(self.log[a])) % self.order])

    def scale(self, a: int, k: int) -> int:
        """k*a for an integer k (repeated addition)."""
        return self.encode((k % self.p) * x for x in self.digits(a))

    def from_log(self, k: int) -> int:
        if k == self.ZERO:
            return 0
        return int(self.antilog[k % self.order])

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return int(self.log[a]) % 2 == 0

    # -- vectorised log-domain arithmetic ------------------------------------

    def lmul(self, la, lb):
        z = self.ZERO
        out = (la + lb) % self.order
        return np.where((la == z) | (lb == z), z, out)

    def lpow(self, la, k: int):
        if k == 0:
            return np.zeros_like(la)
        z = self.ZERO
        return np.where(la == z, z, (la * k) % self.order)

    def ladd(self, la, lb):
        z = self.ZERO
        d = (lb - la) % self.order
        zz = self.zech[np.where(la == z, 0, d)].astype(np.int64)
        s = np.where(zz == z, z, (la + zz) % self.order)
        s = np.where(la == z, lb, s)
        return np.where(lb == z, la, s)

    def ladd_const(self, la, lc: int):
        """la + c with c given by its log (may be ZERO)."""
        z = self.ZERO
        if lc == z:
            return la
        d = (la - lc) % self.order
        zz = self.zech[np.where(la == z, 0, d)].astype(np.int64)
        s = np.where(zz == z, z, (lc + zz) % self.order)
        return np.where(la == z, lc, s)

    def all_logs(self, start: int = 0, stop: int | None = None):
        """Logs of the elements 0, a^0, a^1, ..., in that order (a slice)."""
        stop = self.q if stop is None else stop
        idx = np.arange(start, stop, dtype=np.int64)
        # element index 0 is zero; element index i >= 1 is a^(i-1)
        return np.where(idx == 0, self.ZERO, idx - 1)


@functools.lru_cache(maxsize=4)
def field(p: int, m: int) -> GF:
    return GF(p, m)


def embedding_logs(small: GF, big: GF) -> np.ndarray:
    """Map encodings of F_{p^k} to logs in F_{p^m} (k | m) via a field embedding.

    The primitive element of the small field is sent to a root of its
    minimal polynomial among the elements of order p^k - 1 in the big field.
    """
    if small.p != big.p or big.m % small.m:
        raise BadModel("no embedding between these fields")
    out = np.empty(small.q, dtype=np.int64)
    if small.m == 1:
        out[:] = big.log[: small.p]
        return out
    step = big.order // small.order
    f = small.modulus  # coefficients lie in F_p: constant encodings
    for j in range(1, small.order):
        if np.gcd(j, small.order) != 1:
            continue
        beta = (j * step) % big.order
        acc = 0
        for i, c in enumerate(f):
            if c:
                acc = big.add(acc, big.mul(c, big.from_log((i * beta) % big.order)))
        if acc == 0:
            break
    else:  # pragma: no cover
        raise BadModel("embedding root not found")
    out[0] = big.ZERO
    lg = small.log[1:].astype(np.int64)
    out[1:] = (lg * beta) % big.order
    return out
