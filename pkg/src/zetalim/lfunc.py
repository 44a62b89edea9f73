"""L-polynomials of curves over F_r, inverse roots and zeta evaluations.

All logarithms here are to base r: Z_K(s) = d/ds log_r zeta_K(s), which
makes Z_K(s) a rational function of t = r^-s.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np
import sympy

from .errors import (
    InputError,
    InsufficientDepth,
    NoConvergence,
    NonIntegralCoefficient,
    PoleAtS,
    PoleProximity,
)
from .ffcore import PlaceCounts, PointCounts

DEFAULT_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class LPolynomial:
    """P(t) = sum a_i t^i with zeta_K(s) = P(t) / ((1 - t)(1 - r t))."""

    r: int
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.g + 1:
            raise InputError(f"L-polynomial of genus {self.g} needs {2 * self.g + 1} coefficients")

    def functional_equation_ok(self) -> bool:
        a, r, g = self.coeffs, self.r, self.g
        return a[0] == 1 and all(a[2 * g - i] == r ** (g - i) * a[i] for i in range(g + 1))

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def class_number(self) -> int:
        """P(1), the number of rational divisor classes of degree zero."""
        return sum(self.coeffs)

    def to_json(self) -> str:
        return json.dumps({"r": self.r, "g": self.g, "coeffs": list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> "LPolynomial":
        try:
            d = json.loads(text)
            return cls(int(d["r"]), int(d["g"]), tuple(int(c) for c in d["coeffs"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad L-polynomial JSON: {exc}") from exc


@dataclass(frozen=True)
class InverseRoots:
    """The 2g inverse roots pi_j of P (with multiplicity), sorted."""

    values: tuple[complex, ...]
    tol: float = DEFAULT_ROOT_TOL
    backward_error: float = 0.0

    @property
    def g(self) -> int:
        return len(self.values) // 2

    @property
    def representatives(self) -> tuple[complex, ...]:
        """One inverse root per conjugate pair (Im >= 0; real roots halved)."""
        upper = [z for z in self.values if z.imag > self.tol]
        real = sorted((z for z in self.values if abs(z.imag) <= self.tol), key=lambda z: z.real)
        return tuple(upper) + tuple(real[::2])

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def lpoly_from_counts(counts: PointCounts, r: int | None = None, g: int = 0) -> LPolynomial:
    """Solve a_1..a_g from N_1..N_g by Newton's identities; mirror the rest."""
    r = counts.r if r is None else r
    if counts.depth < g:
        raise InsufficientDepth(f"genus {g} needs N_1..N_{g}, have {counts.depth}")
    # power sums of all 2g inverse roots
    p = [None] + [r**n + 1 - counts[n] for n in range(1, g + 1)]
    e = [1]
    for n in range(1, g + 1):
        s = sum((-1) ** (i - 1) * e[n - i] * p[i] for i in range(1, n + 1))
        if s % n:
            raise NonIntegralCoefficient(f"e_{n} = {s}/{n} is not an integer")
        e.append(s // n)
    a = [(-1) ** i * e[i] for i in range(g + 1)]
    a += [r ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    return LPolynomial(r, g, tuple(a))


def power_sums(P: LPolynomial, depth: int) -> list[int]:
    """Exact s_n = sum of pi_j^n over all 2g inverse roots, n = 1..depth."""
    e = [(-1) ** i * c for i, c in enumerate(P.coeffs)]
    s = []
    for n in range(1, depth + 1):
        acc = (-1) ** (n - 1) * n * e[n] if n <= 2 * P.g else 0
        for i in range(1, min(n, 2 * P.g + 1)):
            acc += (-1) ** (i - 1) * e[i] * s[n - i - 1]
        s.append(acc)
    return s


def counts_from_lpoly(P: LPolynomial, depth: int) -> PointCounts:
    """N_n = r^n + 1 - s_n, exact, for n = 1..depth."""
    return PointCounts(P.r, tuple(P.r**n + 1 - s for n, s in enumerate(power_sums(P, depth), 1)))


def _polish(coeffs, t, iters=6):
    """Newton steps on the (little-endian) polynomial at a simple root t."""
    for _ in range(iters):
        v, dv = 0j, 0j
        for c in reversed(coeffs):
            dv = dv * t + v
            v = v * t + c
        if dv == 0:
            break
        step = v / dv
        t -= step
        if abs(step) <= 1e-17 * abs(t):
            break
    return t


def roots(P: LPolynomial, tol: float = DEFAULT_ROOT_TOL, precision_bits: int | None = None) -> InverseRoots:
    """All 2g inverse roots of P, via squarefree factorisation over Z.

    Each squarefree factor is solved by companion-matrix eigenvalues and
    Newton-polished (or by mpmath at ``precision_bits`` when given).
    """
    if P.g == 0:
        return InverseRoots((), tol, 0.0)
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(P.coeffs)), t)
    _, factors = poly.sqf_list()
    found = []
    for fac, mult in factors:
        c = [int(x) for x in reversed(fac.all_coeffs())]  # little-endian
        if len(c) == 1:
            continue
        if precision_bits:
            with mpmath.workprec(precision_bits):
                rts = mpmath.polyroots(list(reversed(c)), maxsteps=200, extraprec=precision_bits)
                rts = [complex(z) for z in rts]
        else:
            rts = [_polish(c, complex(z)) for z in np.roots(list(reversed(c)))]
        found.extend(rts * mult)
    if len(found) != 2 * P.g:
        raise NoConvergence(f"found {len(found)} roots for degree {2 * P.g}")
    berr = 0.0
    for z in found:
        scale = sum(abs(a) * abs(z) ** i for i, a in enumerate(P.coeffs))
        berr = max(berr, abs(P(z)) / scale)
    if berr > tol:
        raise NoConvergence(f"backward error {berr:.3g} above tolerance {tol:g}")
    inv = sorted((1 / z for z in found), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return InverseRoots(tuple(inv), tol, berr)


@dataclass(frozen=True)
class RHCheck:
    passed: bool
    max_deviation: float


def rh_check(rts: InverseRoots, r: int, tol: float = 1e-8) -> RHCheck:
    """max_j | |pi_j| - sqrt(r) |; pass iff within tol."""
    sq = math.sqrt(r)
    dev = max((abs(abs(z) - sq) for z in rts), default=0.0)
    return RHCheck(dev <= tol, dev)


def _shift_point(r, eps):
    return cmath.exp((0.5 + eps) * math.log(r))


def z_ff_closed(rts: InverseRoots, r: int, g: int, eps: complex, tol: float = 1e-12) -> complex:
    """Z_K(1/2 + eps) from the rational expression of zeta_K."""
    eps = complex(eps)
    u = _shift_point(r, eps)
    v = cmath.exp((eps - 0.5) * math.log(r))
    if abs(u - 1) <= tol:
        raise PoleProximity("r^(1/2+eps) = 1", term="1/(r^(1/2+eps)-1)")
    if abs(v - 1) <= tol:
        raise PoleProximity("r^(-1/2+eps) = 1", term="1/(r^(-1/2+eps)-1)")
    if len(rts) != 2 * g:
        raise InputError(f"{len(rts)} inverse roots for genus {g}")
    total = -1 / (u - 1) - 1 / (v - 1)
    for j, z in enumerate(rts):
        if abs(u - z) <= tol:
            raise PoleProximity(f"r^(1/2+eps) = pi_{j}", term=f"pi_{j}/(r^(1/2+eps)-pi_{j})")
        total += z / (u - z)
    return total


def z_ff_series(places: PlaceCounts, s: complex, cutoff: int, g: int | None = None):
    """Partial sum -sum_{f<=cutoff} f Phi_f / (r^{fs} - 1) plus a Weil tail bound.

    Returns ``(value, tail_bound)``; the bound is infinite when ``g`` is not
    known or Re s <= 1.
    """
    s = complex(s)
    r = places.r
    top = min(cutoff, places.depth)
    lr = math.log(r)
    val = 0j
    for f in range(1, top + 1):
        c = places[f]
        if c:
            val -= f * c / (cmath.exp(f * s * lr) - 1)
    if g is None or s.real <= 1:
        return val, math.inf
    tail = 0.0
    f = top + 1
    while True:
        term = (r**f + 1 + 2 * g * r ** (f / 2)) / (r ** (f * s.real) - 1)
        tail += term
        if term < 1e-18 * max(1.0, tail) or f > top + 10000:
            break
        f += 1
    return val, tail


def zeta_ff_eval(P: LPolynomial, s: complex, tol: float = 1e-14) -> complex:
    """zeta_K(s) = P(t) / ((1 - t)(1 - r t)), t = r^-s."""
    t = cmath.exp(-complex(s) * math.log(P.r))
    if abs(1 - t) <= tol or abs(1 - P.r * t) <= tol:
        raise PoleAtS(f"zeta_K has a pole at s = {s}")
    return P(t) / ((1 - t) * (1 - P.r * t))
