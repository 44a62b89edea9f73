"""Function-field explicit formula and the truncated log-derivative residual.

For a curve over F_r with inverse roots pi_j and a finitely supported test
sequence v, the explicit formula reads

    sum_n v_n r^(-n/2) N_n = psi_v(sqrt r) + psi_v(1/sqrt r) - sum_j psi_v(pi_j / sqrt r)

where the last sum runs over all 2g inverse roots.  With v_n = r^(-n eps)
for n <= N it splits into the sums S_0 .. S_3 used below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, InsufficientDepth, PoleProximity
from .ffcore import PlaceCounts, PointCounts
from .lfunc import InverseRoots, z_ff_closed

DEFAULT_C1 = 40.0
DEFAULT_C2 = 4.0


@dataclass(frozen=True)
class TestSequence:
    """Finitely supported v_1..v_L."""

    v: tuple[complex, ...]

    __test__ = False  # not a pytest class

    @property
    def support(self) -> int:
        return len(self.v)


def psi_v(v: TestSequence, t: complex) -> complex:
    """psi_v(t) = sum_{n>=1} v_n t^n (Horner)."""
    acc = 0j
    for c in reversed(v.v):
        acc = (acc + c) * t
    return acc


@dataclass(frozen=True)
class FormulaCheck:
    lhs: complex
    rhs: complex
    gap: float


def explicit_formula_check(v: TestSequence, counts: PointCounts, rts: InverseRoots) -> FormulaCheck:
    if counts.depth < v.support:
        raise InsufficientDepth(f"test sequence support {v.support} > count depth {counts.depth}")
    r = counts.r
    sq = math.sqrt(r)
    lhs = sum(c * r ** (-n / 2) * counts[n] for n, c in enumerate(v.v, 1))
    rhs = psi_v(v, sq) + psi_v(v, 1 / sq) - sum(psi_v(v, z / sq) for z in rts)
    return FormulaCheck(complex(lhs), complex(rhs), abs(lhs - rhs))


@dataclass(frozen=True)
class SDecomposition:
    S0: complex
    S1: complex
    S2: complex
    S3: complex
    R0: complex
    R3: complex

    @property
    def identity_gap(self) -> float:
        return abs(self.S0 - (self.S1 + self.S2 - self.S3))


def _powers(r, x):
    """r**x for complex x."""
    return cmath.exp(x * math.log(r))


def truncated_place_sum(places: PlaceCounts, N: int, eps: complex) -> complex:
    """sum_{f<=N} f Phi_f / (r^{(1/2+eps) f} - 1)."""
    if places.depth < N:
        raise InsufficientDepth(f"need place counts to depth {N}, have {places.depth}")
    r = places.r
    total = 0j
    for f in range(1, N + 1):
        if places[f]:
            d = _powers(r, (0.5 + eps) * f) - 1
            if abs(d) < 1e-14:
                raise PoleProximity(f"r^((1/2+eps){f}) = 1", term=f"f={f}")
            total += f * places[f] / d
    return total


def s_decomposition(counts: PointCounts, places: PlaceCounts, rts: InverseRoots, N: int, eps: complex) -> SDecomposition:
    eps = complex(eps)
    if eps.real <= 0:
        raise DomainError("Re eps must be positive")
    if counts.depth < N:
        raise InsufficientDepth(f"need counts to depth {N}, have {counts.depth}")
    r = counts.r
    w = _powers(r, -(0.5 + eps))  # r^-(1/2+eps)
    w1 = _powers(r, 0.5 - eps)
    S0 = sum(w**n * counts[n] for n in range(1, N + 1))
    S1 = sum(w1**n for n in range(1, N + 1))
    S2 = sum(w**n for n in range(1, N + 1))
    S3 = sum((w * z) ** n for z in rts for n in range(1, N + 1))
    R0 = truncated_place_sum(places, N, eps) - S0
    u = 1 / w
    root_terms = 0j
    for j, z in enumerate(rts):
        if abs(u - z) < 1e-12:
            raise PoleProximity(f"r^(1/2+eps) = pi_{j}", term=f"pi_{j}")
        root_terms += z / (u - z)
    R3 = S3 - root_terms
    return SDecomposition(complex(S0), complex(S1), complex(S2), complex(S3), complex(R0), complex(R3))


def r0_bound(r: int, g: int, N: int, eps0: float) -> float:
    """Printed bound 32 r^{-eps N} (g r^{-N/4} + 1/eps)."""
    return 32 * r ** (-eps0 * N) * (g * r ** (-N / 4) + 1 / eps0)


def r3_bound(r: int, g: int, N: int, eps0: float) -> float:
    """Printed bound 4 g r^{-N eps} / eps."""
    return 4 * g * r ** (-N * eps0) / eps0


def s1_bound(r: int, N: int, eps0: float) -> float:
    """r^{1/2-eps}(r^{(1/2-eps)N} - 1)/(r^{1/2-eps} - 1), exact for real eps."""
    x = r ** (0.5 - eps0)
    if abs(x - 1) < 1e-15:
        return float(N)
    return x * (x**N - 1) / (x - 1)


@dataclass
class ResidualReport:
    """Measured residual, bound envelope and breakdown for one grid cell."""

    residual: complex
    envelope: float
    params: dict
    components: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.envelope

    @property
    def abs_residual(self) -> float:
        return abs(self.residual)


def theorem1_envelope(r: int, g: int, N: int, eps0: float, c1: float = DEFAULT_C1, c2: float = DEFAULT_C2) -> float:
    return c1 * g / (eps0 * r ** (eps0 * N)) + c2 * r ** (N / 2)


def theorem1_residual(
    counts: PointCounts,
    places: PlaceCounts,
    rts: InverseRoots,
    g: int,
    N: int,
    eps: complex,
    c1: float = DEFAULT_C1,
    c2: float = DEFAULT_C2,
) -> ResidualReport:
    """sum_{f<=N} f Phi_f/(r^{(1/2+eps)f}-1) + Z_K(1/2+eps) + 1/(r^{-1/2+eps}-1)."""
    eps = complex(eps)
    if eps.real <= 0:
        raise DomainError("Re eps must be positive")
    if N < 10:
        raise DomainError("N must be at least 10")
    r = places.r
    trunc = truncated_place_sum(places, N, eps)
    z = z_ff_closed(rts, r, g, eps)
    pole = 1 / (_powers(r, eps - 0.5) - 1)
    residual = trunc + z + pole
    dec = s_decomposition(counts, places, rts, N, eps)
    return ResidualReport(
        residual=residual,
        envelope=theorem1_envelope(r, g, N, eps.real, c1, c2),
        params={"r": r, "g": g, "N": N, "eps": eps},
        components={
            "truncated_sum": trunc,
            "Z": z,
            "pole_term": pole,
            "S0": dec.S0,
            "S1": dec.S1,
            "S2": dec.S2,
            "S3": dec.S3,
            "R0": dec.R0,
            "R3": dec.R3,
            "identity_gap": dec.identity_gap,
        },
    )


@dataclass(frozen=True)
class BasicInequalityTerms:
    terms: tuple[float, ...]
    total: float


def basic_ineq_ff_terms(rts: InverseRoots, r: int, eps: float) -> BasicInequalityTerms:
    """Per conjugate pair (r^{1+2e} - |pi|^2) / |r^{1/2+e} - pi|^2, e > 0 real.

    The total equals Z_K(1/2+e) + 1/(r^{1/2+e}-1) + 1/(r^{-1/2+e}-1) + g.
    """
    if eps <= 0:
        raise DomainError("eps must be a positive real")
    u = r ** (0.5 + eps)
    # real inverse roots +-sqrt(r) occur with even multiplicity
    terms = []
    for z in rts.representatives:
        terms.append((u * u - abs(z) ** 2) / abs(u - z) ** 2)
    return BasicInequalityTerms(tuple(terms), float(sum(terms)))
