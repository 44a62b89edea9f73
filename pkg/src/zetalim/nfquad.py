"""Quadratic number fields: splitting, place counts, class data and residues.

Q itself is supported as the degenerate field (n = 1, D = 1, g = 0) so that
rational and quadratic computations share one code path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analytic.lfunctions import l_at_one, prime_ideals
from .arith import fundamental_discriminant, is_fundamental, is_squarefree, kronecker
from .errors import InconsistentData, InputError, NotFundamental, OverflowBudget

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"

# archimedean weights of the number-field basic inequality
REAL_WEIGHT = math.log(2 * math.sqrt(2 * math.pi)) + math.pi / 4 + 0.57721566490153286 / 2
COMPLEX_WEIGHT = math.log(8 * math.pi) + 0.57721566490153286


@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt d) for squarefree d != 0, 1."""

    d: int

    def __post_init__(self):
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise InputError(f"d = {self.d} must be a squarefree integer other than 0 and 1")

    @property
    def D(self) -> int:
        return fundamental_discriminant(self.d)

    n = 2

    @property
    def r1(self) -> int:
        return 2 if self.d > 0 else 0

    @property
    def r2(self) -> int:
        return 0 if self.d > 0 else 1

    @property
    def g(self) -> float:
        return 0.5 * math.log(abs(self.D))

    @property
    def label(self) -> str:
        return f"Q(sqrt({self.d}))"


@dataclass(frozen=True)
class Rationals:
    """Q, with the conventions D = 1, g = 0."""

    d = 1
    D = 1
    n = 1
    r1 = 1
    r2 = 0
    g = 0.0
    label = "Q"


QQ = Rationals()


def field_from_dict(data) -> QuadraticField | Rationals:
    """Parse ``{"d": -23}``; ``d = 1`` or ``"Q"`` gives the rationals."""
    try:
        d = data["d"] if isinstance(data, dict) else data
        if d in ("Q", "QQ", 1):
            return QQ
        return QuadraticField(int(d))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad field specification {data!r}") from exc


def load_fields(path: str | Path) -> list:
    """A field file holds one ``{"d": ...}`` object or a list of them."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read field file {path}: {exc}") from exc
    if isinstance(data, dict) and "fields" in data:
        data = data["fields"]
    if isinstance(data, list):
        return [field_from_dict(x) for x in data]
    return [field_from_dict(data)]


def splitting_type(K, p: int) -> str:
    if K.D == 1:
        return SPLIT  # a single degree-one place; Q has no genuine splitting
    chi = kronecker(K.D, p)
    return {1: SPLIT, -1: INERT, 0: RAMIFIED}[chi]


@dataclass(frozen=True)
class NFPlaceCounts:
    """Phi_q for prime-power norms q <= N_max."""

    N_max: int
    phi: dict[int, int] = field(default_factory=dict)

    def __getitem__(self, q: int) -> int:
        return self.phi.get(q, 0)

    def items(self):
        return sorted(self.phi.items())


def place_counts_nf(K, N: int) -> NFPlaceCounts:
    if N < 2:
        return NFPlaceCounts(N, {})
    norms, mult = prime_ideals(K.D, N)
    phi: dict[int, int] = {}
    for q, m in zip(norms.astype(np.int64), mult.astype(np.int64)):
        if q <= N:
            phi[int(q)] = phi.get(int(q), 0) + int(m)
    return NFPlaceCounts(N, phi)


def class_number_imag(D: int) -> int:
    """Count reduced primitive forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def _cf_floor(P: int, Q: int, s0: int) -> int:
    """floor((P + sqrt d)/Q) for non-square d with isqrt(d) = s0."""
    if Q > 0:
        return (P + s0) // Q
    return -((P + s0) // -Q) - 1


def _reduced(P: int, Q: int, d: int) -> bool:
    """(P + sqrt d)/Q > 1 with conjugate in (-1, 0)."""
    return (
        Q > 0
        and (Q - P < 0 or (Q - P) ** 2 < d)
        and (P < 0 or P * P < d)
        and P + Q > 0
        and (P + Q) ** 2 > d
    )


def regulator_real(d: int, max_steps: int = 10**6) -> float:
    """ln of the fundamental unit of Q(sqrt d), d > 1 squarefree.

    Expands omega = sqrt d (or (1 + sqrt d)/2 when d = 1 mod 4, so the
    unit is that of the maximal order) as a continued fraction.  Once a
    reduced complete quotient appears the expansion is purely periodic and
    the product of complete quotients over one period is the fundamental
    unit.
    """
    if d <= 1 or not is_squarefree(d):
        raise InputError(f"d = {d} must be a squarefree integer > 1")
    s0 = math.isqrt(d)
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    start = None
    log_unit = 0.0
    sd = math.sqrt(d)
    for _ in range(max_steps):
        if start is None and _reduced(P, Q, d):
            start = (P, Q)
        if start is not None:
            log_unit += math.log((P + sd) / Q)
        a = _cf_floor(P, Q, s0)
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == start:
            return log_unit
    raise OverflowBudget(f"continued fraction of sqrt({d}) did not close in {max_steps} steps")


@dataclass(frozen=True)
class ResidueData:
    """Class number formula ingredients and the residue of zeta_K at s = 1."""

    h: int
    w: int
    R: float
    kappa: float

    def log_kappa_over_g(self, g: float) -> float:
        return math.log(self.kappa) / g if g > 0 else math.nan


def roots_of_unity(D: int) -> int:
    return {-4: 4, -3: 6}.get(D, 2)


def class_number_real(d: int) -> tuple[int, float]:
    """h and R for d > 1 from h R = sqrt(D) L(1, chi_D) / 2."""
    D = fundamental_discriminant(d)
    R = regulator_real(d)
    hr = math.sqrt(D) * l_at_one(D) / 2
    h = round(hr / R)
    if h < 1 or abs(hr / R - h) >= 0.1:
        raise InconsistentData(f"h R / R = {hr / R:.6f} for d = {d} is not near an integer")
    return h, R


def residue_kappa(K) -> ResidueData:
    """kappa_K = 2^{r1} (2 pi)^{r2} h R / (w sqrt|D|)."""
    if K.D == 1:
        return ResidueData(1, 2, 1.0, 1.0)
    if K.d < 0:
        h, R = class_number_imag(K.D), 1.0
    else:
        h, R = class_number_real(K.d)
    w = roots_of_unity(K.D)
    kappa = 2**K.r1 * (2 * math.pi) ** K.r2 * h * R / (w * math.sqrt(abs(K.D)))
    return ResidueData(h, w, R, kappa)


@dataclass(frozen=True)
class BSSum:
    """sum_{q<=N} Phi_q ln(q/(q-1)) for one field, against ln kappa_K.

    For a single field this is a diagnostic only: the sum diverges like
    ln ln N and does not converge to ln kappa_K.
    """

    label: str
    N: int
    g: float
    partial_sum: float
    log_kappa: float
    diagnostic: bool = True
    note: str = "diagnostic, divergent as N -> infinity"


def _bs_partial(places: NFPlaceCounts) -> float:
    return float(sum(c * math.log(q / (q - 1)) for q, c in places.items()))


def bs_sum_nf(K, N: int) -> BSSum:
    places = place_counts_nf(K, N)
    return BSSum(K.label, N, K.g, _bs_partial(places), math.log(residue_kappa(K).kappa))


@dataclass(frozen=True)
class FamilyBS:
    """Normalized Brauer-Siegel data over a family of quadratic fields."""

    N: int
    members: tuple[BSSum, ...]
    phi_hat: dict[int, float]
    family_sum: float
    kappa_ratios: tuple[float, ...]  # ln kappa_i / g_i

    @property
    def note(self) -> str:
        return "family sum uses tail-averaged phi estimates"


def bs_family_nf(fields, N: int, window: int = 3) -> FamilyBS:
    """Tail-average Phi_q/g_i over the last ``window`` members, then sum."""
    fields = sorted(fields, key=lambda K: K.g)
    members = tuple(bs_sum_nf(K, N) for K in fields)
    tail = fields[-window:]
    phi_hat: dict[int, float] = {}
    for K in tail:
        for q, c in place_counts_nf(K, N).items():
            phi_hat[q] = phi_hat.get(q, 0.0) + c / K.g / len(tail)
    fam = float(sum(v * math.log(q / (q - 1)) for q, v in sorted(phi_hat.items())))
    ratios = tuple(m.log_kappa / m.g for m in members)
    return FamilyBS(N, members, phi_hat, fam, ratios)


@dataclass(frozen=True)
class BasicInequalityNF:
    value: float
    passed: bool


def basic_ineq_nf(inv, tol: float = 1e-9) -> BasicInequalityNF:
    """sum_q phi_q ln q/(sqrt q - 1) + phi_R w_R + phi_C w_C <= 1.

    ``inv`` needs ``phi`` (norm -> value) and ``phi_R``, ``phi_C``.
    """
    total = sum(v * math.log(q) / (math.sqrt(q) - 1) for q, v in sorted(inv.phi.items()))
    total += inv.phi_R * REAL_WEIGHT + inv.phi_C * COMPLEX_WEIGHT
    return BasicInequalityNF(float(total), total <= 1 + tol)
