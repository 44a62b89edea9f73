"""Asymptotically exact families: invariants, limit zeta functions, residuals.

Invariants are indexed by norm q.  For function-field families over F_r a
place of norm q = r^f carries weight f = log_r q and s-powers are taken in
base r; number-field invariants use natural logarithms.

Besides finite tables, an invariant may be declared in closed form as a
function of the degree f.  The series are then summed until the terms
underflow, and an error is raised if they have not become negligible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import (
    DomainError,
    InfeasibleTargets,
    InputError,
    NoConvergenceAtHalf,
    TooFewMembers,
)
from .explicitff import ResidualReport
from .nfquad import COMPLEX_WEIGHT, REAL_WEIGHT

BASIC_TOL = 1e-9
CLOSED_FORM_DEGREES = 4000
SYNTH_MAX_DEGREE = 12
_MACHINE_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class FamilyMember:
    """One field of a family: genus g and place counts by norm."""

    label: str
    g: float
    phi: dict[int, int]
    n: int | None = None
    r1: int | None = None
    r2: int | None = None

    def __post_init__(self):
        if not self.g > 0:
            raise InputError(f"{self.label}: genus must be positive")
        if any(c < 0 for c in self.phi.values()):
            raise InputError(f"{self.label}: place counts must be nonnegative")


@dataclass(frozen=True)
class TVInvariants:
    """Tsfasman-Vladut invariants phi_q of a family.

    ``r`` is the constant-field size for function fields and ``None`` for
    number fields.  ``closed_form`` (function fields only) gives phi at
    degree f and overrides ``phi``.
    """

    r: int | None
    phi: dict[int, float] = field(default_factory=dict)
    phi_R: float = 0.0
    phi_C: float = 0.0
    provenance: str = "declared"
    closed_form: Callable[[int], float] | None = None
    description: str = ""

    def __post_init__(self):
        if any(v < 0 for v in self.phi.values()) or self.phi_R < 0 or self.phi_C < 0:
            raise InputError("invariants must be nonnegative")
        if self.closed_form is not None and self.r is None:
            raise InputError("closed forms are supported for function-field families only")
        if self.r is not None:
            for q in self.phi:
                if _degree(q, self.r) is None:
                    raise InputError(f"norm {q} is not a power of r = {self.r}")

    @property
    def is_ff(self) -> bool:
        return self.r is not None

    def series(self):
        """Arrays (ln q, weight, phi) over the whole support."""
        if self.closed_form is not None:
            ph = _tabulate(self.closed_form, self.r)
            f = np.arange(1, len(ph) + 1, dtype=float)
            return f * math.log(self.r), f, np.array(ph)
        items = sorted(self.phi.items())
        q = np.array([k for k, _ in items], dtype=float)
        ph = np.array([v for _, v in items], dtype=float)
        lq = np.log(q) if len(q) else np.zeros(0)
        w = lq / math.log(self.r) if self.is_ff else lq
        return lq, w, ph

    def value_at(self, q: int) -> float:
        if self.closed_form is not None:
            f = _degree(q, self.r)
            return self.closed_form(f) if f else 0.0
        return self.phi.get(q, 0.0)


def _tabulate(phi, r: int) -> list[float]:
    """phi(1), phi(2), ... until the basic-inequality terms are negligible."""
    lr = math.log(r)
    out, total = [], 0.0
    for f in range(1, CLOSED_FORM_DEGREES + 1):
        v = phi(f)
        out.append(v)
        term = f * v / math.expm1(f * lr / 2)
        total += term
        if f >= 8 and term <= 1e-20 * total or total == 0.0 and f >= 64:
            break
    return out


def _degree(q: int, r: int) -> int | None:
    f, x = 0, 1
    while x < q:
        x *= r
        f += 1
    return f if x == q and f > 0 else None


def _log_base(inv: TVInvariants) -> float:
    return math.log(inv.r) if inv.is_ff else 1.0


def _terms(inv: TVInvariants, s: complex):
    """Per-place weight * phi / (q^s - 1) and ln q, computed without overflow."""
    lq, w, ph = inv.series()
    x = np.exp(-complex(s) * lq)
    return lq, w * ph * x / (1 - x)


def _head_mask(inv: TVInvariants, lq, N) -> np.ndarray:
    """Places counted by a truncation at N (degree <= N, or norm <= N)."""
    cut = N * math.log(inv.r) if inv.is_ff else math.log(N)
    return lq <= cut * (1 + 1e-12)


def _check_summable(inv: TVInvariants, terms) -> None:
    if inv.closed_form is not None and len(terms):
        if abs(terms[-1]) > 1e-16 * max(1e-300, float(np.sum(np.abs(terms)))):
            raise NoConvergenceAtHalf("closed-form series has not converged at the last degree")


def basic_inequality(inv: TVInvariants) -> float:
    """sum_q weight phi_q / (sqrt q - 1) plus the archimedean terms."""
    _, t = _terms(inv, 0.5)
    _check_summable(inv, t)
    total = float(np.sum(np.real(t)))
    if not inv.is_ff:
        total += inv.phi_R * REAL_WEIGHT + inv.phi_C * COMPLEX_WEIGHT
    return total


def basic_inequality_ok(inv: TVInvariants, tol: float = BASIC_TOL) -> bool:
    return basic_inequality(inv) <= 1 + tol


@dataclass(frozen=True)
class InvariantEstimate:
    invariants: TVInvariants
    spread: dict[int, float]
    window: tuple[str, ...]


def estimate_invariants(members: list[FamilyMember], window: int = 3, r: int | None = None) -> InvariantEstimate:
    """Tail averages of Phi_q/g_i over the last ``window`` members.

    ``spread`` is max - min of Phi_q/g_i over the window, a Cauchy-style
    convergence indicator.
    """
    if len(members) < 3 or window < 3 or len(members) < window:
        raise TooFewMembers(f"need at least 3 members in the window, have {min(len(members), window)}")
    gs = [m.g for m in members]
    if any(b <= a for a, b in zip(gs, gs[1:])):
        raise InputError("member genera must be strictly increasing")
    tail = members[-window:]
    norms = sorted({q for m in tail for q in m.phi})
    phi, spread = {}, {}
    for q in norms:
        ratios = [m.phi.get(q, 0) / m.g for m in tail]
        phi[q] = sum(ratios) / len(ratios)
        spread[q] = max(ratios) - min(ratios)
    phi_R = phi_C = 0.0
    if r is None and all(m.r1 is not None for m in tail):
        phi_R = sum(m.r1 / m.g for m in tail) / len(tail)
        phi_C = sum(m.r2 / m.g for m in tail) / len(tail)
    inv = TVInvariants(r, phi, phi_R, phi_C, provenance="estimated")
    return InvariantEstimate(inv, spread, tuple(m.label for m in tail))


def _tail_ratio(s: complex, lq_start: float) -> float:
    """(sqrt q - 1)/(q^sigma - 1) at the first norm beyond the cut.

    For sigma > 1/2 the ratio decreases in q, so this is its supremum.
    """
    sigma = complex(s).real
    if sigma * lq_start > 700:
        return 0.0
    return float(math.expm1(lq_start / 2) / math.expm1(sigma * lq_start))


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float


def limit_z(inv: TVInvariants, s: complex, cutoff: int) -> SeriesValue:
    """Truncated -sum_q weight phi_q/(q^s - 1) over places up to ``cutoff``.

    ``cutoff`` is a degree for function fields and a norm bound otherwise.
    The tail bound is the basic-inequality mass not yet used times the
    largest ratio (sqrt q - 1)/(q^Re s - 1) beyond the cut.
    """
    s = complex(s)
    if s.real <= 0.5:
        raise DomainError("limit zeta series needs Re s > 1/2; use theorem_onehalf_residual at 1/2")
    lq, t = _terms(inv, s)
    head = _head_mask(inv, lq, cutoff)
    value = -complex(np.sum(t[head]))
    _, t_half = _terms(inv, 0.5)
    used = float(np.sum(np.real(t_half[head])))
    if inv.closed_form is None:
        remaining = float(np.sum(np.real(t_half[~head])))
    else:
        remaining = max(0.0, 1 + BASIC_TOL - used)
    first = (cutoff + 1) * math.log(inv.r) if inv.is_ff else math.log(cutoff + 1)
    return SeriesValue(value, remaining * _tail_ratio(s, first))


def limit_z_full(inv: TVInvariants, s: complex) -> complex:
    """Z of the family summed over the whole declared support."""
    _, t = _terms(inv, s)
    _check_summable(inv, t)
    return -complex(np.sum(t))


def _tail_sum(inv: TVInvariants, s: complex, N) -> complex:
    """sum over places beyond the truncation at N of weight phi/(q^s - 1)."""
    lq, t = _terms(inv, s)
    _check_summable(inv, t)
    return complex(np.sum(t[~_head_mask(inv, lq, N)]))


def corollary13_envelope(inv: TVInvariants, N, eps0: float, C: float = 8.0) -> float:
    scale = inv.r ** (eps0 * N) if inv.is_ff else N**eps0
    return C / (eps0 * scale)


def corollary13_residual(inv: TVInvariants, N, eps: complex, C: float = 8.0) -> ResidualReport:
    """sum_{f<=N} f phi/(r^{(1/2+eps)f} - 1) + Z(1/2+eps), i.e. minus the tail."""
    eps = complex(eps)
    if eps.real <= 0:
        raise DomainError("Re eps must be positive")
    residual = -_tail_sum(inv, 0.5 + eps, N)
    return ResidualReport(residual, corollary13_envelope(inv, N, eps.real, C), {"N": N, "eps": eps})


@dataclass(frozen=True)
class ConvergenceFit:
    """Decay exponent from least squares on log_base |residual| against N.

    ``delta`` is ``math.inf`` when every residual vanishes (exact sentinel).
    """

    delta: float
    fit_residual: float
    window: tuple

    @property
    def exact(self) -> bool:
        return math.isinf(self.delta)


def fit_decay(Ns, residuals, base: float) -> ConvergenceFit:
    """OLS of log_base |res| on N over the points where |res| > 10 eps_machine."""
    pts = [(n, abs(r)) for n, r in zip(Ns, residuals) if abs(r) > 10 * _MACHINE_EPS]
    if len(pts) < 2:
        return ConvergenceFit(math.inf, 0.0, tuple(Ns))
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.log([p[1] for p in pts]) / math.log(base)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fitted = A @ coef
    return ConvergenceFit(float(-coef[0]), float(np.sqrt(np.mean((y - fitted) ** 2))), tuple(int(p[0]) for p in pts))


def theorem_onehalf_residual(inv: TVInvariants, Ns) -> tuple[list[ResidualReport], ConvergenceFit]:
    """sum_{f<=N} f phi/(r^{f/2} - 1) + Z(1/2) over the N grid, with a decay fit.

    Z at 1/2 is the full series, so each residual is minus the tail beyond N.
    The envelope is the basic-inequality capacity left after the first N
    terms, which bounds the tail of any feasible family with that head.
    For number-field invariants the fit is against ln N (power decay).
    """
    lq, t_half = _terms(inv, 0.5)
    _check_summable(inv, t_half)
    arch = 0.0 if inv.is_ff else inv.phi_R * REAL_WEIGHT + inv.phi_C * COMPLEX_WEIGHT
    reports = []
    for N in Ns:
        head = _head_mask(inv, lq, N)
        tail = complex(np.sum(t_half[~head]))
        capacity = max(0.0, 1 + BASIC_TOL - arch - float(np.sum(np.real(t_half[head]))))
        reports.append(ResidualReport(-tail, capacity, {"N": N}))
    if inv.is_ff:
        fit = fit_decay(list(Ns), [rep.residual for rep in reports], inv.r)
    else:
        fit = fit_decay([math.log(N) for N in Ns], [rep.residual for rep in reports], math.e)
    return reports, fit


@dataclass(frozen=True)
class KappaValue:
    value: float
    tail_bound: float


def _kappa_terms(inv: TVInvariants):
    lq, w, ph = inv.series()
    # phi log_base(q/(q-1)) = -phi log1p(-1/q) / ln base
    return lq, -ph * np.log1p(-np.exp(-lq)) / _log_base(inv)


def kappa_limit(inv: TVInvariants) -> KappaValue:
    """kappa = sum_q phi_q log(q/(q-1)), logarithms in base r for function fields."""
    lq, t = _kappa_terms(inv)
    _check_summable(inv, t)
    tail = 0.0
    if inv.closed_form is not None:
        # beyond the tabulated degrees: remaining basic mass times the largest ratio
        _, t_half = _terms(inv, 0.5)
        remaining = max(0.0, 1 + BASIC_TOL - float(np.sum(np.real(t_half))))
        tail = remaining * _kappa_ratio(len(t) + 1, math.log(inv.r))
    return KappaValue(float(np.sum(t)), tail)


def _kappa_ratio(f: int, lr: float) -> float:
    """h(f) = (r^{f/2} - 1) log_r(r^f/(r^f - 1)) / f, evaluated without overflow."""
    x = math.exp(-f * lr)
    if x == 0.0:
        return 0.0
    return (1 - math.sqrt(x)) * (-math.log1p(-x) / x) * math.sqrt(x) / (f * lr)


def corollary15_envelope(inv: TVInvariants, N, onehalf_residual: float) -> float:
    """Bound on the kappa tail from the tail of the basic inequality.

    Each term phi_f log_r(r^f/(r^f - 1)) equals the basic-inequality term
    f phi_f/(r^{f/2} - 1) times h(f) = (r^{f/2}-1) log_r(r^f/(r^f-1))/f,
    which decreases in f; so the tail beyond N is at most h(N+1) times the
    one-half residual at N.
    """
    if inv.is_ff:
        h = _kappa_ratio(N + 1, math.log(inv.r))
    else:
        q = N + 1
        h = (math.sqrt(q) - 1) * -math.log1p(-1 / q) / math.log(q)
    return abs(onehalf_residual) * h


def corollary15_residual(inv: TVInvariants, N, fit: ConvergenceFit | None = None) -> ResidualReport:
    """sum_{f<=N} phi_f log(r^f/(r^f-1)) - kappa, i.e. minus the kappa tail.

    The component ``delta_model`` is r^{-(1/2+delta)N}/N for the fitted
    delta when a fit is supplied.
    """
    lq, t = _kappa_terms(inv)
    _check_summable(inv, t)
    residual = -float(np.sum(t[~_head_mask(inv, lq, N)]))
    half = _tail_sum(inv, 0.5, N).real
    comps = {"kappa": float(np.sum(t)), "onehalf_tail": half}
    if fit is not None and inv.is_ff and not fit.exact:
        comps["delta_model"] = inv.r ** (-(0.5 + fit.delta) * N) / N
    return ResidualReport(complex(residual), corollary15_envelope(inv, N, half), {"N": N}, comps)


@dataclass(frozen=True)
class SynthFamily:
    members: tuple[FamilyMember, ...]
    basic_value: float
    equality: bool


def synth_family(targets: TVInvariants, schedule, tol: float = BASIC_TOL) -> SynthFamily:
    """Members with Phi_q = floor(phi_q g_i), repaired to satisfy Weil bounds.

    For function fields the repair caps f Phi_f at r^f + 1 + 2 g r^{f/2}.
    Closed-form targets are tabulated up to degree 12.
    """
    r = targets.r
    gs = list(schedule)
    if any(b <= a for a, b in zip(gs, gs[1:])) or not gs or gs[0] <= 0:
        raise InputError("genus schedule must be positive and strictly increasing")
    B = basic_inequality(targets)
    if B > 1 + tol:
        raise InfeasibleTargets(f"basic inequality value {B:.12g} exceeds 1")
    if targets.closed_form is not None:
        table = {r**f: targets.closed_form(f) for f in range(1, SYNTH_MAX_DEGREE + 1)}
    else:
        table = dict(targets.phi)
    members = []
    for i, g in enumerate(gs):
        phi = {}
        for q, v in sorted(table.items()):
            c = math.floor(v * g + 1e-9)
            if r is not None:
                f = _degree(q, r)
                cap = math.floor((r**f + 1 + 2 * g * r ** (f / 2)) / f)
                c = min(c, cap)
            if c:
                phi[q] = c
        extra = {}
        if r is None:
            extra = {
                "n": None,
                "r1": math.floor(targets.phi_R * g + 1e-9),
                "r2": math.floor(targets.phi_C * g + 1e-9),
            }
        members.append(FamilyMember(f"synth-{i}", float(g), phi, **extra))
    return SynthFamily(tuple(members), B, abs(B - 1) <= tol)


def geometric_tail(r: int, c: float, rate: float) -> TVInvariants:
    """Closed form with basic-inequality terms f phi_f/(r^{f/2}-1) = c r^{-rate f}."""

    lr = math.log(r)

    def phi(f: int) -> float:
        return c * math.exp((0.5 - rate) * f * lr) * -math.expm1(-f * lr / 2) / f

    return TVInvariants(r, closed_form=phi, description=f"geometric_tail(c={c!r}, rate={rate!r})")


def power_law(r: int, c: float, rate: float) -> TVInvariants:
    """Closed form phi_f = c r^{-rate f}."""

    def phi(f: int) -> float:
        return c * r ** (-rate * f)

    return TVInvariants(r, closed_form=phi, description=f"power_law(c={c!r}, rate={rate!r})")


def optimal_family(r: int) -> TVInvariants:
    """Equality in the basic inequality with terms r^{-f/2}(sqrt r - 1)."""
    return geometric_tail(r, math.sqrt(r) - 1, 0.5)


_CLOSED_FORMS = {"geometric_tail": geometric_tail, "power_law": power_law}


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family file: explicit members, or targets with a genus schedule."""

    r: int | None
    members: tuple[FamilyMember, ...] = ()
    targets: TVInvariants | None = None
    schedule: tuple[float, ...] = ()


def _norm_map(d, kind) -> dict:
    try:
        return {int(k): kind(v) for k, v in d.items()}
    except (AttributeError, TypeError, ValueError) as exc:
        raise InputError(f"bad norm table {d!r}") from exc


def family_from_dict(data: dict) -> FamilySpec:
    """``{"r": 4, "members": [{"g": 25, "phi": {"4": 25}}]}`` or with targets.

    Targets may be a norm table (``"targets": {"4": 1.0}``) or a closed
    form (``"closed_form": {"kind": "geometric_tail", "c": 1, "rate": 0.5}``)
    and come with a ``"schedule"`` of genera.
    """
    if not isinstance(data, dict):
        raise InputError("family file must hold a JSON object")
    r = data.get("r")
    r = int(r) if r is not None else None
    if "members" in data:
        members = []
        for i, m in enumerate(data["members"]):
            try:
                members.append(
                    FamilyMember(
                        str(m.get("label", f"m{i}")),
                        float(m["g"]),
                        _norm_map(m.get("phi", {}), int),
                        m.get("n"),
                        m.get("r1"),
                        m.get("r2"),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"bad family member {m!r}") from exc
        return FamilySpec(r, tuple(members))
    if "closed_form" in data:
        cf = dict(data["closed_form"])
        kind = cf.pop("kind", None)
        if kind not in _CLOSED_FORMS or r is None:
            raise InputError(f"unknown closed form {kind!r} (needs r)")
        try:
            targets = _CLOSED_FORMS[kind](r, float(cf["c"]), float(cf["rate"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad closed-form parameters {cf!r}") from exc
    elif "targets" in data:
        targets = TVInvariants(
            r,
            {int(k): float(v) for k, v in data["targets"].items()},
            float(data.get("phi_R", 0.0)),
            float(data.get("phi_C", 0.0)),
        )
    else:
        raise InputError("family file needs 'members', 'targets' or 'closed_form'")
    schedule = tuple(float(g) for g in data.get("schedule", ()))
    return FamilySpec(r, (), targets, schedule)


def load_family(path: str | Path) -> FamilySpec:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read family file {path}: {exc}") from exc
    return family_from_dict(data)
