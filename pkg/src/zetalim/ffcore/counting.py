"""Exhaustive point counting over F_{r^n} and place-count extraction."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, InsufficientDepth, NegativeCount, NonIntegralInversion
from .curves import HYPERELLIPTIC, PLANE, PROJECTIVE_LINE, CurveModel
from .fields import embedding_logs, field

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 20


def default_budget() -> int:
    env = os.environ.get("ZETALIM_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class PointCounts:
    """N_n = #C(F_{r^n}) for n = 1..len(N)."""

    r: int
    N: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.N)

    def __getitem__(self, n: int) -> int:
        return self.N[n - 1]


@dataclass(frozen=True)
class PlaceCounts:
    """phi[f-1] = number of places of degree f (norm r^f)."""

    r: int
    phi: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.phi)

    def __getitem__(self, f: int) -> int:
        return self.phi[f - 1]

    def by_norm(self) -> dict[int, int]:
        return {self.r**f: c for f, c in enumerate(self.phi, 1)}

    def weil_ok(self, g: int) -> bool:
        return all(
            f * c <= self.r**f + 1 + 2 * g * self.r ** (f / 2) + 1e-9
            for f, c in enumerate(self.phi, 1)
        )


def mobius(n: int) -> int:
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _evaluations(curve: CurveModel, n: int) -> int:
    """Work of the enumeration; the line is charged as if it were enumerated."""
    q = curve.r**n
    if curve.kind == PLANE:
        return q * q + q + 1
    return q


def _count_hyperelliptic(curve: CurveModel, n: int) -> int:
    small = field(curve.base.p, curve.base.k)
    big = field(curve.base.p, curve.base.k * n)
    emb = embedding_logs(small, big)
    logs = [int(emb[c]) for c in curve.coeffs]  # little-endian
    lead = logs[-1]
    total = 0
    for s in range(0, big.q, _CHUNK):
        lx = big.all_logs(s, min(big.q, s + _CHUNK))
        ly = np.full_like(lx, lead)
        for lc in reversed(logs[:-1]):
            ly = big.ladd_const(big.lmul(ly, lx), lc)
        zeros = ly == big.ZERO
        squares = (ly % 2 == 0) & ~zeros
        total += int(np.count_nonzero(zeros)) + 2 * int(np.count_nonzero(squares))
    # total = sum over x of (1 + chi(f(x))) = #zeros + 2 * #nonzero squares
    if len(curve.coeffs) % 2 == 0:  # odd degree: one point at infinity
        return total + 1
    return total + (2 if lead % 2 == 0 else 0)


def _eval_plane(big, terms, lx, ly, lz):
    acc = np.full(np.broadcast(lx, ly).shape, big.ZERO, dtype=np.int64)
    for lc, i, j, k in terms:
        if lc == big.ZERO:
            continue
        t = big.lmul(big.lmul(big.lpow(lx, i), big.lpow(ly, j)), big.lpow(lz, k))
        t = big.lmul(t, np.int64(lc))
        acc = big.ladd(acc, t)
    return acc


def _count_plane(curve: CurveModel, n: int) -> int:
    small = field(curve.base.p, curve.base.k)
    big = field(curve.base.p, curve.base.k * n)
    emb = embedding_logs(small, big)
    terms = [(int(emb[c]), i, j, k) for c, i, j, k in curve.coeffs]
    q = big.q
    one = np.zeros(1, dtype=np.int64)
    zero = np.full(1, big.ZERO, dtype=np.int64)
    count = 0
    # affine chart Z = 1
    rows = max(1, _CHUNK // q)
    ys = big.all_logs()
    for s in range(0, q, rows):
        xs = big.all_logs(s, min(q, s + rows))
        vals = _eval_plane(big, terms, xs[:, None], ys[None, :], one)
        count += int(np.count_nonzero(vals == big.ZERO))
    # line at infinity: [x:1:0] and [1:0:0]
    vals = _eval_plane(big, terms, ys, one, zero)
    count += int(np.count_nonzero(vals == big.ZERO))
    vals = _eval_plane(big, terms, one, zero, zero)
    count += int(np.count_nonzero(vals == big.ZERO))
    return count


def count_points(curve: CurveModel, n: int, budget: int | None = None) -> int:
    """Number of F_{r^n}-rational points of the projective model."""
    if n < 1:
        raise ValueError("n must be positive")
    budget = default_budget() if budget is None else budget
    cost = _evaluations(curve, n)
    if cost > budget:
        raise BudgetExceeded(f"{curve.label}: {cost} evaluations over F_{curve.r}^{n} exceed budget {budget}")
    if curve.kind == PROJECTIVE_LINE:
        return curve.r**n + 1
    if curve.kind == HYPERELLIPTIC:
        return _count_hyperelliptic(curve, n)
    return _count_plane(curve, n)


def count_table(curve: CurveModel, B: int, budget: int | None = None) -> PointCounts:
    return PointCounts(curve.r, tuple(count_points(curve, n, budget) for n in range(1, B + 1)))


def places_from_counts(counts: PointCounts, depth: int | None = None) -> PlaceCounts:
    """f * Phi_f = sum_{d | f} mu(f/d) N_d."""
    depth = counts.depth if depth is None else depth
    if depth > counts.depth:
        raise InsufficientDepth(f"need counts to depth {depth}, have {counts.depth}")
    phi = []
    for f in range(1, depth + 1):
        s = sum(mobius(f // d) * counts[d] for d in divisors(f))
        if s % f:
            raise NonIntegralInversion(f"{f}*Phi_{counts.r}^{f} = {s} is not divisible by {f}")
        if s < 0:
            raise NegativeCount(f"Phi_{counts.r}^{f} = {s // f} < 0")
        phi.append(s // f)
    return PlaceCounts(counts.r, tuple(phi))


def counts_from_places(places: PlaceCounts) -> PointCounts:
    return PointCounts(
        places.r,
        tuple(sum(f * places[f] for f in divisors(n)) for n in range(1, places.depth + 1)),
    )
