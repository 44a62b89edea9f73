"""Seeded curve corpora and the counts -> L-polynomial -> roots pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadModel
from .ffcore import (
    CurveModel,
    PlaceCounts,
    PointCounts,
    count_table,
    hyperelliptic,
    places_from_counts,
    plane,
    projective_line,
)
from .lfunc import InverseRoots, LPolynomial, counts_from_lpoly, lpoly_from_counts, roots

# genus schedule of the default corpus; F_5 counts at genus 10 enumerate
# about 10^7 points each, so that row is kept short
DEFAULT_SCHEDULE = {3: {g: 2 for g in range(1, 11)}, 5: {**{g: 2 for g in range(1, 9)}, 9: 1, 10: 1}}


def random_hyperelliptic(p: int, genus: int, rng: np.random.Generator, label: str = "") -> CurveModel:
    """y^2 = f(x) with f random squarefree of degree 2g+1 or 2g+2 over F_p."""
    while True:
        deg = 2 * genus + 1 + int(rng.integers(0, 2))
        f = [int(c) for c in rng.integers(0, p, size=deg)] + [int(rng.integers(1, p))]
        try:
            return hyperelliptic(p, f, genus=genus, label=label)
        except BadModel:
            continue


def default_corpus(seed: int = 0, schedule: dict | None = None) -> list[CurveModel]:
    """Random squarefree hyperelliptic curves over F_3 and F_5, genus 1..10."""
    rng = np.random.default_rng(seed)
    out = []
    for p, by_genus in sorted((schedule or DEFAULT_SCHEDULE).items()):
        for g, n in sorted(by_genus.items()):
            for i in range(n):
                out.append(random_hyperelliptic(p, g, rng, f"F{p}-g{g}-{i}"))
    return out


def small_corpus(seed: int = 0, max_genus: int = 5) -> list[CurveModel]:
    """A quick corpus: one random curve per genus over F_3 and F_5."""
    schedule = {p: {g: 1 for g in range(1, max_genus + 1)} for p in (3, 5)}
    return default_corpus(seed, schedule)


def binary_corpus() -> list[CurveModel]:
    """Curves over F_2: the line, four elliptic curves and the Klein quartic."""
    return [
        projective_line(2),
        # y^2 z + y z^2 = x^3
        plane(2, [(1, 0, 2, 1), (1, 0, 1, 2), (1, 3, 0, 0)], label="E1/F2"),
        # y^2 z + y z^2 = x^3 + x z^2
        plane(2, [(1, 0, 2, 1), (1, 0, 1, 2), (1, 3, 0, 0), (1, 1, 0, 2)], label="E2/F2"),
        # y^2 z + x y z = x^3 + z^3
        plane(2, [(1, 0, 2, 1), (1, 1, 1, 1), (1, 3, 0, 0), (1, 0, 0, 3)], label="E3/F2"),
        # y^2 z + x y z = x^3 + x^2 z + z^3
        plane(2, [(1, 0, 2, 1), (1, 1, 1, 1), (1, 3, 0, 0), (1, 2, 0, 1), (1, 0, 0, 3)], label="E4/F2"),
        # x^3 y + y^3 z + z^3 x = 0
        plane(2, [(1, 3, 1, 0), (1, 0, 3, 1), (1, 1, 0, 3)], label="Klein/F2"),
    ]


@dataclass
class CurveData:
    """Exhaustive counts to depth g, then everything else from the L-polynomial."""

    curve: CurveModel
    budget: int | None = None
    precision_bits: int | None = None

    @cached_property
    def base_counts(self) -> PointCounts:
        return count_table(self.curve, max(self.curve.genus, 1), self.budget)

    @cached_property
    def lpoly(self) -> LPolynomial:
        return lpoly_from_counts(self.base_counts, self.curve.r, self.curve.genus)

    @cached_property
    def inverse_roots(self) -> InverseRoots:
        return roots(self.lpoly, precision_bits=self.precision_bits)

    def counts(self, depth: int) -> PointCounts:
        return counts_from_lpoly(self.lpoly, depth)

    def places(self, depth: int) -> PlaceCounts:
        return places_from_counts(self.counts(depth), depth)
