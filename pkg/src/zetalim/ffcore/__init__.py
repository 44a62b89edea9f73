"""Finite fields, curve models, point counts and place counts."""

from .counting import (
    DEFAULT_BUDGET,
    PlaceCounts,
    PointCounts,
    count_points,
    count_table,
    counts_from_places,
    default_budget,
    divisors,
    mobius,
    places_from_counts,
)
from .curves import (
    CurveModel,
    curve_from_dict,
    curve_to_dict,
    hyperelliptic,
    load_corpus,
    load_curve,
    plane,
    projective_line,
)
from .fields import GF, FiniteFieldSpec, field, is_prime, primitive_polynomial

__all__ = [
    "DEFAULT_BUDGET", "PlaceCounts", "PointCounts", "count_points", "count_table",
    "counts_from_places", "default_budget", "divisors", "mobius", "places_from_counts",
    "CurveModel", "curve_from_dict", "curve_to_dict", "hyperelliptic", "load_corpus",
    "load_curve", "plane", "projective_line", "GF", "FiniteFieldSpec", "field",
    "is_prime", "primitive_polynomial",
]
