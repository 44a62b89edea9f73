import itertools
import json

import pytest

from zetalim.errors import BadModel, BudgetExceeded, InputError, NonIntegralInversion
from zetalim.ffcore import (
    PointCounts,
    count_points,
    count_table,
    counts_from_places,
    curve_from_dict,
    curve_to_dict,
    field,
    hyperelliptic,
    load_curve,
    mobius,
    places_from_counts,
    plane,
    projective_line,
)
from zetalim.ffcore.fields import primitive_polynomial

# y^2 = x^3 + x + 1 over F_3
E3 = hyperelliptic(3, [1, 1, 0, 1])


class F9:
    """F_3[i]/(i^2 + 1), arithmetic on pairs; independent of the package."""

    elems = [(a, b) for a in range(3) for b in range(3)]

    @staticmethod
    def add(u, v):
        return ((u[0] + v[0]) % 3, (u[1] + v[1]) % 3)

    @staticmethod
    def mul(u, v):
        return ((u[0] * v[0] - u[1] * v[1]) % 3, (u[0] * v[1] + u[1] * v[0]) % 3)

    @classmethod
    def frob(cls, u):
        return cls.mul(cls.mul(u, u), u)


def _f_e3(x, add, mul, one):
    return add(add(mul(mul(x, x), x), x), one)


def test_p1_counts():
    assert count_points(projective_line(2), 1) == 3
    assert count_points(projective_line(3), 2) == 10
    assert count_table(projective_line(2), 3).N == (3, 5, 9)


def test_e3_one_point_oracle():
    affine = sum(1 for x in range(3) for y in range(3) if (y * y - (x**3 + x + 1)) % 3 == 0)
    assert count_points(E3, 1) == affine + 1 == 4


def test_e3_quadratic_extension_oracle():
    one = (1, 0)
    affine = sum(
        1
        for x in F9.elems
        for y in F9.elems
        if F9.mul(y, y) == _f_e3(x, F9.add, F9.mul, one)
    )
    assert count_points(E3, 2) == affine + 1


def test_e3_table_and_genus_one_relation():
    counts = count_table(E3, 4)
    assert counts.N == (4, 16, 28, 64)
    a = 3 + 1 - counts[1]
    assert counts[2] == 9 + 1 - (a * a - 2 * 3)


def test_e3_places_by_orbit_counting():
    one = (1, 0)
    pts = {(x, y) for x in F9.elems for y in F9.elems if F9.mul(y, y) == _f_e3(x, F9.add, F9.mul, one)}
    rational = {p for p in pts if F9.frob(p[0]) == p[0] and F9.frob(p[1]) == p[1]}
    orbits = {frozenset({p, (F9.frob(p[0]), F9.frob(p[1]))}) for p in pts - rational}
    places = places_from_counts(count_table(E3, 2))
    assert places[1] == len(rational) + 1
    assert places[2] == len(orbits)


def test_places_of_p1():
    places = places_from_counts(PointCounts(2, (3, 5)))
    assert places.phi == (3, 1)


def test_parity_obstruction():
    with pytest.raises(NonIntegralInversion):
        places_from_counts(PointCounts(2, (3, 4)))


def test_weil_bound_and_round_trip():
    counts = count_table(E3, 6)
    places = places_from_counts(counts)
    assert places.weil_ok(1)
    assert counts_from_places(places) == counts


def test_not_squarefree():
    with pytest.raises(BadModel):
        hyperelliptic(3, [1, 2, 1])  # (x+1)^2


def test_budget():
    with pytest.raises(BudgetExceeded):
        count_points(E3, 12, budget=10**4)
    with pytest.raises(BudgetExceeded):
        count_points(projective_line(2), 30, budget=10**6)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("ZETALIM_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        count_points(E3, 5)


def test_mobius_values():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_field_arithmetic_axioms():
    F = field(3, 3)
    for a, b in itertools.product(range(1, F.q), repeat=2):
        assert F.mul(F.mul(a, b), F.inv(b)) == a
    for a in range(F.q):
        assert F.add(a, F.neg(a)) == 0


def test_primitive_polynomial_deterministic():
    assert primitive_polynomial(3, 2) == primitive_polynomial(3, 2)


def test_extension_base_field():
    # y^2 = x^3 - x over F_9 is supersingular: N_1 = 9 + 1 + 6 or 9 + 1 - 6
    c = hyperelliptic(3, [0, 2, 0, 1], k=2)
    assert count_points(c, 1) in (4, 16)


def test_plane_klein_quartic():
    klein = plane(2, [(1, 3, 1, 0), (1, 0, 3, 1), (1, 1, 0, 3)])
    assert klein.genus == 3
    assert count_table(klein, 3).N == (3, 5, 24)


def test_plane_validation():
    with pytest.raises(BadModel):
        plane(2, [(1, 3, 0, 0), (1, 0, 1, 0)])


def test_curve_json_round_trip(tmp_path):
    d = {"field": {"p": 3, "k": 1}, "model": {"type": "hyperelliptic", "f": [1, 1, 0, 1]}}
    c = curve_from_dict(d)
    assert c == E3
    again = curve_from_dict(json.loads(json.dumps(curve_to_dict(c))))
    assert again == c
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(InputError):
        load_curve(path)
