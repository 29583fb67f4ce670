"""Point counting, enumeration, box scans, and the pruned outside-search."""

from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from latmin import (Box, Ellipsoid, GaugeValue, HPolytope, Lattice, Matrix,
                    count_oracle, count_points, enclosing_radius,
                    enumerate_points)
from latmin.enumeration import (axis_extent_bounds, axis_radii,
                                integer_gauge_key, min_key_point_outside)

from strategies import bodies, instances, lattices

F = Fraction
STD2 = Lattice.standard(2)
UNIT_BOX = Box((F(1), F(1)))
BOX13 = Box((F(1), F(3)))
ROTATED_SQUARE = HPolytope(Matrix.from_rows([[1, 1], [1, -1]]))
UNIT_DISK = Ellipsoid(Matrix.identity(2))
SKEW = Lattice(Matrix.from_rows([[1, 1], [0, 2]]))


def small_instances():
    return instances(max_dim=3, small=True)


class TestCountExamples:
    def test_boxes(self):
        assert count_points(UNIT_BOX, STD2, 1) == 9
        assert count_points(UNIT_BOX, STD2, 1, strict=True) == 1
        assert count_points(BOX13, STD2, 1) == 21
        assert count_points(BOX13, STD2, 2) == 65
        assert count_points(BOX13, STD2, F(1, 2)) == 3

    def test_polytopes(self):
        assert count_points(ROTATED_SQUARE, STD2, 1) == 5
        assert count_points(ROTATED_SQUARE, STD2, 1, strict=True) == 1

    def test_ellipsoids(self):
        assert count_points(UNIT_DISK, STD2, 1) == 5
        assert count_points(UNIT_DISK, STD2, 2) == 13
        assert count_points(UNIT_DISK, STD2, GaugeValue.sqrt_of(2)) == 9
        assert count_points(UNIT_DISK, STD2, GaugeValue.sqrt_of(2),
                            strict=True) == 5

    def test_sqrt_dilation_of_polyhedra(self):
        mu = GaugeValue.sqrt_of(2)
        assert count_points(UNIT_BOX, STD2, mu) == 9
        assert count_points(ROTATED_SQUARE, STD2, mu) == 5
        assert count_points(ROTATED_SQUARE, STD2, mu, strict=True) == 5

    def test_zero_dilation(self):
        assert count_points(UNIT_BOX, STD2, 0) == 1
        assert count_points(UNIT_BOX, STD2, 0, strict=True) == 0

    def test_nonstandard_lattice(self):
        # Lattice generated by (1,0) and (1,2): box(1,3) catches y in
        # {-2,0,2}, each paired with three x values.
        assert count_points(BOX13, SKEW, 1) == 9


class TestEnumerate:
    def test_matches_count_and_is_sorted(self):
        pts = enumerate_points(BOX13, STD2, 1)
        assert len(pts) == 21
        assert list(pts) == sorted(pts)
        assert pts.dim == 2

    def test_zero_dilation(self):
        assert tuple(enumerate_points(UNIT_BOX, STD2, 0)) == ((0, 0),)
        assert len(enumerate_points(UNIT_BOX, STD2, 0, strict=True)) == 0

    def test_ambient_applies_basis(self):
        pts = enumerate_points(BOX13, SKEW, 1)
        assert set(pts.ambient()) == {
            tuple(map(F, (a + b, 2 * b)))
            for a, b in pts}

    @given(small_instances(), st.sampled_from(
        [F(1), F(1, 2), F(3, 2), GaugeValue.sqrt_of(2)]),
        st.booleans())
    def test_enumerate_agrees_with_count(self, inst, mu, strict):
        body, lattice = inst
        pts = enumerate_points(body, lattice, mu, strict=strict)
        assert len(pts) == count_points(body, lattice, mu, strict=strict)
        assert list(pts) == sorted(set(pts))

    @given(small_instances())
    def test_every_point_passes_the_gauge_test(self, inst):
        body, lattice = inst
        for p in enumerate_points(body, lattice, 1):
            assert body.gauge(lattice.point(p)) <= 1


class TestCountProperties:
    @given(small_instances(), st.sampled_from(
        [F(1), F(2, 3), GaugeValue.sqrt_of(F(3, 2))]), st.booleans())
    def test_matches_definition_level_oracle(self, inst, mu, strict):
        body, lattice = inst
        radius = enclosing_radius(body, lattice, mu)
        assert count_points(body, lattice, mu, strict=strict) == \
            count_oracle(body, lattice, mu, radius, strict=strict)

    @given(small_instances(), st.booleans())
    def test_count_is_odd_by_symmetry(self, inst, strict):
        body, lattice = inst
        assert count_points(body, lattice, 1, strict=strict) % 2 == 1

    @given(small_instances())
    def test_monotone_in_dilation(self, inst):
        body, lattice = inst
        counts = [count_points(body, lattice, mu)
                  for mu in (F(1, 2), 1, F(3, 2), 2)]
        assert counts == sorted(counts)
        assert count_points(body, lattice, 1, strict=True) <= counts[1]

    @given(small_instances(), st.data())
    def test_invariant_under_unimodular_basis_change(self, inst, data):
        body, lattice = inst
        dim = body.dim
        u = [[int(i == j) for j in range(dim)] for i in range(dim)]
        for _ in range(dim):
            i = data.draw(st.integers(0, dim - 1))
            j = data.draw(st.integers(0, dim - 1))
            if i != j:
                u[i] = [a + b for a, b in zip(u[i], u[j])]
        changed = Lattice(lattice.basis @ Matrix.from_rows(u))
        assert count_points(body, changed, 1) == \
            count_points(body, lattice, 1)

    @given(small_instances(), st.sampled_from([F(1, 2), F(2), F(3)]))
    def test_scaling_body_equals_dilating(self, inst, c):
        body, lattice = inst
        assert count_points(body.scale(c), lattice, 1) == \
            count_points(body, lattice, c)


class TestExtentHelpers:
    def test_examples(self):
        assert axis_extent_bounds(BOX13, STD2) == (1, 3)
        assert axis_radii(BOX13, STD2, 2) == (2, 6)
        assert enclosing_radius(BOX13, STD2, 1) == 3
        assert axis_extent_bounds(UNIT_DISK, STD2) == (1, 1)

    @given(small_instances())
    def test_extents_cover_all_points(self, inst):
        body, lattice = inst
        radii = axis_radii(body, lattice, 1)
        radius = enclosing_radius(body, lattice, 1)
        for p in enumerate_points(body, lattice, 1):
            assert all(abs(c) <= r for c, r in zip(p, radii))
            assert all(abs(c) <= radius for c in p)


class TestIntegerGaugeKey:
    @given(st.integers(1, 3).flatmap(lambda d: bodies(d, small=True)),
           st.data())
    def test_key_orders_exactly_like_the_gauge(self, body, data):
        key, to_gauge, threshold = integer_gauge_key(body)
        xs = [data.draw(st.tuples(*[st.integers(-4, 4)] * body.dim))
              for _ in range(3)]
        for x in xs:
            for mu in (1, 2):
                assert (key(x) <= threshold(mu)) == (body.gauge(x) <= mu)
        for a, b in zip(xs, xs[1:]):
            assert (key(a) < key(b)) == (body.gauge(a) < body.gauge(b))

    @given(st.integers(1, 3).flatmap(lambda d: bodies(d, small=True)),
           st.data())
    def test_key_converts_back_to_the_exact_gauge(self, body, data):
        key, to_gauge, threshold = integer_gauge_key(body)
        x = data.draw(st.tuples(*[st.integers(-4, 4)] * body.dim))
        assert to_gauge(key(x)) == body.gauge(x)


def _brute_outside(zbody, flat, mu):
    """Reference for the pruned search: enumerate, filter, sort."""
    std = Lattice.standard(zbody.dim)
    pts = [p for p in enumerate_points(zbody, std, mu) if any(p[:flat])]
    if not pts:
        return None

    def canon(p):
        for v in p:
            if v:
                return p if v > 0 else tuple(-x for x in p)
        return p

    best = min({canon(p) for p in pts},
               key=lambda p: (zbody.gauge(p),
                              tuple(abs(c) for c in reversed(p)), p))
    return zbody.gauge(best), best


class TestMinKeyPointOutside:
    def _identity_rows(self, dim):
        return tuple(tuple(int(i == j) for j in range(dim))
                     for i in range(dim))

    def test_validation(self):
        rows = self._identity_rows(2)
        with pytest.raises(ValueError):
            min_key_point_outside(UNIT_BOX, 0, 1, rows)
        with pytest.raises(ValueError):
            min_key_point_outside(UNIT_BOX, 3, 1, rows)
        with pytest.raises(ValueError):
            min_key_point_outside(UNIT_BOX, 1, 0, rows)

    def test_examples(self):
        rows = self._identity_rows(2)
        assert min_key_point_outside(UNIT_BOX, 2, 1, rows) == \
            (GaugeValue.rational(1), (1, 0))
        assert min_key_point_outside(BOX13, 2, 1, rows) == \
            (GaugeValue.rational(F(1, 3)), (0, 1))
        # Requiring support on the first coordinate skips (0, 1).
        assert min_key_point_outside(BOX13, 1, 1, rows) == \
            (GaugeValue.rational(1), (1, 0))
        assert min_key_point_outside(Box((F(1, 3),)), 1, 1, ((1,),)) is None
        assert min_key_point_outside(Box((F(1, 3),)), 1, 4, ((1,),)) == \
            (GaugeValue.rational(3), (1,))

    @settings(max_examples=60)
    @given(st.integers(1, 3).flatmap(lambda d: bodies(d, small=True)),
           st.data())
    def test_agrees_with_enumeration(self, zbody, data):
        dim = zbody.dim
        flat = data.draw(st.integers(1, dim))
        mu = data.draw(st.integers(1, 2))
        got = min_key_point_outside(zbody, flat, mu,
                                    self._identity_rows(dim))
        assert got == _brute_outside(zbody, flat, mu)
