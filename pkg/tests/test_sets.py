import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from poroweights import (
    CantorIterate,
    Cutoff,
    FinitePoints,
    GeometricPlusLattice,
    Interval,
    Lattice,
    PointCapExceeded,
    Reflect,
    SetFormatError,
    Translate,
    UnionSet,
    cutoff,
    distance,
    from_json,
    gaps,
    neighborhood_measure,
    reflect,
    set_distance,
    to_dict,
    to_json,
    translate,
)
from poroweights.sets import max_component_length, min_component_length


def comps(gl):
    return [(c.lo, c.hi) for c in gl.components]


class TestGaps:
    def test_lattice_window(self, integers):
        gl = gaps(integers, Interval(0.25, 2.25))
        assert comps(gl) == [(0.25, 1.0), (1.0, 2.0), (2.0, 2.25)]

    def test_point_free_window(self, singleton):
        gl = gaps(singleton, Interval(1.0, 2.0))
        assert comps(gl) == [(1.0, 2.0)]

    def test_geometric_branch(self, geometric_naturals):
        gl = gaps(geometric_naturals, Interval(-8.0, 0.0))
        assert comps(gl) == [(-8.0, -4.0), (-4.0, -2.0), (-2.0, 0.0)]

    def test_component_lengths_cover_window(self, integers):
        gl = gaps(integers, Interval(-3.3, 4.2))
        assert gl.total_length == pytest.approx(7.5, rel=1e-12)

    def test_touch_flags(self, integers):
        gl = gaps(integers, Interval(0.0, 2.5))
        assert not gl.left_touches and gl.right_touches

    def test_cap_is_enforced(self, integers):
        with pytest.raises(PointCapExceeded):
            gaps(integers, Interval(0.0, 2.0 ** 21), cap=10_000)


class TestDistance:
    def test_examples(self, integers, naturals, singleton):
        assert distance(integers, 0.3) == 0.3
        assert distance(naturals, -5.0) == 5.0
        assert distance(singleton, -2.0) == 2.0

    def test_zero_iff_member(self, integers):
        assert distance(integers, 7.0) == 0.0
        assert distance(integers, 7.0 + 2.0 ** -20) > 0.0

    @settings(max_examples=50, deadline=None)
    @given(
        x=st.floats(-50, 50),
        y=st.floats(-50, 50),
        step=st.floats(0.1, 3.0),
        origin=st.floats(-2.0, 2.0),
    )
    def test_lipschitz(self, x, y, step, origin):
        e = Lattice(origin, step, "two_sided")
        assert abs(distance(e, x) - distance(e, y)) <= abs(x - y) + 1e-12


class TestSetDistance:
    def test_examples(self, integers, naturals, singleton):
        assert set_distance(singleton, Interval(1.0, 2.0)) == 1.0
        assert set_distance(integers, Interval(0.25, 0.75)) == 0.25
        assert set_distance(naturals, Interval(-3.0, -1.0)) == 1.0

    def test_zero_when_closure_meets(self, integers):
        assert set_distance(integers, Interval(1.0, 1.5)) == 0.0
        assert set_distance(integers, Interval(0.5, 1.0)) == 0.0


class TestNeighborhoodMeasure:
    def test_single_point(self, singleton):
        assert neighborhood_measure(singleton, Interval(-1.0, 1.0), 0.5) == 1.0

    def test_overlapping_cover(self, integers):
        assert neighborhood_measure(integers, Interval(0.0, 1.0), 0.6) == 1.0

    def test_clipped_union(self, integers):
        # 9 interior points at 0.5 each, window-endpoint points clipped to 0.25
        assert neighborhood_measure(integers, Interval(0.0, 10.0), 0.25) == 5.0

    def test_monotone_and_capped(self, geometric_naturals):
        i = Interval(-10.0, 10.0)
        values = [neighborhood_measure(geometric_naturals, i, eps) for eps in (0.05, 0.1, 0.4, 1.0, 3.0)]
        assert values == sorted(values)
        assert all(v <= i.length for v in values)

    def test_saturates_beyond_half_largest_gap(self, integers):
        i = Interval(0.0, 6.0)
        assert neighborhood_measure(integers, i, 0.5 + 2.0 ** -30) == i.length

    def test_grid_indicator_oracle(self, integers, geometric_naturals, singleton):
        rnd = random.Random(4)
        for e in (integers, geometric_naturals, singleton):
            for _ in range(5):
                lo = rnd.uniform(-12, 4)
                i = Interval(lo, lo + rnd.uniform(1, 8))
                eps = rnd.uniform(0.05, 1.2)
                n = 10_000
                step = i.length / n
                hits = sum(
                    1 for k in range(n) if distance(e, i.lo + (k + 0.5) * step) < eps
                )
                approx = hits * step
                count = e.count_in(i.lo - eps, i.hi + eps)
                exact = neighborhood_measure(e, i, eps)
                assert abs(approx - exact) <= 4.0 * step * (count + 1)


class TestTransforms:
    def test_reflect_naturals(self, naturals):
        r = reflect(naturals)
        assert r.points_in(-3.0, 1.0) == [-3.0, -2.0, -1.0, 0.0]

    def test_cutoff_integers(self, integers):
        c = cutoff(integers, 0.0, "right")
        assert c.points_in(-5.0, 2.0) == [0.0, 1.0, 2.0]
        assert cutoff(integers, 0.0, "left").points_in(-2.0, 5.0) == [-2.0, -1.0, 0.0]

    def test_translate_point(self, singleton):
        assert translate(singleton, 3.0).points_in(0.0, 5.0) == [3.0]

    def test_reflect_gaps_mirror(self, geometric_naturals):
        i = Interval(-9.5, 3.25)
        left = gaps(geometric_naturals, i)
        right = gaps(reflect(geometric_naturals), i.reflected())
        mirrored = [(-c.hi, -c.lo) for c in reversed(right.components)]
        assert comps(left) == mirrored

    def test_double_reflection_unwraps(self, naturals):
        assert reflect(reflect(naturals)) is naturals

    def test_cutoff_can_be_empty(self, singleton):
        c = cutoff(singleton, 1.0, "right")
        assert c.is_empty()


class TestRunsConsistency:
    def test_runs_match_points(self, geometric_naturals):
        lo, hi = -40.0, 25.0
        from_runs = [p for r in geometric_naturals.runs_in(lo, hi) for p in r.points()]
        assert from_runs == geometric_naturals.points_in(lo, hi)

    def test_huge_window_stays_cheap(self, naturals):
        i = Interval(-(2.0 ** 20), 2.0 ** 20)
        assert max_component_length(naturals, i) == 2.0 ** 20
        assert naturals.count_in(i.lo, i.hi) == 2 ** 20 + 1

    def test_min_component_length(self, integers):
        assert min_component_length(integers, Interval(-8.0, 8.0)) == 1.0


class TestGapSumProperty:
    @settings(max_examples=50, deadline=None)
    @given(
        origin=st.floats(-3.0, 3.0),
        step=st.floats(0.05, 2.5),
        lo=st.floats(-30.0, 20.0),
        length=st.floats(0.5, 35.0),
    )
    def test_lattice_gap_sum(self, origin, step, lo, length):
        e = Lattice(origin, step, "two_sided")
        i = Interval(lo, lo + length)
        gl = gaps(e, i)
        assert gl.total_length == pytest.approx(i.length, rel=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(
        pts=st.lists(st.floats(-20, 20), min_size=1, max_size=12),
        lo=st.floats(-25.0, 15.0),
        length=st.floats(0.5, 30.0),
    )
    def test_finite_gap_sum(self, pts, lo, length):
        e = FinitePoints(pts)
        i = Interval(lo, lo + length)
        gl = gaps(e, i)
        assert gl.total_length == pytest.approx(i.length, rel=1e-12)


class TestSerialization:
    def variants(self):
        return [
            FinitePoints([-1.5, 0.0, 2.25]),
            Lattice(0.0, 1.0, "two_sided"),
            Lattice(0.5, 0.25, "right"),
            GeometricPlusLattice(2.0, Lattice(0.0, 1.0, "right")),
            CantorIterate(0.0, 1.0, 1.0 / 3.0, 6),
            UnionSet([Lattice(0.0, 1.0, "two_sided"), FinitePoints([0.5])]),
            Translate(FinitePoints([0.0]), 2.5),
            Reflect(Lattice(0.0, 1.0, "right")),
            Cutoff(Lattice(0.0, 1.0, "two_sided"), 0.0, "right"),
        ]

    def test_round_trip(self):
        for e in self.variants():
            assert to_dict(from_json(to_json(e))) == to_dict(e)

    def test_kind_tags(self):
        kinds = {to_dict(e)["kind"] for e in self.variants()}
        assert kinds == {
            "finite",
            "lattice",
            "geometric_lattice",
            "cantor",
            "union",
            "translate",
            "reflect",
            "cutoff",
        }

    def test_malformed_json(self):
        with pytest.raises(SetFormatError, match="line 1"):
            from_json("{not json")

    def test_missing_field_has_path(self):
        with pytest.raises(SetFormatError, match=r"\$: missing field 'step'"):
            from_json(json.dumps({"kind": "lattice", "origin": 0.0}))

    def test_nested_path_in_error(self):
        doc = {"kind": "union", "members": [{"kind": "lattice", "origin": 0.0}]}
        with pytest.raises(SetFormatError, match=r"members\[0\]"):
            from_json(json.dumps(doc))

    def test_bad_values_rejected(self):
        with pytest.raises(SetFormatError):
            from_json(json.dumps({"kind": "lattice", "origin": 0.0, "step": -1.0}))
        with pytest.raises(SetFormatError):
            from_json(json.dumps({"kind": "cantor", "lo": 0, "hi": 1, "middle": 2.0, "depth": 3}))
        with pytest.raises(SetFormatError, match="unknown kind"):
            from_json(json.dumps({"kind": "mystery"}))


class TestValidation:
    def test_lattice_needs_positive_step(self):
        with pytest.raises(ValueError):
            Lattice(0.0, 0.0, "two_sided")

    def test_geometric_ratio(self):
        with pytest.raises(ValueError):
            GeometricPlusLattice(1.0, Lattice(0.0, 1.0, "right"))

    def test_interval_orientation(self):
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)

    def test_cantor_depth_limit(self):
        with pytest.raises(ValueError):
            CantorIterate(0.0, 1.0, 0.5, 40)

    def test_finite_points_nonempty(self):
        with pytest.raises(ValueError):
            FinitePoints([])
