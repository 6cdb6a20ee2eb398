"""Transformations: preimages, images, measure preservation, towers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergolab.dynamics import (A_SET, Doubling, KakutaniTower, Odometer,
                              Rotation, TOWER_EMPTY, TOWER_FULL, TowerSet,
                              discontinuity_set, make_system,
                              odometer_image, odometer_preimage,
                              tower_image, tower_measure, tower_preimage,
                              verify_measure_preserving)
from ergolab.errors import (InvalidTowerSetError,
                            RepresentationOverflowError)
from ergolab.intervals import (AT_ONE, AT_ZERO, EMPTY, FULL, ParityTail,
                               block_one, block_zero, IntervalSet, make_set)
from ergolab.scalars import GOLDEN, Scalar

F = Fraction


def dyadic_sets(depth=6, max_parts=4):
    den = 1 << depth
    endpoints = st.integers(min_value=0, max_value=den)

    def build(points):
        points = sorted(set(points))
        pairs = [(F(points[i], den), F(points[i + 1], den))
                 for i in range(0, len(points) - 1, 2)]
        return make_set(pairs)

    return st.lists(endpoints, min_size=0, max_size=2 * max_parts).map(build)


class TestRotation:
    def test_golden_is_ergodic_third_is_not(self):
        assert make_system("rotation:golden").ergodic
        assert not make_system("rotation:1/3").ergodic

    def test_preimage_is_shift_back(self):
        T = Rotation(Scalar(F(1, 4)))
        s = make_set([(F(1, 4), F(1, 2))])
        assert T.preimage(s).equals(make_set([(F(0), F(1, 4))]))
        assert T.image(T.preimage(s)).equals(s)

    @given(dyadic_sets())
    @settings(max_examples=60)
    def test_golden_preserves_measure(self, s):
        T = make_system("rotation:golden")
        assert T.preimage(s).measure() == s.measure()

    def test_irrational_endpoints_survive_round_trip(self):
        T = make_system("rotation:golden")
        s = make_set([(F(0), F(1, 4))])
        moved = T.preimage(T.preimage(s))
        assert T.image(T.image(moved)).equals(s)


class TestDoubling:
    def test_preimage_of_half(self):
        T = Doubling()
        s = make_set([(F(0), F(1, 2))])
        assert T.preimage(s).equals(
            make_set([(F(0), F(1, 4)), (F(1, 2), F(3, 4))]))

    def test_image_of_half(self):
        T = Doubling()
        assert T.image(make_set([(F(0), F(1, 2))])).equals(FULL)

    @given(dyadic_sets())
    @settings(max_examples=60)
    def test_preserves_measure(self, s):
        T = Doubling()
        assert T.preimage(s).measure() == s.measure()

    @given(dyadic_sets())
    @settings(max_examples=60)
    def test_preimage_then_image_restores(self, s):
        # T is onto, so T(T^-1(S)) = S even though T is not invertible
        T = Doubling()
        assert T.image(T.preimage(s)).equals(s)


class TestOdometer:
    def test_block_maps_to_mirror_block(self):
        for n in range(5):
            img = odometer_image(IntervalSet.build([block_one(n)]))
            assert img.equals(IntervalSet.build([block_zero(n)]))

    def test_column_set_image(self):
        assert odometer_image(A_SET).equals(
            make_set([], [ParityTail(AT_ZERO, 0, "even")]))

    def test_preimage_of_left_half_is_right_half(self):
        got = odometer_preimage(make_set([(F(0), F(1, 2))]))
        assert got.equals(make_set([(F(1, 2), F(1))]))

    def test_overflow_on_wrong_anchor_tail(self):
        with pytest.raises(RepresentationOverflowError):
            odometer_preimage(A_SET)
        with pytest.raises(RepresentationOverflowError):
            odometer_image(make_set([], [ParityTail(AT_ZERO, 0, "even")]))

    @given(dyadic_sets())
    @settings(max_examples=60)
    def test_preserves_measure(self, s):
        assert odometer_preimage(s).measure() == s.measure()

    @given(dyadic_sets())
    @settings(max_examples=60)
    def test_invertibility(self, s):
        assert odometer_image(odometer_preimage(s)).equals(s)

    def test_discontinuities_listing(self):
        got = [x.to_text() for x in Odometer().discontinuities(4)]
        assert got == ["0", "1/2", "3/4", "7/8", "15/16"]

    def test_discontinuity_set_helper(self):
        assert [x.to_text() for x in discontinuity_set("odometer", 2)] \
            == ["0", "1/2", "3/4"]


class TestTowerSets:
    def test_top_must_sit_over_column(self):
        # [1/2, 3/4) is the odd-index block I_1, not part of the column A
        with pytest.raises(InvalidTowerSetError):
            TowerSet(EMPTY, make_set([(F(1, 2), F(3, 4))]))

    def test_total_measure(self):
        assert tower_measure(TOWER_FULL) == Scalar(F(5, 3))
        assert tower_measure(TOWER_EMPTY) == Scalar(0)

    def test_boolean_algebra(self):
        a = TowerSet(make_set([(F(0), F(1, 2))]), EMPTY)
        b = TowerSet(make_set([(F(1, 4), F(3, 4))]), A_SET)
        assert a.union(b).measure() + a.intersect(b).measure() \
            == a.measure() + b.measure()
        assert a.complement().complement().equals(a)
        assert a.union(a.complement()).equals(TOWER_FULL)

    def test_serialization(self):
        s = TowerSet(make_set([(F(0), F(1, 4))]), A_SET)
        assert s.to_text() == "0..1/4 | tail(one, 0, even)"


class TestKakutaniTower:
    def test_preimage_preserves_total_measure(self):
        T = KakutaniTower()
        assert tower_measure(T.preimage(TOWER_FULL)) == Scalar(F(5, 3))

    def test_preimage_image_round_trip(self):
        T = KakutaniTower()
        s = TowerSet(make_set([(F(1, 4), F(1, 2))]), EMPTY)
        assert tower_image(tower_preimage(s)).equals(s)
        assert tower_preimage(tower_image(s)).equals(s)

    def test_top_falls_to_base(self):
        # points on the top storey move down into the column base
        s = TowerSet(EMPTY, A_SET)
        assert tower_preimage(s).equals(TowerSet(A_SET, EMPTY))

    @given(dyadic_sets())
    @settings(max_examples=40)
    def test_preserves_measure_on_bases(self, base):
        T = KakutaniTower()
        s = TowerSet(base, EMPTY)
        rep = verify_measure_preserving(T, s)
        assert rep.passed


class TestDescriptors:
    def test_round_trip(self):
        for d in ("rotation:golden", "rotation:1/3", "doubling",
                  "odometer", "kakutani"):
            assert make_system(d).descriptor() == d

    def test_unknown_rejected(self):
        with pytest.raises(ValueError):
            make_system("bakers-map")
