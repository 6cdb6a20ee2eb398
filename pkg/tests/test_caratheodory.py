"""Density searches, the theta gap, reduction probes, mixing diagnostics."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergolab.caratheodory import (arcs_basis, correlation_average,
                                  density_pair, density_search, dyadic_basis,
                                  gap_theta, invariance_check, mixing_trace,
                                  reduction_check)
from ergolab.dynamics import Doubling, Odometer, Rotation, make_system
from ergolab.fixtures import RATIONAL_THIRD_INVARIANT
from ergolab.intervals import FULL, make_set
from ergolab.scalars import GOLDEN, ONE, Scalar

F = Fraction


def dyadic_sets(depth=5, max_parts=3):
    den = 1 << depth
    endpoints = st.integers(min_value=0, max_value=den)

    def build(points):
        points = sorted(set(points))
        pairs = [(F(points[i], den), F(points[i + 1], den))
                 for i in range(0, len(points) - 1, 2)]
        return make_set(pairs)

    return st.lists(endpoints, min_size=2, max_size=2 * max_parts).map(build)


class TestBases:
    def test_dyadic_enumeration_order(self):
        cells = list(dyadic_basis(1).elements())
        assert [c.to_text() for c in cells] == ["0..1", "0..1/2", "1/2..1"]

    def test_arcs_enumeration_counts(self):
        # denominators 1..3 give 1 + 3 + 6 intervals
        assert len(list(arcs_basis(3).elements())) == 10

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            dyadic_basis(-1)
        with pytest.raises(ValueError):
            arcs_basis(0)


class TestDensity:
    def test_finds_full_density_window(self):
        S = make_set([(F(0), F(1, 3))])
        J = density_search(S, Scalar(F(1, 10)), dyadic_basis(6))
        assert S.intersect(J).measure() > (ONE - Scalar(F(1, 10))) * J.measure()

    def test_strict_inequality_can_exhaust(self):
        # a set of density exactly 1/2 everywhere at dyadic scale
        S = make_set([(F(k, 8), F(2 * k + 1, 16)) for k in range(8)])
        assert density_search(S, Scalar(F(1, 2)), dyadic_basis(2)) is None

    def test_pair_has_equal_measures(self):
        A1 = make_set([(F(0), F(1, 4))])
        A2 = make_set([(F(5, 8), F(1))])
        J1, J2 = density_pair(A1, A2, Scalar(F(1, 8)), dyadic_basis(6))
        assert J1 is not None and J2 is not None
        assert J1.measure() == J2.measure()

    def test_positive_measure_required(self):
        with pytest.raises(ValueError):
            density_search(make_set([]), Scalar(F(1, 10)), dyadic_basis(3))


class TestGapTheta:
    def test_theta_is_one_on_measurable_sets(self):
        B = make_set([(F(0), F(1, 2))])
        for J in dyadic_basis(3).elements():
            rep = gap_theta(B, J)
            assert rep.theta == ONE and rep.caratheodory_equality

    def test_parts_sum_to_window(self):
        B = make_set([(F(1, 5), F(2, 3))])
        J = make_set([(F(1, 4), F(3, 4))])
        rep = gap_theta(B, J)
        assert rep.part_in + rep.part_out == J.measure()

    @given(dyadic_sets(), st.integers(min_value=0, max_value=7))
    @settings(max_examples=60)
    def test_theta_random(self, B, k):
        J = make_set([(F(k, 8), F(k + 1, 8))])
        assert gap_theta(B, J).theta == ONE


class TestInvariance:
    def test_full_and_empty_invariant(self):
        for d in ("rotation:golden", "doubling", "odometer"):
            T = make_system(d)
            assert invariance_check(T, T.full_set()).passed
            assert invariance_check(T, T.empty_set()).passed

    def test_third_rotation_invariant_set(self):
        T = Rotation(Scalar(F(1, 3)))
        assert invariance_check(T, RATIONAL_THIRD_INVARIANT).passed
        assert not invariance_check(T, make_set([(F(0), F(1, 6))])).passed


class TestReduction:
    def test_invariant_mode_passes(self):
        T = Rotation(Scalar(F(1, 3)))
        rep = reduction_check(T, RATIONAL_THIRD_INVARIANT, dyadic_basis(3),
                              sample=4, epsilon=Scalar(F(1, 100)),
                              n_max=40, stall_window=30)
        assert rep.note == "invariant"
        assert rep.passed

    def test_diagnostic_mode_for_non_invariant(self):
        T = Doubling()
        rep = reduction_check(T, make_set([(F(0), F(1, 3))]), dyadic_basis(2),
                              sample=2, epsilon=Scalar(F(1, 16)), n_max=10,
                              component_budget=1 << 12)
        assert rep.note == "diagnostic"


class TestMixing:
    def test_doubling_trace_identically_zero(self):
        C = make_set([(F(0), F(1, 2))])
        trace = mixing_trace(Doubling(), C, C, 8)
        assert all(x.sign() == 0 for x in trace)

    def test_doubling_average_is_product(self):
        C = make_set([(F(0), F(1, 2))])
        avg = correlation_average(Doubling(), C, C, 8)
        assert avg == Scalar(F(1, 4))

    def test_odometer_period_two_correlation(self):
        # psi^-1 swaps [0,1/2) and [1/2,1), so the correlation alternates
        # 0, 1/2 and every even-length average is exactly 1/4
        C = make_set([(F(0), F(1, 2))])
        assert correlation_average(Odometer(), C, C, 2) == Scalar(F(1, 4))
        assert correlation_average(Odometer(), C, C, 3) == Scalar(F(1, 6))

    def test_odometer_trace_does_not_vanish(self):
        C = make_set([(F(0), F(1, 2))])
        trace = mixing_trace(Odometer(), C, C, 8)
        assert any(x.sign() != 0 for x in trace)

    def test_full_set_trivial_correlation(self):
        trace = mixing_trace(Doubling(), FULL, FULL, 4)
        assert all(x.sign() == 0 for x in trace)
