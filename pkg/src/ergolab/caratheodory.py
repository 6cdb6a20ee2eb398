"""Measure bases, density searches, the theta gap, and mixing diagnostics.

Outer measure on arbitrary sets is out of computational reach; every
quantity here is evaluated on representable (hence measurable) sets, where
outer measure equals measure.  Reports carry that restriction notice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .dynamics import SetLike, Transformation
from .intervals import FULL, Interval, IntervalSet
from .scalars import ONE, Scalar, render
from .splinter import (CONVERGED, CheckReport, DEFAULT_COMPONENT_BUDGET,
                       splinter, transport_check)

RESTRICTION_NOTICE = ("outer measure evaluated as measure on representable "
                      "(measurable) sets, where the two agree")


class MeasureBasis:
    """Enumerable family of positive-measure intervals used as probes.

    Dyadic: all intervals [k 2^-d, (k+1) 2^-d) by increasing depth d then
    left to right.  Arcs: intervals with rational endpoints of bounded
    denominator, by increasing denominator then lexicographic endpoints.
    """

    def __init__(self, kind: str, bound: int):
        if kind not in ("dyadic", "arcs"):
            raise ValueError(f"unknown basis kind {kind!r}")
        if bound < 0 or (kind == "arcs" and bound < 1):
            raise ValueError("basis bound out of range")
        self.kind = kind
        self.bound = bound  # depth_max for dyadic, denominator_max for arcs

    def levels(self) -> Iterator[int]:
        if self.kind == "dyadic":
            return iter(range(self.bound + 1))
        return iter(range(1, self.bound + 1))

    def elements_at(self, level: int) -> Iterator[IntervalSet]:
        if self.kind == "dyadic":
            den = 1 << level
            for k in range(den):
                yield _cell(k, den)
        else:
            for a in range(level):
                for b in range(a + 1, level + 1):
                    yield _cell_frac(Fraction(a, level), Fraction(b, level))

    def elements(self) -> Iterator[IntervalSet]:
        for level in self.levels():
            yield from self.elements_at(level)

    def descriptor(self) -> str:
        return f"{self.kind}:{self.bound}"


def _cell(k: int, den: int) -> IntervalSet:
    return IntervalSet((Interval(Scalar(Fraction(k, den)),
                                 Scalar(Fraction(k + 1, den))),))


def _cell_frac(a: Fraction, b: Fraction) -> IntervalSet:
    return IntervalSet((Interval(Scalar(a), Scalar(b)),))


def dyadic_basis(depth_max: int) -> MeasureBasis:
    return MeasureBasis("dyadic", depth_max)


def arcs_basis(denominator_max: int) -> MeasureBasis:
    return MeasureBasis("arcs", denominator_max)


# ---------------------------------------------------------------------
# density
# ---------------------------------------------------------------------

def density_search(S: IntervalSet, epsilon: Scalar,
                   basis: MeasureBasis) -> Optional[IntervalSet]:
    """First basis element J with mu(S n J) > (1 - eps) mu(J), exactly.

    The inequality is strict; returns None when the basis is exhausted.
    """
    if not (Scalar(0) < epsilon < ONE):
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if S.measure().sign() <= 0:
        raise ValueError("set must have positive measure")
    one_minus = ONE - epsilon
    for J in basis.elements():
        if S.intersect(J).measure() > one_minus * J.measure():
            return J
    return None


def density_pair(A1: IntervalSet, A2: IntervalSet, epsilon: Scalar,
                 basis: MeasureBasis):
    """Equal-measure basis elements that are dense windows for A1 and A2.

    Searches level by level so the two returned elements always have
    exactly equal measure.  Returns (J1, J2), or (partial1, partial2) with
    one or both None when the depth bound is exhausted.
    """
    if A1.measure().sign() <= 0 or A2.measure().sign() <= 0:
        raise ValueError("both sets must have positive measure")
    one_minus = ONE - epsilon
    best1 = best2 = None
    for level in basis.levels():
        found1: list[IntervalSet] = []
        found2: list[IntervalSet] = []
        for J in basis.elements_at(level):
            mu = J.measure()
            if A1.intersect(J).measure() > one_minus * mu:
                found1.append(J)
            if A2.intersect(J).measure() > one_minus * mu:
                found2.append(J)
        for J1 in found1:
            for J2 in found2:
                if J1.measure() == J2.measure():
                    return J1, J2
        best1 = best1 or (found1[0] if found1 else None)
        best2 = best2 or (found2[0] if found2 else None)
    return best1, best2


# ---------------------------------------------------------------------
# the theta gap
# ---------------------------------------------------------------------

@dataclass
class GapReport:
    theta: Scalar
    J: IntervalSet
    part_in: Scalar
    part_out: Scalar
    caratheodory_equality: bool
    restriction: str = RESTRICTION_NOTICE

    def __str__(self):
        flag = "=" if self.caratheodory_equality else "!="
        return (f"theta {flag} 1: mu(B n J) = {self.part_in}, "
                f"mu(Bc n J) = {self.part_out}, mu(J) = {self.J.measure()}")


def gap_theta(B: IntervalSet, J: IntervalSet) -> GapReport:
    """theta = (mu(B n J) + mu(Bc n J)) / mu(J); exactly 1 for measurable B."""
    mu_j = J.measure()
    if mu_j.sign() <= 0:
        raise ValueError("probe window must have positive measure")
    part_in = B.intersect(J).measure()
    part_out = B.complement().intersect(J).measure()
    total = part_in + part_out
    if total == mu_j:
        theta = ONE
    else:
        theta = total / mu_j  # mu_j rational for basis probes
    return GapReport(theta, J, part_in, part_out, theta == ONE)


# ---------------------------------------------------------------------
# invariance and the reduction hypothesis
# ---------------------------------------------------------------------

def invariance_check(T: Transformation, B: SetLike) -> CheckReport:
    """Is B exactly T-invariant (T^-1 B = B)?  Reports the defect measure."""
    pre = T.preimage(B)
    sym = pre.subtract(B).union(B.subtract(pre))
    ok = sym.is_empty()
    report = CheckReport("invariance", ok)
    report.rows.append({"invariant": ok,
                        "symmetric_difference_measure": sym.measure().to_text()})
    return report


def reduction_check(T: Transformation, B: IntervalSet, basis: MeasureBasis,
                    sample: int, epsilon: Scalar, n_max: int,
                    stall_window: Optional[int] = None,
                    component_budget: int = DEFAULT_COMPONENT_BUDGET) -> CheckReport:
    """Probe mu(B n K) >= mu(B n J) - eps over equal-measure basis pairs.

    Each pair is connected through a splinter run; pairs whose splinter
    does not converge are reported as non-converged (expected for
    non-ergodic systems), not as failures of the inequality.
    """
    inv = invariance_check(T, B)
    mode = "invariant" if inv.passed else "diagnostic"
    report = CheckReport("reduction-hypothesis", True, note=mode)
    report.rows.append({"restriction": RESTRICTION_NOTICE, "mode": mode})
    pairs = []
    for level in basis.levels():
        cells = list(basis.elements_at(level))
        for i, J in enumerate(cells):
            for K in cells[i + 1:]:
                if J.measure() == K.measure():
                    pairs.append((J, K))
                if len(pairs) >= sample:
                    break
            if len(pairs) >= sample:
                break
        if len(pairs) >= sample:
            break
    for J, K in pairs:
        d = splinter(T, J, K, epsilon, n_max, stall_window=stall_window,
                     component_budget=component_budget)
        row = {"J": J.to_text(), "K": K.to_text(), "status": d.status}
        if d.status == CONVERGED:
            lhs = B.intersect(K).measure()
            rhs = B.intersect(J).measure() - epsilon
            ok = lhs >= rhs
            chain = transport_check(d, B, T)
            row.update({"mu_B_K": lhs.to_text(), "mu_B_J_minus_eps": rhs.to_text(),
                        "pass": ok, "chain": chain.passed})
            if inv.passed:
                report.passed &= ok and chain.passed
        report.rows.append(row)
    return report


# ---------------------------------------------------------------------
# correlation diagnostics
# ---------------------------------------------------------------------

def _check_budget(S: SetLike, budget: int) -> None:
    from .errors import ComponentBudgetError
    if S.component_count() > budget:
        raise ComponentBudgetError(
            f"{S.component_count()} components exceed budget {budget}")


def correlation_average(T: Transformation, C: SetLike, D: SetLike, m: int,
                        component_budget: int = DEFAULT_COMPONENT_BUDGET) -> Scalar:
    """(1/m) * sum_{j=1..m} mu(T^-j C n D), exactly."""
    if m < 1:
        raise ValueError("m must be positive")
    S = C
    total = Scalar(0)
    for _ in range(m):
        S = T.preimage(S)
        _check_budget(S, component_budget)
        total = total + S.intersect(D).measure()
    return total / Scalar(m)


def mixing_trace(T: Transformation, C: SetLike, D: SetLike, n_max: int,
                 component_budget: int = DEFAULT_COMPONENT_BUDGET) -> list[Scalar]:
    """The sequence mu(T^-j C n D) - mu(C) mu(D) for j = 1..n_max, exact.

    Identically zero along a mixing direction; for merely ergodic systems
    the excursions persist while the Cesaro averages still converge.
    """
    product = C.measure() * D.measure()
    S = C
    out = []
    for _ in range(n_max):
        S = T.preimage(S)
        _check_budget(S, component_budget)
        out.append(S.intersect(D).measure() - product)
    return out
