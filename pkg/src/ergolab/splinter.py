"""The splinter construction: pull the mass of one window back onto another.

Given a transformation T and two equal-measure windows J1, J2, the engine
builds the sequences

    A_1 = T^-1(J1) n J2,                 B_1 = T^-1(J1) \\ A_1
    A_n = T^-1(B_{n-1}) n (J2 \\ U A_i),  B_n = T^-1(B_{n-1}) \\ A_n

tracking every exact identity the construction satisfies.  For an ergodic
T the residual measure mu(B_n) tends to 0; for a non-ergodic T it can stall
at a positive constant, which the engine detects and reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dynamics import SetLike, Transformation
from .errors import ComponentBudgetError
from .scalars import Scalar, render

DEFAULT_COMPONENT_BUDGET = 1 << 16

CONVERGED = "converged"
STALLED = "stalled"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class StepRecord:
    step: int
    measure_A: Scalar
    measure_B: Scalar
    components_B: int
    covered_measure: Scalar

    def row(self, digits: int = 12) -> dict:
        return {
            "step": self.step,
            "measure_A_n": self.measure_A.to_text(),
            "measure_A_n_dec": render(self.measure_A, digits),
            "measure_B_n": self.measure_B.to_text(),
            "measure_B_n_dec": render(self.measure_B, digits),
            "components_B_n": self.components_B,
            "cumulative_covered": self.covered_measure.to_text(),
        }


@dataclass
class SplinterDecomposition:
    transformation: Transformation
    J1: SetLike
    J2: SetLike
    epsilon: Scalar
    n_max: int
    splinters: list = field(default_factory=list)   # A_1 .. A_n
    residuals: list = field(default_factory=list)   # B_1 .. B_n
    covered: Optional[SetLike] = None               # union of the A_i
    trace: list = field(default_factory=list)
    status: str = BUDGET_EXHAUSTED

    @property
    def depth(self) -> int:
        return len(self.splinters)


@dataclass
class CheckReport:
    name: str
    passed: bool
    rows: list = field(default_factory=list)
    note: str = ""

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        out = f"[{verdict}] {self.name}"
        if self.note:
            out += f" ({self.note})"
        return out


def _check_components(S: SetLike, budget: int) -> None:
    if S.component_count() > budget:
        raise ComponentBudgetError(
            f"set grew to {S.component_count()} components (budget {budget})")


def splinter(T: Transformation, J1: SetLike, J2: SetLike, epsilon: Scalar,
             n_max: int, stall_window: Optional[int] = None,
             component_budget: int = DEFAULT_COMPONENT_BUDGET) -> SplinterDecomposition:
    """Run the splinter recursion until convergence, stall or budget."""
    mu1, mu2 = J1.measure(), J2.measure()
    if mu1 != mu2:
        raise ValueError(f"windows must have equal measure: {mu1} != {mu2}")
    if mu1.sign() <= 0:
        raise ValueError("windows must have positive measure")
    if epsilon.sign() <= 0:
        raise ValueError("epsilon must be positive")
    window = stall_window if stall_window is not None else T.stall_window()

    d = SplinterDecomposition(T, J1, J2, epsilon, n_max)
    covered = J2.subtract(J2)  # empty of the right kind
    B = J1
    flat = 0  # consecutive steps with empty A and unchanged mu(B)
    prev_mb: Optional[Scalar] = None
    for n in range(1, n_max + 1):
        pre = T.preimage(B)
        avail = J2.subtract(covered)
        A_n = pre.intersect(avail)
        B = pre.subtract(A_n)
        covered = covered.union(A_n)
        ma, mb = A_n.measure(), B.measure()
        d.splinters.append(A_n)
        d.residuals.append(B)
        d.covered = covered
        d.trace.append(StepRecord(n, ma, mb,
                                  B.component_count(), covered.measure()))
        # exact invariants of the construction, asserted at every step
        if mb != J2.subtract(covered).measure():
            raise AssertionError(f"residual identity violated at step {n}")
        if covered.measure() + mb != mu1:
            raise AssertionError(f"mass conservation violated at step {n}")
        if not A_n.subtract(J2).is_empty():
            raise AssertionError(f"splinter escaped J2 at step {n}")
        if mb < epsilon:
            d.status = CONVERGED
            break
        if prev_mb is not None and mb == prev_mb and A_n.is_empty():
            flat += 1
        else:
            flat = 0
        prev_mb = mb
        if flat >= window:
            d.status = STALLED
            break
        if B.component_count() > component_budget:
            d.status = BUDGET_EXHAUSTED
            break
    else:
        d.status = BUDGET_EXHAUSTED
    return d


def verify_residual_identity(d: SplinterDecomposition) -> CheckReport:
    """mu(B_n) = mu(J2 \\ union of the first n splinters), every step."""
    report = CheckReport("residual-identity", True)
    covered = d.J2.subtract(d.J2)
    for n, (A_n, B_n) in enumerate(zip(d.splinters, d.residuals), start=1):
        covered = covered.union(A_n)
        lhs = B_n.measure()
        rhs = d.J2.subtract(covered).measure()
        ok = lhs == rhs
        report.rows.append({"step": n, "measure_B_n": lhs.to_text(),
                            "measure_J2_minus_cover": rhs.to_text(),
                            "pass": ok})
        report.passed &= ok
    return report


def verify_mass_conservation(d: SplinterDecomposition) -> CheckReport:
    """sum mu(A_i) + mu(B_n) = mu(J1) at every step."""
    report = CheckReport("mass-conservation", True)
    total = d.J1.measure() - d.J1.measure()
    mu1 = d.J1.measure()
    for n, (A_n, B_n) in enumerate(zip(d.splinters, d.residuals), start=1):
        total = total + A_n.measure()
        ok = total + B_n.measure() == mu1
        report.rows.append({"step": n, "cumulative_A": total.to_text(),
                            "measure_B_n": B_n.measure().to_text(),
                            "measure_J1": mu1.to_text(), "pass": ok})
        report.passed &= ok
    return report


def verify_disjointness(d: SplinterDecomposition) -> CheckReport:
    """Splinters are pairwise disjoint and contained in J2."""
    report = CheckReport("splinter-disjointness", True)
    running = d.J2.subtract(d.J2)
    for n, A_n in enumerate(d.splinters, start=1):
        disjoint = A_n.intersect(running).is_empty()
        inside = A_n.subtract(d.J2).is_empty()
        report.rows.append({"step": n, "disjoint": disjoint, "in_J2": inside})
        report.passed &= disjoint and inside
        running = running.union(A_n)
    return report


def verify_orbit_decomposition(T: Transformation, d: SplinterDecomposition,
                               n: int) -> CheckReport:
    """T^-n(J1) equals the disjoint union B_n u U_{i<=n} T^{i-n}(A_i)."""
    if n < 1 or n > d.depth:
        raise ValueError(f"step {n} outside recorded depth {d.depth}")
    lhs = d.J1
    for _ in range(n):
        lhs = T.preimage(lhs)
    parts = [d.residuals[n - 1]]
    for i in range(1, n + 1):
        piece = d.splinters[i - 1]
        for _ in range(n - i):
            piece = T.preimage(piece)
        parts.append(piece)
    report = CheckReport(f"orbit-decomposition(n={n})", True)
    union = parts[0]
    disjoint = True
    for piece in parts[1:]:
        if not union.intersect(piece).is_empty():
            disjoint = False
        union = union.union(piece)
    equal = union.equals(lhs)
    total = parts[0].measure()
    for piece in parts[1:]:
        total = total + piece.measure()
    measures_ok = total == lhs.measure()
    report.passed = disjoint and equal and measures_ok
    report.rows.append({"step": n, "disjoint": disjoint, "set_equal": equal,
                        "measures_sum": measures_ok,
                        "measure_lhs": lhs.measure().to_text()})
    return report


def transport_check(d: SplinterDecomposition, B: SetLike,
                    T: Transformation) -> CheckReport:
    """The transport chain mu(J1 n B) <= mu(B_n n B) + sum mu(A_i n B).

    For T-invariant B the chain holds exactly at every step and the final
    step yields mu(J1 n B) <= mu(J2 n B) + mu(B_n).  For non-invariant B
    the chain is evaluated diagnostically and failures are recorded rather
    than raised.
    """
    invariant = T.preimage(B).equals(B)
    mode = "invariant" if invariant else "diagnostic"
    report = CheckReport("transport-chain", True, note=mode)
    lhs = d.J1.intersect(B).measure()
    running = lhs - lhs
    for n, (A_n, B_n) in enumerate(zip(d.splinters, d.residuals), start=1):
        running = running + A_n.intersect(B).measure()
        bound = B_n.intersect(B).measure() + running
        ok = lhs <= bound
        report.rows.append({"step": n, "lhs": lhs.to_text(),
                            "bound": bound.to_text(), "pass": ok})
        if invariant:
            report.passed &= ok
    if d.residuals:
        final = d.J2.intersect(B).measure() + d.residuals[-1].measure()
        ok = lhs <= final
        report.rows.append({"step": "limit", "lhs": lhs.to_text(),
                            "bound": final.to_text(), "pass": ok})
        if invariant:
            report.passed &= ok
    return report


def additivity_check(A_list: Sequence[SetLike], B: SetLike,
                     n_tail: int) -> CheckReport:
    """Finite additivity over a disjoint family, with tail monotonicity.

    Checks mu(U_{i<=k} (A_i n B)) = sum_{i<=k} mu(A_i n B) for k <= n_tail
    and that the tail measures mu(U_{i>=k} A_i) are non-increasing.
    """
    A_list = list(A_list)
    for i, a in enumerate(A_list):
        for b in A_list[i + 1:]:
            if not a.intersect(b).is_empty():
                raise ValueError("family is not pairwise disjoint")
    report = CheckReport("finite-additivity", True)
    k_max = min(n_tail, len(A_list))
    if not A_list:
        return report
    union = A_list[0].subtract(A_list[0])
    total = union.measure()
    for k in range(1, k_max + 1):
        cut = A_list[k - 1].intersect(B)
        union = union.union(cut)
        total = total + cut.measure()
        ok = union.measure() == total
        report.rows.append({"k": k, "union_measure": union.measure().to_text(),
                            "sum_measure": total.to_text(), "pass": ok})
        report.passed &= ok
    # tail monotonicity
    prev = None
    for k in range(k_max):
        tail = A_list[k]
        for a in A_list[k + 1:]:
            tail = tail.union(a)
        m = tail.measure()
        if prev is not None and not m <= prev:
            report.passed = False
            report.rows.append({"tail_from": k + 1, "pass": False})
        prev = m
    return report
