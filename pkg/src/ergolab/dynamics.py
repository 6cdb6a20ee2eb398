"""The concrete transformations: rotation, doubling, odometer, Kakutani tower.

All maps act on the representable set class by exact preimage/image, mod
null sets.  The circle with normalized arc measure is modeled as [0, 1)
with Lebesgue measure: multiplication by a unimodular constant becomes
translation mod 1 and squaring becomes doubling mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (InvalidTowerSetError, RepresentationOverflowError,
                     UnsupportedRepresentationError)
from .intervals import (AT_ONE, AT_ZERO, EVEN, FULL, Interval, IntervalSet,
                        ParityTail, _block, _collapse, _depths_for, _expand,
                        _half, _sweep)
from .scalars import GOLDEN, ONE, SQRT2M1, ZERO, Scalar, get_tag


def _raw_scalar(p: Fraction, q: Fraction, tag) -> Scalar:
    s = Scalar.__new__(Scalar)
    s.p = p
    s.q = q if q else Fraction(0)
    s.tag = tag if s.q else None
    return s


#: the Kakutani base set A = union of even-index blocks I_0, I_2, ...
A_SET = IntervalSet.build([], [ParityTail(AT_ONE, 0, "even")])
#: its complement, the odd-index blocks
A_COMPLEMENT = A_SET.complement()


# ---------------------------------------------------------------------
# odometer primitive
# ---------------------------------------------------------------------

def _odometer_shift(n: int) -> Scalar:
    # the translation taking I_n onto D_n: x - 1 + 2**-n + 2**-(n+1)
    return Scalar(Fraction(3, 1 << (n + 1)) - 1)


def _split_blocks_one(iv: Interval) -> list[tuple[int, Interval]]:
    """Split [lo, hi) with hi < 1 at the I_n block boundaries."""
    out = []
    n = 0
    lo = iv.lo
    while True:
        b_hi = ONE - _half(n + 1)
        if lo < b_hi:
            hi = iv.hi if iv.hi < b_hi else b_hi
            out.append((n, Interval(lo, hi)))
            if iv.hi <= b_hi:
                return out
            lo = b_hi
        n += 1


def _split_blocks_zero(iv: Interval) -> list[tuple[int, Interval]]:
    """Split [lo, hi) with lo > 0 at the D_n block boundaries."""
    out = []
    n = 0
    hi = iv.hi
    while True:
        b_lo = _half(n + 1)
        if hi > b_lo:
            lo = iv.lo if iv.lo > b_lo else b_lo
            out.append((n, Interval(lo, hi)))
            if iv.lo >= b_lo:
                return out
            hi = b_lo
        n += 1


def odometer_image(S: IntervalSet) -> IntervalSet:
    """Exact forward image under the adding-machine primitive (mod null)."""
    if any(t.anchor == AT_ZERO for t in S.tails):
        raise RepresentationOverflowError(
            "image of an at-zero tail accumulates at 1/2")
    depths = _depths_for([S], {AT_ONE})
    ivs, fl = _expand(S, depths)
    out = []
    for iv in ivs:
        for n, piece in _split_blocks_one(iv):
            t = _odometer_shift(n)
            out.append(Interval(piece.lo + t, piece.hi + t))
    m = depths[AT_ONE]
    flags = {(AT_ZERO, p): fl[(AT_ONE, p)] for p in (0, 1)}
    return _collapse(_sweep(out), flags, {AT_ZERO: m})


def odometer_preimage(S: IntervalSet) -> IntervalSet:
    """Exact preimage under the adding-machine primitive (mod null)."""
    if any(t.anchor == AT_ONE for t in S.tails):
        raise RepresentationOverflowError(
            "preimage of an at-one tail accumulates at 1/2")
    depths = _depths_for([S], {AT_ZERO})
    ivs, fl = _expand(S, depths)
    out = []
    for iv in ivs:
        for n, piece in _split_blocks_zero(iv):
            t = _odometer_shift(n)
            out.append(Interval(piece.lo - t, piece.hi - t))
    m = depths[AT_ZERO]
    flags = {(AT_ONE, p): fl[(AT_ZERO, p)] for p in (0, 1)}
    return _collapse(_sweep(out), flags, {AT_ONE: m})


# ---------------------------------------------------------------------
# doubling map
# ---------------------------------------------------------------------

def doubling_preimage(S: IntervalSet) -> IntervalSet:
    """{x : 2x mod 1 in S} = S/2 union (S/2 + 1/2)."""
    if S.tails:
        raise UnsupportedRepresentationError("doubling does not act on tails")
    half = Fraction(1, 2)
    left = []
    right = []
    for iv in S.intervals:
        llo = _raw_scalar(iv.lo.p / 2, iv.lo.q / 2, iv.lo.tag)
        lhi = _raw_scalar(iv.hi.p / 2, iv.hi.q / 2, iv.hi.tag)
        left.append(Interval(llo, lhi))
        right.append(Interval(
            _raw_scalar(llo.p + half, llo.q, llo.tag),
            _raw_scalar(lhi.p + half, lhi.q, lhi.tag)))
    # both runs are sorted; only the junction can merge (left ends at 1/2
    # only when S reached 1, right starts at 1/2 only when S reached 0)
    if left and right and left[-1].hi == right[0].lo:
        merged = Interval(left[-1].lo, right[0].hi)
        ivs = left[:-1] + [merged] + right[1:]
    else:
        ivs = left + right
    return IntervalSet(tuple(ivs))


def doubling_image(S: IntervalSet) -> IntervalSet:
    """Exact forward image 2S mod 1."""
    if S.tails:
        raise UnsupportedRepresentationError("doubling does not act on tails")
    half = Scalar(Fraction(1, 2))
    out = []
    for iv in S.intervals:
        for lo, hi in ((iv.lo, iv.hi if iv.hi < half else half),
                       (iv.lo if iv.lo > half else half, iv.hi)):
            if lo < hi:
                two_lo = lo + lo
                two_hi = hi + hi
                if two_lo >= ONE:
                    two_lo, two_hi = two_lo - ONE, two_hi - ONE
                out.append(Interval(two_lo, two_hi))
    return IntervalSet(tuple(_sweep(out)))


# ---------------------------------------------------------------------
# tower sets
# ---------------------------------------------------------------------

class TowerSet:
    """Measurable subset of the tower space X~ = X u A'.

    The top floor is stored through the identification with A, i.e. as the
    subset tau^{-1}(S n A') of A."""

    __slots__ = ("base", "top")

    def __init__(self, base: IntervalSet, top: IntervalSet = None):
        top = top if top is not None else IntervalSet()
        if not top.is_subset_of(A_SET):
            raise InvalidTowerSetError("top part must be a subset of A")
        self.base = base
        self.top = top

    def union(self, other: "TowerSet") -> "TowerSet":
        return TowerSet(self.base.union(other.base), self.top.union(other.top))

    def intersect(self, other: "TowerSet") -> "TowerSet":
        return TowerSet(self.base.intersect(other.base),
                        self.top.intersect(other.top))

    def subtract(self, other: "TowerSet") -> "TowerSet":
        return TowerSet(self.base.subtract(other.base),
                        self.top.subtract(other.top))

    def complement(self) -> "TowerSet":
        return TowerSet(self.base.complement(), A_SET.subtract(self.top))

    def measure(self) -> Scalar:
        return self.base.measure() + self.top.measure()

    def is_empty(self) -> bool:
        return self.base.is_empty() and self.top.is_empty()

    def equals(self, other: "TowerSet") -> bool:
        return self.base.equals(other.base) and self.top.equals(other.top)

    def __eq__(self, other):
        return isinstance(other, TowerSet) and self.equals(other)

    def __hash__(self):
        return hash((self.base, self.top))

    def component_count(self) -> int:
        return self.base.component_count() + self.top.component_count()

    def to_text(self) -> str:
        return f"{self.base.to_text()} | {self.top.to_text()}"

    def __repr__(self):
        return f"TowerSet({self.to_text()!r})"


#: the full tower space; its measure is 1 + mu(A) = 5/3
TOWER_FULL = TowerSet(FULL, A_SET)
TOWER_EMPTY = TowerSet(IntervalSet(), IntervalSet())


def tower_measure(S: TowerSet) -> Scalar:
    return S.measure()


def tower_preimage(S: TowerSet) -> TowerSet:
    pre_base = odometer_preimage(S.base)
    return TowerSet(pre_base.intersect(A_COMPLEMENT).union(S.top),
                    pre_base.intersect(A_SET))


def tower_image(S: TowerSet) -> TowerSet:
    base = odometer_image(S.base.intersect(A_COMPLEMENT)).union(
        odometer_image(S.top))
    return TowerSet(base, S.base.intersect(A_SET))


# ---------------------------------------------------------------------
# transformation descriptors
# ---------------------------------------------------------------------

SetLike = Union[IntervalSet, TowerSet]


class Transformation:
    """Immutable descriptor exposing exact preimage/image on set values."""

    kind = "abstract"
    ergodic = False
    invertible = False

    def preimage(self, S: SetLike) -> SetLike:
        raise NotImplementedError

    def image(self, S: SetLike) -> SetLike:
        raise NotImplementedError

    def empty_set(self) -> SetLike:
        return IntervalSet()

    def full_set(self) -> SetLike:
        return FULL

    def discontinuities(self, depth: int = 0) -> list[Scalar]:
        return []

    def stall_window(self) -> int:
        return 8

    def descriptor(self) -> str:
        return self.kind

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor()}>"


class Rotation(Transformation):
    """x -> x + angle mod 1; ergodic iff the angle is irrational."""

    kind = "rotation"
    invertible = True

    def __init__(self, angle: Scalar, label: Optional[str] = None):
        self.angle = angle.mod1()
        self.ergodic = angle.q != 0
        self._label = label

    def preimage(self, S: IntervalSet) -> IntervalSet:
        return S.translate_mod1(-self.angle)

    def image(self, S: IntervalSet) -> IntervalSet:
        return S.translate_mod1(self.angle)

    def stall_window(self) -> int:
        if self.ergodic:
            return 8
        return max(8, self.angle.p.denominator)

    def descriptor(self) -> str:
        if self._label:
            return f"rotation:{self._label}"
        return f"rotation:{self.angle.to_text()}"


class Doubling(Transformation):
    """x -> 2x mod 1; ergodic (indeed mixing), not invertible."""

    kind = "doubling"
    ergodic = True
    invertible = False

    def preimage(self, S: IntervalSet) -> IntervalSet:
        return doubling_preimage(S)

    def image(self, S: IntervalSet) -> IntervalSet:
        return doubling_image(S)

    def discontinuities(self, depth: int = 0) -> list[Scalar]:
        return []  # continuous as a circle map


class Odometer(Transformation):
    """The adding-machine primitive; ergodic, invertible mod null."""

    kind = "odometer"
    ergodic = True
    invertible = True

    def preimage(self, S: IntervalSet) -> IntervalSet:
        return odometer_preimage(S)

    def image(self, S: IntervalSet) -> IntervalSet:
        return odometer_image(S)

    def discontinuities(self, depth: int = 0) -> list[Scalar]:
        return [ONE - _half(n) for n in range(depth + 1)]


class KakutaniTower(Transformation):
    """One-level tower extension of the odometer; acts on TowerSets."""

    kind = "kakutani"
    ergodic = True
    invertible = True

    def preimage(self, S: TowerSet) -> TowerSet:
        return tower_preimage(S)

    def image(self, S: TowerSet) -> TowerSet:
        return tower_image(S)

    def empty_set(self) -> TowerSet:
        return TOWER_EMPTY

    def full_set(self) -> TowerSet:
        return TOWER_FULL


def discontinuity_set(kind: str, depth: int = 0) -> list[Scalar]:
    """Breakpoints of the named map, truncated at the requested depth."""
    if kind == "odometer":
        return Odometer().discontinuities(depth)
    if kind in ("doubling", "rotation"):
        return []
    raise ValueError(f"unknown transformation kind {kind!r}")


@dataclass
class PreservationReport:
    system: str
    set_text: str
    measure_set: Scalar
    measure_preimage: Scalar
    passed: bool

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        return (f"[{verdict}] {self.system}: mu(S) = {self.measure_set} "
                f"vs mu(T^-1 S) = {self.measure_preimage}")


def verify_measure_preserving(T: Transformation, S: SetLike) -> PreservationReport:
    """Check measure(preimage(S)) == measure(S), exactly."""
    pre = T.preimage(S)
    m_s = S.measure()
    m_p = pre.measure()
    return PreservationReport(T.descriptor(), S.to_text(), m_s, m_p,
                              m_s == m_p)


def rotation_preimage(angle: Scalar, S: IntervalSet) -> IntervalSet:
    return Rotation(angle).preimage(S)


def make_system(descriptor: str) -> Transformation:
    """Parse a system descriptor: rotation:golden, rotation:1/3, doubling,
    odometer, kakutani."""
    d = descriptor.strip()
    if d == "doubling":
        return Doubling()
    if d == "odometer":
        return Odometer()
    if d == "kakutani":
        return KakutaniTower()
    if d.startswith("rotation:"):
        angle = d.split(":", 1)[1]
        if angle in ("golden", "sqrt2"):
            return Rotation(Scalar(0, 1, get_tag(angle)), label=angle)
        return Rotation(Scalar(Fraction(angle)), label=angle)
    raise ValueError(f"unknown system descriptor {descriptor!r}")
