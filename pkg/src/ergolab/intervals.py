"""Exact algebra of measurable subsets of [0, 1).

A set is a normalized finite union of half-open intervals [lo, hi) plus at
most one geometric "parity tail" per anchor.  An at-one tail with start N
and parity p denotes the union of the blocks

    I_n = [1 - 2**-n, 1 - 2**-(n+1))        n >= N, n = p (mod 2)

which accumulate at 1; an at-zero tail uses the mirrored blocks

    D_n = [2**-(n+1), 2**-n)                n >= N, n = p (mod 2)

accumulating at 0.  The I_n blocks tile [0, 1) and the D_n blocks tile (0, 1);
all identities hold mod null sets (single points are never represented).

Normal form is unique: tails are maximally extended toward small indices,
a tail's first block is never adjacent to a finite component, and two
same-anchor tails of opposite parity are collapsed into a plain interval.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (RepresentationOverflowError,
                     UnsupportedRepresentationError)
from .scalars import ONE, ZERO, IrrationalTag, Scalar, parse_scalar

AT_ONE = "one"
AT_ZERO = "zero"
EVEN = 0
ODD = 1

_PARITY_NAMES = {EVEN: "even", ODD: "odd"}
_PARITY_VALUES = {"even": EVEN, "odd": ODD}


def _half(n: int) -> Scalar:
    return Scalar(Fraction(1, 1 << n))


class Interval:
    """Half-open interval [lo, hi) with 0 <= lo < hi <= 1."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Scalar, hi: Scalar):
        self.lo = lo
        self.hi = hi

    def length(self) -> Scalar:
        return self.hi - self.lo

    def to_text(self) -> str:
        return f"{self.lo.to_text()}..{self.hi.to_text()}"

    def __eq__(self, other):
        return (isinstance(other, Interval)
                and self.lo == other.lo and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.to_text()})"


class ParityTail:
    """Infinite union of every-other block accumulating at 0 or 1."""

    __slots__ = ("anchor", "start", "parity")

    def __init__(self, anchor: str, start: int, parity):
        if anchor not in (AT_ONE, AT_ZERO):
            raise ValueError(f"bad anchor {anchor!r}")
        if isinstance(parity, str):
            parity = _PARITY_VALUES[parity]
        if parity not in (EVEN, ODD):
            raise ValueError(f"bad parity {parity!r}")
        if start < 0:
            raise ValueError("tail start must be >= 0")
        if start % 2 != parity:
            start += 1  # first included index
        self.anchor = anchor
        self.start = start
        self.parity = parity

    def measure(self) -> Scalar:
        # sum of 2**-(n+1) over n = start, start+2, ... is a geometric
        # series with ratio 1/4
        return Scalar(Fraction(2, 3 * (1 << self.start)))

    def first_block(self) -> Interval:
        return _block(self.anchor, self.start)

    def to_text(self) -> str:
        return f"tail({self.anchor}, {self.start}, {_PARITY_NAMES[self.parity]})"

    def __eq__(self, other):
        return (isinstance(other, ParityTail) and self.anchor == other.anchor
                and self.start == other.start and self.parity == other.parity)

    def __hash__(self):
        return hash((self.anchor, self.start, self.parity))

    def __repr__(self):
        return f"ParityTail({self.to_text()})"


def block_one(n: int) -> Interval:
    """I_n = [1 - 2**-n, 1 - 2**-(n+1))."""
    return Interval(ONE - _half(n), ONE - _half(n + 1))


def block_zero(n: int) -> Interval:
    """D_n = [2**-(n+1), 2**-n)."""
    return Interval(_half(n + 1), _half(n))


def _block(anchor: str, n: int) -> Interval:
    return block_one(n) if anchor == AT_ONE else block_zero(n)


# ---------------------------------------------------------------------
# finite sweep machinery (sorted, disjoint, non-adjacent interval lists)
# ---------------------------------------------------------------------

def _sweep(intervals: Iterable[Interval]) -> list[Interval]:
    ivs = [iv for iv in intervals if iv.lo < iv.hi]
    ivs.sort(key=lambda iv: iv.lo)
    out: list[Interval] = []
    for iv in ivs:
        if out and iv.lo <= out[-1].hi:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out


def _finite_intersect(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    out: list[Interval] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = a[i].lo if a[i].lo > b[j].lo else b[j].lo
        hi = a[i].hi if a[i].hi < b[j].hi else b[j].hi
        if lo < hi:
            out.append(Interval(lo, hi))
        if a[i].hi < b[j].hi:
            i += 1
        else:
            j += 1
    return out


def _finite_subtract(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    out: list[Interval] = []
    j = 0
    for iv in a:
        lo = iv.lo
        while j < len(b) and b[j].hi <= lo:
            j += 1
        k = j
        while k < len(b) and b[k].lo < iv.hi:
            if b[k].lo > lo:
                out.append(Interval(lo, b[k].lo))
            if b[k].hi > lo:
                lo = b[k].hi
            if lo >= iv.hi:
                break
            k += 1
        if lo < iv.hi:
            out.append(Interval(lo, iv.hi))
    return out


def _finite_complement(a: Sequence[Interval], lo: Scalar, hi: Scalar) -> list[Interval]:
    out: list[Interval] = []
    cur = lo
    for iv in a:
        if iv.lo > cur:
            out.append(Interval(cur, iv.lo))
        if iv.hi > cur:
            cur = iv.hi
    if cur < hi:
        out.append(Interval(cur, hi))
    return out


# ---------------------------------------------------------------------
# tail expansion depths
# ---------------------------------------------------------------------

def _rational_lower_bound(s: Scalar) -> Fraction:
    """A positive rational lower bound of a scalar known to be > 0."""
    if s.q == 0:
        return s.p
    k = 8
    while True:
        lo, _ = s.rational_bracket(k)
        if lo > 0:
            return lo
        k *= 2


def _depth_for_gap(gap: Scalar) -> int:
    """Smallest convenient m >= 2 with 2**-m <= gap (gap > 0)."""
    g = _rational_lower_bound(gap)
    m = (g.denominator // g.numerator).bit_length() + 1
    return max(2, m)


def _depths_for(sets: Sequence["IntervalSet"], anchors: set[str]) -> dict[str, int]:
    depths: dict[str, int] = {}
    for anchor in anchors:
        m = 2
        for s in sets:
            for t in s.tails:
                if t.anchor == anchor:
                    m = max(m, t.start)
            for iv in s.intervals:
                if anchor == AT_ONE:
                    for e in (iv.lo, iv.hi):
                        if e < ONE:
                            m = max(m, _depth_for_gap(ONE - e))
                else:
                    for e in (iv.lo, iv.hi):
                        if e > ZERO:
                            m = max(m, _depth_for_gap(e))
        depths[anchor] = m
    return depths


def _expand(s: "IntervalSet", depths: dict[str, int]):
    """Split s into finite intervals inside the core region plus residual
    flags; flag (anchor, parity) means "all blocks n >= depth with that
    parity are present"."""
    flags = {(a, p): False for a in depths for p in (EVEN, ODD)}
    raw: list[Interval] = []
    for t in s.tails:
        M = depths[t.anchor]
        n = t.start
        while n < M:
            raw.append(_block(t.anchor, n))
            n += 2
        flags[(t.anchor, t.parity)] = True
    raw.extend(s.intervals)
    ivs: list[Interval] = []
    for iv in raw:
        # a component reaching an anchor covers that anchor's whole
        # residual zone (block D_0 / I_0 of an expanded tail included)
        lo, hi = iv.lo, iv.hi
        if AT_ONE in depths and hi == ONE:
            flags[(AT_ONE, EVEN)] = flags[(AT_ONE, ODD)] = True
            hi = ONE - _half(depths[AT_ONE])
        if AT_ZERO in depths and lo == ZERO:
            flags[(AT_ZERO, EVEN)] = flags[(AT_ZERO, ODD)] = True
            lo = _half(depths[AT_ZERO])
        if lo < hi:
            ivs.append(Interval(lo, hi))
    return _sweep(ivs), flags


def _residual_interval(anchor: str, m: int) -> Interval:
    if anchor == AT_ONE:
        return Interval(ONE - _half(m), ONE)
    return Interval(ZERO, _half(m))


def _adjust_tail(ivs: list[Interval], anchor: str, start: int):
    """Canonicalize the boundary between finite components and a tail:
    absorb exact isolated predecessor blocks into the tail, and push the
    first block out into any finite component adjacent to it."""
    changed = True
    while changed:
        changed = False
        while start >= 2:
            blk = _block(anchor, start - 2)
            hit = None
            for i, iv in enumerate(ivs):
                if iv.lo == blk.lo and iv.hi == blk.hi:
                    hit = i
                    break
            if hit is None:
                break
            del ivs[hit]
            start -= 2
            changed = True
        blk = _block(anchor, start)
        adjacent = any(iv.hi == blk.lo or iv.lo == blk.hi for iv in ivs)
        if adjacent:
            ivs.append(blk)
            ivs = _sweep(ivs)
            start += 2
            changed = True
    return ivs, start


def _collapse(ivs: list[Interval], flags, depths: dict[str, int]) -> "IntervalSet":
    extra: list[Interval] = []
    pending: list[tuple[str, int, int]] = []
    for anchor, m in depths.items():
        e, o = flags[(anchor, EVEN)], flags[(anchor, ODD)]
        if e and o:
            extra.append(_residual_interval(anchor, m))
        elif e or o:
            parity = EVEN if e else ODD
            start = m if m % 2 == parity else m + 1
            pending.append((anchor, start, parity))
    ivs = _sweep(list(ivs) + extra)
    tails = []
    for anchor, start, parity in pending:
        ivs, start = _adjust_tail(ivs, anchor, start)
        tails.append(ParityTail(anchor, start, parity))
    return IntervalSet(tuple(ivs), frozenset(tails))


# ---------------------------------------------------------------------
# the set type
# ---------------------------------------------------------------------

class IntervalSet:
    """Normalized measurable subset of [0, 1).

    Do not call the constructor with unnormalized data; use ``build`` /
    ``make_set`` / ``from_text``.
    """

    __slots__ = ("intervals", "tails")

    def __init__(self, intervals: tuple[Interval, ...] = (),
                 tails: frozenset[ParityTail] = frozenset()):
        anchors = [t.anchor for t in tails]
        if len(anchors) != len(set(anchors)) or len(anchors) > 4:
            raise RepresentationOverflowError(
                "more than one parity tail per anchor in normal form")
        self.intervals = tuple(intervals)
        self.tails = frozenset(tails)

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, intervals: Iterable[Interval],
              tails: Iterable[ParityTail] = ()) -> "IntervalSet":
        ivs = list(intervals)
        for iv in ivs:
            if iv.lo < ZERO or iv.hi > ONE:
                raise ValueError(f"interval {iv.to_text()} outside [0,1)")
            if not iv.lo < iv.hi:
                raise ValueError(f"empty or inverted interval {iv.to_text()}")
        tails = list(tails)
        if not tails:
            return cls(tuple(_sweep(ivs)))
        anchors = {t.anchor for t in tails}
        probe = _TailProbe(tuple(ivs), tuple(tails))
        depths = _depths_for([probe], anchors)  # type: ignore[list-item]
        eiv, efl = _expand(probe, depths)       # type: ignore[arg-type]
        return _collapse(eiv, efl, depths)

    def _anchors(self) -> set[str]:
        return {t.anchor for t in self.tails}

    # -- predicates ------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.intervals and not self.tails

    def equals(self, other: "IntervalSet") -> bool:
        return self.intervals == other.intervals and self.tails == other.tails

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.equals(other)

    def __hash__(self):
        return hash((self.intervals, self.tails))

    def component_count(self) -> int:
        return len(self.intervals) + len(self.tails)

    def is_subset_of(self, other: "IntervalSet") -> bool:
        return self.subtract(other).is_empty()

    # -- measure ----------------------------------------------------------

    def measure(self) -> Scalar:
        p = Fraction(0)
        q = Fraction(0)
        tag = None
        for iv in self.intervals:
            p += iv.hi.p - iv.lo.p
            q += iv.hi.q - iv.lo.q
            if tag is None:
                tag = iv.lo.tag or iv.hi.tag
        for t in self.tails:
            p += Fraction(2, 3 * (1 << t.start))
        return Scalar(p, q, tag if q != 0 else None)

    # -- boolean algebra ---------------------------------------------------

    def _combine(self, other: "IntervalSet", op: str) -> "IntervalSet":
        anchors = self._anchors() | other._anchors()
        if not anchors:
            if op == "union":
                return IntervalSet(tuple(_sweep(self.intervals + other.intervals)))
            if op == "intersect":
                return IntervalSet(tuple(_finite_intersect(self.intervals,
                                                           other.intervals)))
            return IntervalSet(tuple(_finite_subtract(self.intervals,
                                                      other.intervals)))
        depths = _depths_for([self, other], anchors)
        ia, fa = _expand(self, depths)
        ib, fb = _expand(other, depths)
        if op == "union":
            ivs = _sweep(ia + ib)
            fl = {k: fa[k] or fb[k] for k in fa}
        elif op == "intersect":
            ivs = _finite_intersect(ia, ib)
            fl = {k: fa[k] and fb[k] for k in fa}
        else:
            ivs = _finite_subtract(ia, ib)
            fl = {k: fa[k] and not fb[k] for k in fa}
        return _collapse(ivs, fl, depths)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, "union")

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, "intersect")

    def subtract(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, "subtract")

    def complement(self) -> "IntervalSet":
        if not self.tails:
            return IntervalSet(tuple(_finite_complement(self.intervals, ZERO, ONE)))
        anchors = self._anchors()
        depths = _depths_for([self], anchors)
        ivs, fl = _expand(self, depths)
        core_lo = _half(depths[AT_ZERO]) if AT_ZERO in depths else ZERO
        core_hi = ONE - _half(depths[AT_ONE]) if AT_ONE in depths else ONE
        ivc = _finite_complement(ivs, core_lo, core_hi)
        flc = {k: not v for k, v in fl.items()}
        return _collapse(ivc, flc, depths)

    # -- geometry -----------------------------------------------------------

    def translate_mod1(self, t: Scalar) -> "IntervalSet":
        if self.tails:
            raise UnsupportedRepresentationError(
                "translation of parity tails is not representable")
        out: list[Interval] = []
        for iv in self.intervals:
            length = iv.hi - iv.lo
            lo = (iv.lo + t).mod1()
            hi = lo + length
            if hi <= ONE:
                out.append(Interval(lo, hi))
            else:
                out.append(Interval(lo, ONE))
                out.append(Interval(ZERO, hi - ONE))
        return IntervalSet(tuple(_sweep(out)))

    # -- text form ------------------------------------------------------------

    def to_text(self) -> str:
        if self.is_empty():
            return "empty"
        parts = [iv.to_text() for iv in self.intervals]
        parts += [t.to_text() for t in sorted(self.tails,
                                              key=lambda t: (t.anchor, t.start))]
        return ", ".join(parts)

    def __repr__(self):
        return f"IntervalSet({self.to_text()!r})"


class _TailProbe:
    """Duck-typed stand-in carrying unnormalized intervals and tails through
    the expansion machinery during ``IntervalSet.build``."""

    __slots__ = ("intervals", "tails")

    def __init__(self, intervals, tails):
        self.intervals = intervals
        self.tails = tails


EMPTY = IntervalSet()
FULL = IntervalSet((Interval(ZERO, ONE),))


def make_set(pairs: Iterable[tuple], tails: Iterable[ParityTail] = ()) -> IntervalSet:
    """Build a set from (lo, hi) pairs of Scalars/Fractions/ints."""
    ivs = []
    for lo, hi in pairs:
        lo = lo if isinstance(lo, Scalar) else Scalar(Fraction(lo))
        hi = hi if isinstance(hi, Scalar) else Scalar(Fraction(hi))
        ivs.append(Interval(lo, hi))
    return IntervalSet.build(ivs, tails)


_TAIL_RE = re.compile(
    r"^tail\(\s*(one|zero)\s*,\s*(\d+)\s*,\s*(even|odd)\s*\)$")


def from_text(text: str, tag: Optional[IrrationalTag] = None) -> IntervalSet:
    """Parse the serialization produced by ``IntervalSet.to_text``."""
    s = text.strip()
    if s in ("", "empty"):
        return EMPTY
    ivs: list[Interval] = []
    tails: list[ParityTail] = []
    # split on commas at parenthesis depth zero only: tail(...) has commas
    parts = re.split(r",(?![^()]*\))", s)
    for part in parts:
        part = part.strip()
        m = _TAIL_RE.match(part)
        if m:
            tails.append(ParityTail(m.group(1), int(m.group(2)), m.group(3)))
            continue
        if ".." not in part:
            raise ValueError(f"malformed set component {part!r}")
        lo_t, hi_t = part.split("..", 1)
        ivs.append(Interval(parse_scalar(lo_t, tag), parse_scalar(hi_t, tag)))
    return IntervalSet.build(ivs, tails)


def truncate_tails(s: IntervalSet, blocks: int) -> tuple[IntervalSet, Scalar]:
    """Replace each tail by its first `blocks` blocks.

    Returns the truncated set and an exact bound on the dropped measure,
    for experiments that drift outside the closed representation class.
    """
    ivs = list(s.intervals)
    dropped = Scalar(0)
    for t in s.tails:
        n = t.start
        for _ in range(blocks):
            ivs.append(_block(t.anchor, n))
            n += 2
        dropped = dropped + Scalar(Fraction(2, 3 * (1 << n)))
    return IntervalSet.build(ivs), dropped


# -- operation-style wrappers ------------------------------------------

def set_union(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    return s.union(t)


def set_intersect(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    return s.intersect(t)


def set_subtract(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    return s.subtract(t)


def set_complement(s: IntervalSet) -> IntervalSet:
    return s.complement()


def set_measure(s: IntervalSet) -> Scalar:
    return s.measure()


def set_translate_mod1(s: IntervalSet, t: Scalar) -> IntervalSet:
    return s.translate_mod1(t)


def set_equals(s: IntervalSet, t: IntervalSet) -> bool:
    return s.equals(t)


def set_is_empty(s: IntervalSet) -> bool:
    return s.is_empty()
