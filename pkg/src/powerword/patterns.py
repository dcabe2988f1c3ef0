"""Repetition patterns: implanted fractional powers with prescribed gaps.

A pattern is a sorted list of disjoint active intervals. Inside an interval
of length p and period q, positions are equivalent when they differ by a
multiple of q; every other position is a free singleton. Class ids follow
the increasing order of class minima.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .words import Word


@dataclass(frozen=True)
class ActiveInterval:
    start: int
    length: int   # p: interval length
    period: int   # q: implanted period
    exponent: Fraction  # length / period, exact

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class RepetitionPattern:
    intervals: tuple[ActiveInterval, ...]
    layout_len: int

    def __post_init__(self) -> None:
        prev_end = -1
        for iv in self.intervals:
            if iv.start <= prev_end:
                raise ValueError("intervals must be disjoint and sorted")
            if iv.period < 1 or iv.length <= iv.period:
                raise ValueError("interval needs length > period >= 1")
            if iv.exponent != Fraction(iv.length, iv.period):
                raise ValueError("interval exponent must equal length/period")
            prev_end = iv.end - 1


@dataclass(frozen=True)
class ClassMap:
    """Materialized equivalence classes for a word prefix [0, n)."""

    n: int
    ids: tuple[int, ...]             # position -> class id
    members: tuple[tuple[int, ...], ...]  # class id -> positions in [0, n)

    @property
    def class_count(self) -> int:
        return len(self.members)


def enumerate_exponents(alpha: Fraction, k: int) -> list[Fraction]:
    """First k implant exponents approaching alpha from below.

    Step i scans denominators q over multiples of lcm(i!, den(alpha)) so
    that alpha*q is an integer, takes p = alpha*q - 1 (the largest numerator
    below alpha), and keeps the first reduced fraction p/q that exceeds the
    previous exponent. Hence den(r_i) is a multiple of i! and
    r_i = alpha - 1/q_i -> alpha.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    an, ad = alpha.numerator, alpha.denominator
    out: list[Fraction] = []
    prev = Fraction(1)
    fact = 1
    for i in range(1, k + 1):
        fact *= i
        step = fact * ad // math.gcd(fact, ad)
        q = step
        for _ in range(10**6):
            p = an * q // ad - 1
            if p > q and p * prev.denominator > prev.numerator * q and math.gcd(p, q) == 1:
                break
            q += step
        else:  # pragma: no cover - unreachable for rational alpha > 1
            raise RuntimeError("no admissible exponent found")
        r = Fraction(p, q)
        out.append(r)
        prev = r
    return out


def layout_intervals(rationals, gap_factor: int = 10) -> RepetitionPattern:
    """Place one interval per exponent with strictly growing gaps.

    The gap before interval i (1-based) is gap_factor * i * (p_{i-1} + p_i),
    so gaps outgrow neighboring interval lengths without bound.
    """
    if gap_factor < 1:
        raise ValueError("gap_factor must be >= 1")
    pos = 0
    prev_p = 0
    intervals = []
    for i, r in enumerate(rationals, start=1):
        p, q = r.numerator, r.denominator
        gap = gap_factor * i * (prev_p + p)
        start = pos + gap
        intervals.append(ActiveInterval(start, p, q, r))
        pos = start + p
        prev_p = p
    return RepetitionPattern(tuple(intervals), pos)


def _interval_at(pattern: RepetitionPattern, i: int) -> ActiveInterval | None:
    ivs = pattern.intervals
    idx = bisect_right([iv.start for iv in ivs], i) - 1
    if idx >= 0 and i < ivs[idx].end:
        return ivs[idx]
    return None


def _nonminima_below(pattern: RepetitionPattern, x: int) -> int:
    # positions below x that are not the minimum of their class
    total = 0
    for iv in pattern.intervals:
        if x <= iv.start + iv.period:
            break
        total += min(x, iv.end) - iv.start - iv.period
    return total


def class_of(pattern: RepetitionPattern, i: int) -> int:
    """Class id of position i; ids follow increasing class minima."""
    if i < 0:
        raise ValueError("positions are nonnegative")
    iv = _interval_at(pattern, i)
    m = i if iv is None else iv.start + (i - iv.start) % iv.period
    return m - _nonminima_below(pattern, m)


def class_members(pattern: RepetitionPattern, class_id: int) -> list[int]:
    """All positions in the class with the given id."""
    if class_id < 0:
        raise ValueError("class ids are nonnegative")
    # walk segments in order of minima until the id-th minimum is reached
    remaining = class_id
    cursor = 0
    for iv in pattern.intervals:
        gap = iv.start - cursor
        if remaining < gap:
            return [cursor + remaining]
        remaining -= gap
        if remaining < iv.period:
            m = iv.start + remaining
            return list(range(m, iv.end, iv.period))
        remaining -= iv.period
        cursor = iv.end
    return [cursor + remaining]


def free_bit_count(pattern: RepetitionPattern, a: int, b: int) -> int:
    """Number of distinct classes meeting the window [a, b)."""
    if not 0 <= a < b:
        raise ValueError("need 0 <= a < b")
    total = b - a
    for iv in pattern.intervals:
        overlap = min(b, iv.end) - max(a, iv.start)
        if overlap > iv.period:
            total -= overlap - iv.period
    return total


def build_class_map(pattern: RepetitionPattern, n: int) -> ClassMap:
    """Materialize class ids and member lists for positions [0, n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    ids = [0] * n
    members: list[list[int]] = []
    ivs = pattern.intervals
    idx = 0
    for i in range(n):
        while idx < len(ivs) and ivs[idx].end <= i:
            idx += 1
        if idx < len(ivs) and ivs[idx].start <= i < ivs[idx].end:
            iv = ivs[idx]
            off = i - iv.start
            if off < iv.period:
                cid = len(members)
                members.append([i])
            else:
                cid = ids[i - iv.period]
                members[cid].append(i)
        else:
            cid = len(members)
            members.append([i])
        ids[i] = cid
    return ClassMap(n, tuple(ids), tuple(tuple(m) for m in members))


def min_free_density(pattern: RepetitionPattern, n: int, min_len: int) -> Fraction:
    """Exact minimum of free_bit_count/length over windows of length >= min_len.

    Candidate windows have an edge aligned with an interval boundary (or are
    forced to exactly min_len); sliding an unaligned window toward a boundary
    never decreases the repeated-position count per unit length. Returns 1
    when no window fits.
    """
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if n < min_len:
        return Fraction(1)
    best = Fraction(1)
    ivs = [iv for iv in pattern.intervals if iv.start < n]

    def consider(a: int, b: int) -> None:
        nonlocal best
        length = b - a
        if length < min_len:
            pad = min_len - length
            b = min(n, b + pad)
            a = max(0, a - (min_len - (b - a)))
            length = b - a
            if length < min_len:
                return
        d = Fraction(free_bit_count(pattern, a, b), length)
        if d < best:
            best = d

    for j, left in enumerate(ivs):
        for right in ivs[j:]:
            a0 = left.start
            b0 = min(right.end, n)
            if a0 >= b0:
                continue
            span = b0 - a0
            length = max(min_len, span)
            # left edge anchored / right edge anchored placements
            consider(a0, min(n, a0 + length))
            consider(max(0, b0 - length), b0)
    return best


def periodic_layer(M: int, n: int) -> Word:
    """Word i -> i mod M; its only periods below n are multiples of M."""
    if M < 2:
        raise ValueError("layer period must be >= 2")
    return Word(tuple(i % M for i in range(n)), M)


#: bracket layer symbols
BRACKET_BLANK, BRACKET_OPEN, BRACKET_CLOSE = 0, 1, 2


def bracket_layer(pattern: RepetitionPattern, n: int) -> Word:
    """Mark interval endpoints on a 3-letter track (blank/open/close).

    Intervals beyond the word are ignored; a close mark falling outside
    [0, n) is dropped.
    """
    syms = [BRACKET_BLANK] * n
    for iv in pattern.intervals:
        if iv.start < n:
            syms[iv.start] = BRACKET_OPEN
            last = iv.end - 1
            if last < n:
                syms[last] = BRACKET_CLOSE
    return Word(tuple(syms), 3)


def materialize(pattern: RepetitionPattern, tau, n: int) -> Word:
    """Binary word whose position i carries the bit of its class.

    tau is indexed by class id and must cover every class meeting [0, n).
    """
    cmap = build_class_map(pattern, n)
    if len(tau) < cmap.class_count:
        raise ValueError(
            f"assignment covers {len(tau)} classes, {cmap.class_count} required"
        )
    syms = tuple(tau[cid] for cid in cmap.ids)
    return Word(syms, 2)
