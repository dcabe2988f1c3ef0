import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerword.patterns import (
    ActiveInterval,
    RepetitionPattern,
    bracket_layer,
    build_class_map,
    class_members,
    class_of,
    enumerate_exponents,
    free_bit_count,
    layout_intervals,
    materialize,
    min_free_density,
    periodic_layer,
)
from powerword.words import Word, cartesian_product, is_periodic, smallest_period
from conftest import oracle_class_ids


def pat(*triples):
    ivs = tuple(
        ActiveInterval(s, p, q, Fraction(p, q)) for s, p, q in triples
    )
    end = ivs[-1].end if ivs else 0
    return RepetitionPattern(ivs, end)


# random small patterns for property tests
@st.composite
def patterns(draw):
    triples = []
    pos = draw(st.integers(0, 3))
    for _ in range(draw(st.integers(0, 3))):
        q = draw(st.integers(1, 4))
        p = q + draw(st.integers(1, 6))
        triples.append((pos, p, q))
        pos += p + draw(st.integers(1, 8))
    return pat(*triples)


def test_enumerate_examples():
    assert enumerate_exponents(Fraction(3, 2), 2) == [Fraction(5, 4), Fraction(11, 8)]
    assert enumerate_exponents(Fraction(2), 1) == [Fraction(3, 2)]


def test_enumerate_monotone_and_bounded():
    for alpha in (Fraction(3, 2), Fraction(7, 5), Fraction(2), Fraction(9, 4)):
        rs = enumerate_exponents(alpha, 5)
        assert all(a < b for a, b in zip(rs, rs[1:]))
        assert all(1 < r < alpha for r in rs)
        for i, r in enumerate(rs, start=1):
            assert r.denominator % math.factorial(i) == 0


def test_enumerate_validates():
    with pytest.raises(ValueError):
        enumerate_exponents(Fraction(1), 1)
    with pytest.raises(ValueError):
        enumerate_exponents(Fraction(3, 2), 0)


def test_layout_examples():
    p1 = layout_intervals([Fraction(5, 4)], gap_factor=10)
    assert p1.intervals[0] == ActiveInterval(50, 5, 4, Fraction(5, 4))
    p2 = layout_intervals([Fraction(5, 4), Fraction(11, 8)], gap_factor=10)
    first, second = p2.intervals
    assert second.start - first.end == 320
    assert p2.layout_len == second.end


def test_layout_gap_dominance():
    rs = enumerate_exponents(Fraction(3, 2), 4)
    pattern = layout_intervals(rs, gap_factor=3)
    prev_end = 0
    prev_p = 0
    for i, iv in enumerate(pattern.intervals, start=1):
        gap = iv.start - prev_end
        assert gap == 3 * i * (prev_p + iv.length)
        prev_end = iv.end
        prev_p = iv.length


def test_class_of_examples():
    pattern = pat((50, 5, 4))
    assert class_of(pattern, 50) == class_of(pattern, 54)
    assert class_members(pattern, class_of(pattern, 50)) == [50, 54]
    # positions outside intervals are singletons
    assert class_members(pattern, class_of(pattern, 10)) == [10]
    # ids sorted by minimal element and constant on classes
    assert class_of(pattern, 0) == 0
    ids = [class_of(pattern, i) for i in range(60)]
    minima = {}
    for i, c in enumerate(ids):
        minima.setdefault(c, i)
    order = [minima[c] for c in sorted(minima)]
    assert order == sorted(order)


@settings(max_examples=40)
@given(patterns(), st.integers(1, 60))
def test_class_map_matches_union_find_oracle(pattern, n):
    triples = [(iv.start, iv.length, iv.period) for iv in pattern.intervals]
    expect = oracle_class_ids(triples, n)
    cmap = build_class_map(pattern, n)
    assert list(cmap.ids) == expect
    for i in range(n):
        assert class_of(pattern, i) == cmap.ids[i]
    for cid, members in enumerate(cmap.members):
        full = class_members(pattern, cid)
        assert [m for m in full if m < n] == list(members)


def test_free_bit_count_examples():
    pattern = pat((50, 5, 4))
    assert free_bit_count(pattern, 0, 10) == 10
    assert free_bit_count(pattern, 50, 55) == 4
    assert free_bit_count(pattern, 50, 60) == 9


@settings(max_examples=40)
@given(patterns(), st.integers(0, 40), st.integers(1, 20), st.integers(1, 20))
def test_free_bit_count_matches_classes(pattern, a, la, lb):
    b = a + la
    c = b + lb
    cmap = build_class_map(pattern, c)

    def count(x, y):
        return len({cmap.ids[i] for i in range(x, y)})

    assert free_bit_count(pattern, a, b) == count(a, b)
    # additivity with equality iff no class spans the cut
    lhs = free_bit_count(pattern, a, b) + free_bit_count(pattern, b, c)
    rhs = free_bit_count(pattern, a, c)
    assert lhs >= rhs
    spanning = any(
        any(m < b for m in members) and any(m >= b for m in members)
        for members in (
            [i for i in range(a, c) if cmap.ids[i] == cid]
            for cid in {cmap.ids[i] for i in range(a, c)}
        )
    )
    assert (lhs == rhs) == (not spanning)


def brute_min_density(pattern, n, min_len):
    best = Fraction(1)
    for a in range(n):
        for b in range(a + min_len, n + 1):
            d = Fraction(free_bit_count(pattern, a, b), b - a)
            if d < best:
                best = d
    return best


def test_min_free_density_examples():
    assert min_free_density(pat(), 100, 5) == Fraction(1)
    pattern = pat((50, 5, 4))
    assert min_free_density(pattern, 100, 5) == Fraction(4, 5)


def test_min_free_density_matches_brute(rng):
    for _ in range(40):
        triples = []
        pos = rng.randint(0, 4)
        for _ in range(rng.randint(0, 3)):
            q = rng.randint(1, 4)
            p = q + rng.randint(1, 7)
            triples.append((pos, p, q))
            pos += p + rng.randint(1, 9)
        pattern = pat(*triples)
        n = rng.randint(1, 70)
        min_len = rng.randint(1, 20)
        assert min_free_density(pattern, n, min_len) == brute_min_density(
            pattern, n, min_len
        )


def test_density_theorem_desk_scale():
    # layouts with gap_factor >= 2 keep density >= 1/alpha for long windows
    for alpha in (Fraction(3, 2), Fraction(7, 4)):
        for gf in (2, 5):
            rs = enumerate_exponents(alpha, 2)
            pattern = layout_intervals(rs, gap_factor=gf)
            n = min(512, pattern.layout_len + 10)
            min_len = max(iv.length for iv in pattern.intervals)
            structural = min_free_density(pattern, n, min_len)
            assert structural == brute_min_density(pattern, n, min_len)
            assert structural >= 1 / alpha


def test_periodic_layer_examples():
    assert periodic_layer(3, 7).to_text() == "0120120"
    for M in (2, 3, 5):
        layer = periodic_layer(M, 40)
        assert smallest_period(layer) == M
        for p in range(1, 40):
            assert is_periodic(layer, p) == (p % M == 0)
    with pytest.raises(ValueError):
        periodic_layer(1, 5)


def test_bracket_layer_examples():
    assert bracket_layer(pat(), 4).to_text() == "0000"
    layer = bracket_layer(pat((2, 3, 2)), 7)  # start 2, p 3, q 2
    assert layer.to_text() == "0010200"
    # intervals beyond n are ignored / clipped
    layer = bracket_layer(pat((2, 3, 2), (30, 4, 2)), 7)
    assert layer.to_text() == "0010200"


def test_bracket_layer_breaks_periods():
    pattern = pat((2, 3, 2))
    binary = Word((0,) * 8, 2)
    prod = cartesian_product(binary, bracket_layer(pattern, 8))
    # period 1 would need the bracket layer constant
    assert not is_periodic(prod, 1)
    assert not is_periodic(prod, 2)


def test_materialize_examples():
    pattern = pat((0, 5, 4))
    w = materialize(pattern, [0, 1, 1, 0], 5)
    assert w.to_text() == "01100"
    assert is_periodic(w, 4)
    all_zero = materialize(pattern, [0, 0, 0, 0], 5)
    assert all_zero.to_text() == "00000"


def test_materialize_interval_periodicity_random(rng):
    pattern = pat((3, 7, 3), (20, 5, 2))
    n = 30
    cmap = build_class_map(pattern, n)
    for _ in range(20):
        tau = [rng.randint(0, 1) for _ in range(cmap.class_count)]
        w = materialize(pattern, tau, n)
        for iv in pattern.intervals:
            sub = Word(w.symbols[iv.start : iv.end], 2)
            assert is_periodic(sub, iv.period)


def test_materialize_missing_classes():
    pattern = pat((0, 5, 4))
    with pytest.raises(ValueError):
        materialize(pattern, [0, 1], 5)


def test_pattern_validation():
    with pytest.raises(ValueError):
        pat((0, 5, 4), (3, 5, 4))  # overlap
    with pytest.raises(ValueError):
        pat((0, 4, 4))  # length must exceed period
