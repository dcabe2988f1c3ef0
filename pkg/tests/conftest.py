"""Shared oracles: direct enumerations the fast paths are checked against."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from powerword.words import Word


def all_binary_words(length):
    for val in range(1 << length):
        yield Word(tuple((val >> i) & 1 for i in range(length)), 2)


def random_word(rng: random.Random, max_len: int, max_sigma: int = 4) -> Word:
    sigma = rng.randint(2, max_sigma)
    n = rng.randint(1, max_len)
    return Word(tuple(rng.randrange(sigma) for _ in range(n)), sigma)


def oracle_smallest_period(w: Word) -> int:
    s = w.symbols
    n = len(s)
    for p in range(1, n + 1):
        if s[p:] == s[: n - p]:
            return p
    raise AssertionError("unreachable")


def oracle_runs(w: Word):
    """Maximal repetitions by scanning every period's match array."""
    s = w.symbols
    n = len(s)
    groups: dict[tuple[int, int], int] = {}
    for p in range(1, n // 2 + 1):
        run_start = -1
        for i in range(n - p + 1):
            match = i < n - p and s[i] == s[i + p]
            if match and run_start < 0:
                run_start = i
            elif not match and run_start >= 0:
                if i - run_start >= p:
                    key = (run_start, i + p)
                    if key not in groups or p < groups[key]:
                        groups[key] = p
                run_start = -1
    return sorted((st, en - st, p) for (st, en), p in groups.items())


def oracle_runs_substrings(w: Word):
    """Second, slower oracle: every substring, smallest period, maximality."""
    s = w.symbols
    n = len(s)
    out = []
    for a in range(n):
        for b in range(a + 2, n + 1):
            sub = s[a:b]
            p = next(q for q in range(1, b - a + 1) if sub[q:] == sub[: b - a - q])
            if (b - a) < 2 * p:
                continue
            if a > 0 and s[a - 1] == s[a - 1 + p]:
                continue
            if b < n and s[b] == s[b - p]:
                continue
            out.append((a, b - a, p))
    return sorted(out)


def oracle_defect(w: Word, p: int) -> int:
    """Minimum Hamming distance to any p-periodic word, by enumeration."""
    s = np.array(w.symbols)
    n = len(s)
    sigma = w.alphabet_size
    best = n + 1
    for val in range(sigma**p):
        base = []
        v = val
        for _ in range(p):
            base.append(v % sigma)
            v //= sigma
        tiled = np.resize(np.array(base), n)
        best = min(best, int(np.count_nonzero(tiled != s)))
    return best


def oracle_class_ids(intervals, n):
    """Class labeling straight from the definition, via union-find."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for start, length, period in intervals:
        for i in range(start, min(start + length, n)):
            j = i - period
            if j >= start:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    ids = {}
    out = []
    for i in range(n):
        root = find(i)
        if root not in ids:
            ids[root] = len(ids)
        out.append(ids[root])
    return out


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
