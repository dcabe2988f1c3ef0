"""Exact repetition analysis: runs, critical exponents and Hamming defects.

The fast paths here (divide-and-conquer run finding, incremental defect
sweeps) are checked in the test suite against direct enumeration oracles;
every reported figure is an exact integer or Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .words import Word, is_periodic

_SEP = -1
_SMALL_RUNS_CUTOFF = 256
_BRUTE_FORCE_GUARD = 4096


@dataclass(frozen=True)
class Run:
    """A maximal repetition: cannot be extended keeping its smallest period."""

    start: int
    length: int
    period: int
    exponent: Fraction


@dataclass(frozen=True)
class DefectRow:
    """Minimum Hamming defect over all windows of one length.

    ``period``/``start`` identify one window attaining the minimum (smallest
    defect, then smallest period, then smallest start).
    """

    length: int
    min_defect: int
    period: int
    start: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.min_defect, self.length)


def _z_array(a) -> list[int]:
    n = len(a)
    if n == 0:
        return []
    z = [0] * n
    z[0] = n
    l = r = 0
    for i in range(1, n):
        k = 0
        if i < r:
            k = z[i - l]
            if k > r - i:
                k = r - i
        while i + k < n and a[k] == a[i + k]:
            k += 1
        z[i] = k
        if i + k > r:
            l, r = i, i + k
    return z


def _collect_small(s, n, out) -> None:
    # direct per-period scan of the match array; fine up to a few hundred
    for p in range(1, n // 2 + 1):
        run_start = -1
        for i in range(n - p):
            if s[i] == s[i + p]:
                if run_start < 0:
                    run_start = i
            elif run_start >= 0:
                if i - run_start >= p:
                    out.add((run_start, i + p, p))
                run_start = -1
        if run_start >= 0 and (n - p) - run_start >= p:
            out.add((run_start, n, p))


def _collect_crossing(s, l, m, r, out) -> None:
    u = list(s[l:m])
    v = list(s[m:r])
    lu = len(u)
    lv = len(v)
    ru = u[::-1]
    z_ru = _z_array(ru)
    z_v = _z_array(v)
    z_v_u = _z_array(v + [_SEP] + u)
    z_ru_rv = _z_array(ru + [_SEP] + v[::-1])

    # periodicities whose period block is the last p symbols of u
    for p in range(1, lu + 1):
        k1 = z_ru[p] if p < lu else 0
        if k1 > lu - p:
            k1 = lu - p
        g = z_v_u[lv + 1 + lu - p]
        if g > lv:
            g = lv
        if g > p:
            g = p
        if g < p:
            rho = g
        else:
            rho = p + (z_v[p] if p < lv else 0)
            if rho > lv:
                rho = lv
        if k1 + rho >= p:
            out.add((l + lu - p - k1, m + rho, p))

    # periodicities whose period block is the first p symbols of v
    for p in range(1, lv + 1):
        rho = z_v[p] if p < lv else 0
        if rho > lv - p:
            rho = lv - p
        h = z_ru_rv[lu + 1 + lv - p]
        if h > lu:
            h = lu
        if h > p:
            h = p
        if h < p:
            lam = h
        else:
            lam = p + (z_ru[p] if p < lu else 0)
            if lam > lu:
                lam = lu
        if lam + rho >= p:
            out.add((m - lam, m + p + rho, p))


def maximal_repetitions(w: Word) -> list[Run]:
    """All maximal repetitions of exponent >= 2, with smallest periods.

    Sorted by (start, period). Uses a divide-and-conquer crossing scan for
    long words and a direct quadratic scan for short ones; both paths are
    equivalent to the brute-force oracle used in the tests.
    """
    s = w.symbols
    n = len(s)
    if n < 2:
        return []
    cands: set[tuple[int, int, int]] = set()
    if n <= _SMALL_RUNS_CUTOFF:
        _collect_small(s, n, cands)
        groups: dict[tuple[int, int], int] = {}
        for st, en, p in cands:
            key = (st, en)
            q = groups.get(key)
            if q is None or p < q:
                groups[key] = p
    else:
        stack = [(0, n)]
        while stack:
            l, r = stack.pop()
            if r - l < 2:
                continue
            m = (l + r) // 2
            stack.append((l, m))
            stack.append((m, r))
            _collect_crossing(s, l, m, r, cands)
        groups = {}
        for st, en, p in cands:
            # keep only periodicities maximal in the full word
            if st > 0 and s[st - 1] == s[st - 1 + p]:
                continue
            if en < n and s[en] == s[en - p]:
                continue
            key = (st, en)
            q = groups.get(key)
            if q is None or p < q:
                groups[key] = p
    runs = [
        Run(st, en - st, p, Fraction(en - st, p)) for (st, en), p in groups.items()
    ]
    runs.sort(key=lambda rn: (rn.start, rn.period))
    return runs


def _max_exponent_all_substrings(s, n) -> Fraction:
    # exact max of length/smallest-period over all substrings via border
    # tables of every suffix; quadratic, used only when the word has no runs
    best_n, best_d = 1, 1
    for i in range(n):
        m = n - i
        border = [0] * m
        k = 0
        for t in range(1, m):
            c = s[i + t]
            while k and s[i + k] != c:
                k = border[k - 1]
            if s[i + k] == c:
                k += 1
            border[t] = k
            length = t + 1
            p = length - k
            if length * best_d > best_n * p:
                best_n, best_d = length, p
    return Fraction(best_n, best_d)


def critical_exponent(w: Word) -> Fraction:
    """Largest exponent attained by any repetition inside w.

    Words shorter than 2 have critical exponent 1 by convention. If any
    repetition of exponent >= 2 exists the maximum is attained by a run;
    otherwise an exhaustive substring scan covers exponents below 2.
    """
    n = len(w.symbols)
    if n < 2:
        return Fraction(1)
    runs = maximal_repetitions(w)
    if runs:
        return max(r.exponent for r in runs)
    return _max_exponent_all_substrings(w.symbols, n)


def brute_force_critical_exponent(w: Word) -> Fraction:
    """Independent cubic oracle: scan every substring and every period.

    Guarded at |w| <= 4096 to keep oracle comparisons affordable. The scan
    skips (substring, period) pairs that provably cannot beat the running
    maximum; the returned value is exact.
    """
    s = w.symbols
    n = len(s)
    if n > _BRUTE_FORCE_GUARD:
        raise ValueError(f"brute-force oracle guarded at length {_BRUTE_FORCE_GUARD}")
    if n < 2:
        return Fraction(1)
    # seed with the best period-1 repetition (longest block of one symbol)
    best_n, best_d = 1, 1
    run = 1
    for i in range(1, n):
        run = run + 1 if s[i] == s[i - 1] else 1
        if run > best_n:
            best_n = run
    for i in range(n):
        for j in range(i + 2, n + 1):
            length = j - i
            # only periods with length/p > best_n/best_d can improve
            p_cap = (length * best_d - 1) // best_n
            if p_cap >= length:
                p_cap = length - 1
            for p in range(1, p_cap + 1):
                ok = True
                for t in range(i, j - p):
                    if s[t] != s[t + p]:
                        ok = False
                        break
                if ok:
                    best_n, best_d = length, p
                    break
    return Fraction(best_n, best_d)


def defect_to_periodic(w: Word, p: int) -> int:
    """Minimum symbol changes making w p-periodic.

    Each residue class mod p is repaired independently to its majority
    symbol, so the cost is sum(class size - max symbol frequency).
    """
    s = w.symbols
    n = len(s)
    if p < 1 or p > n:
        raise ValueError(f"period {p} out of range for word of length {n}")
    total = 0
    for r in range(p):
        cls = s[r::p]
        counts: dict[int, int] = {}
        for sym in cls:
            counts[sym] = counts.get(sym, 0) + 1
        total += len(cls) - max(counts.values())
    return total


def approximate_power_defect(w: Word, beta: Fraction) -> tuple[int, int] | None:
    """Smallest defect over all periods admitting exponent >= beta.

    Returns (defect, period) with ties broken toward the smallest period,
    or None when no period p with |w|/p >= beta exists.
    """
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    n = len(w.symbols)
    if n < 2:
        raise ValueError("word must have length >= 2")
    p_max = (n * beta.denominator) // beta.numerator
    if p_max < 1:
        return None
    best: tuple[int, int] | None = None
    for p in range(1, p_max + 1):
        d = defect_to_periodic(w, p)
        if best is None or d < best[0]:
            best = (d, p)
            if d == 0:
                break
    return best


def check_period_difference(w: Word, t1: int, t2: int) -> bool:
    """Verify the derived period t1 - t2 near both endpoints.

    Preconditions (raising ValueError when violated): t1 > t2 >= 1, the word
    has both periods and |w| >= t1. When they hold, the prefix and suffix of
    length |w| - t2 are checked for period t1 - t2; the expected outcome is
    always True, so the return value doubles as a self-test of the lemma.
    """
    n = len(w.symbols)
    if not (t1 > t2 >= 1):
        raise ValueError("need t1 > t2 >= 1")
    if n < t1:
        raise ValueError("need |w| >= t1")
    if not is_periodic(w, t1):
        raise ValueError(f"{t1} is not a period of the word")
    if not is_periodic(w, t2):
        raise ValueError(f"{t2} is not a period of the word")
    d = t1 - t2
    m = n - t2
    s = w.symbols
    pre = s[:m]
    suf = s[n - m :]
    pre_ok = pre[d:] == pre[: m - d] if d < m else True
    suf_ok = suf[d:] == suf[: m - d] if d < m else True
    return pre_ok and suf_ok


# ---------------------------------------------------------------------------
# sliding-window defect sweep


def _min_defect_for_length(s, n, sigma, length, p_max):
    best = None  # (defect, period, start)
    for p in range(1, p_max + 1):
        counts = [[0] * sigma for _ in range(p)]
        size = [0] * p
        mx = [0] * p
        for i in range(length):
            r = i % p
            c = counts[r]
            c[s[i]] += 1
            size[r] += 1
            if c[s[i]] > mx[r]:
                mx[r] = c[s[i]]
        defect = length - sum(mx)
        if best is None or defect < best[0]:
            best = (defect, p, 0)
            if defect == 0:
                return best
        for start in range(1, n - length + 1):
            out_pos = start - 1
            in_pos = start - 1 + length
            r1 = out_pos % p
            c1 = counts[r1]
            sym1 = s[out_pos]
            old_contrib = size[r1] - mx[r1]
            c1[sym1] -= 1
            size[r1] -= 1
            if c1[sym1] + 1 == mx[r1]:
                mx[r1] = max(c1) if size[r1] else 0
            defect += (size[r1] - mx[r1]) - old_contrib
            r2 = in_pos % p
            c2 = counts[r2]
            sym2 = s[in_pos]
            old_contrib = size[r2] - mx[r2]
            c2[sym2] += 1
            size[r2] += 1
            if c2[sym2] > mx[r2]:
                mx[r2] = c2[sym2]
            defect += (size[r2] - mx[r2]) - old_contrib
            if defect < best[0]:
                best = (defect, p, start)
                if defect == 0:
                    return best
    return best


def power_defect_sweep(w: Word, beta: Fraction, lengths) -> list[DefectRow]:
    """Per window length, the minimum defect to any power of exponent >= beta.

    Equivalent to minimizing approximate_power_defect over all windows of
    each length, but computed with incremental residue-class counts.
    Lengths admitting no candidate period are skipped.
    """
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    s = w.symbols
    n = len(s)
    rows: list[DefectRow] = []
    for length in lengths:
        if length < 2 or length > n:
            continue
        p_max = (length * beta.denominator) // beta.numerator
        if p_max < 1:
            continue
        best = _min_defect_for_length(s, n, w.alphabet_size, length, p_max)
        rows.append(DefectRow(length, best[0], best[1], best[2]))
    return rows


def sweep_lengths(min_len: int, n: int) -> list[int]:
    """Doubling grid of window lengths from min_len up to and including n."""
    if min_len < 2:
        min_len = 2
    out = []
    length = min_len
    while length < n:
        out.append(length)
        length *= 2
    if n >= min_len:
        out.append(n)
    return out
