"""Event systems with intersection dependency, and constraint-avoiding fill.

The engine works with variable-based bad events: each event has a support
(set of variable indices), an exact rational probability and an exact
epsilon. ``check_asymmetric_condition`` decides, without floating point,
whether Pr[A_i] <= eps_i * prod_{j in N(i), j != i} (1 - eps_j) holds for
every event, where neighbors are events with intersecting supports.

``resample_fill`` constructively produces an assignment avoiding every
window-power event: initialize all variables from the pinned generator,
then repeatedly redraw the support of the violated event with the smallest
(start, period) until none remains.

Pinned pseudorandom generator (64-bit xorshift): starting from the seed
(seed 0 is replaced by 0x9E3779B97F4A7C15), each step updates
``s ^= s << 13; s ^= s >> 7; s ^= s << 17`` in 64-bit arithmetic and
emits the top bit ``(s >> 63) & 1``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dyadic import log2_bounds, pow2_bounds
from .patterns import RepetitionPattern, build_class_map

_MASK64 = (1 << 64) - 1
_SEED0_SUBSTITUTE = 0x9E3779B97F4A7C15
_SCAN_CAP = 8  # vectorized neighborhood radius before falling back to walks


@dataclass(frozen=True)
class Event:
    support: tuple[int, ...]
    probability: Fraction
    epsilon: Fraction
    tag: object = None


@dataclass(frozen=True)
class EventSystem:
    variable_count: int
    events: tuple[Event, ...]

    def __post_init__(self) -> None:
        if self.variable_count < 1:
            raise ValueError("variable_count must be >= 1")
        for ev in self.events:
            if not ev.support:
                raise ValueError("event supports must be nonempty")
            if min(ev.support) < 0 or max(ev.support) >= self.variable_count:
                raise ValueError("support index out of range")
            if not (0 <= ev.probability <= 1):
                raise ValueError("probabilities must lie in [0, 1]")
            if not (0 < ev.epsilon < 1):
                raise ValueError("epsilons must lie in (0, 1)")


@dataclass(frozen=True)
class SlackRow:
    """Per-event record: exact inputs plus a certified log2 margin bracket."""

    tag: object
    probability: Fraction
    epsilon: Fraction
    neighbor_count: int
    satisfied: bool
    margin_lo: float
    margin_hi: float


@dataclass(frozen=True)
class ConditionReport:
    satisfied: bool
    rows: tuple[SlackRow, ...]


@dataclass(frozen=True)
class ResampleTrace:
    rounds: int
    resampled_events: tuple[tuple[int, int], ...]
    seed: int


class ResampleFailure(Exception):
    """Raised when max_rounds is exhausted; carries the partial trace."""

    def __init__(self, trace: ResampleTrace):
        super().__init__(f"no violation-free assignment after {trace.rounds} rounds")
        self.trace = trace


class Xorshift64:
    """The pinned shift-register generator (see module docstring)."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK64) or _SEED0_SUBSTITUTE

    def bit(self) -> int:
        s = self.state
        s ^= (s << 13) & _MASK64
        s ^= s >> 7
        s ^= (s << 17) & _MASK64
        self.state = s
        return (s >> 63) & 1


# ---------------------------------------------------------------------------
# asymmetric condition


def _log2_cached(cache, value: Fraction, prec: int):
    key = (value, prec)
    got = cache.get(key)
    if got is None:
        got = log2_bounds(value, prec)
        cache[key] = got
    return got


def check_asymmetric_condition(system: EventSystem) -> ConditionReport:
    """Exact verdict of the per-event inequality, with a slack report.

    The verdict is decided with certified rational brackets of the log2
    sides (refined until they separate) and falls back to exact fraction
    products for ties, so no floating point ever enters the decision.
    """
    events = system.events
    masks = []
    for ev in events:
        m = 0
        for v in ev.support:
            m |= 1 << v
        masks.append(m)
    cache: dict = {}
    rows = []
    all_ok = True
    for i, ev in enumerate(events):
        mi = masks[i]
        neigh = [j for j, mj in enumerate(masks) if j != i and (mi & mj)]
        if ev.probability == 0:
            rows.append(
                SlackRow(ev.tag, ev.probability, ev.epsilon, len(neigh), True,
                         math.inf, math.inf)
            )
            continue
        if not neigh:
            ok = ev.probability <= ev.epsilon
            ratio = ev.epsilon / ev.probability
            mlo, mhi = log2_bounds(ratio, 32)
            rows.append(
                SlackRow(ev.tag, ev.probability, ev.epsilon, 0, ok,
                         float(mlo), float(mhi))
            )
            all_ok &= ok
            continue
        eps_counts: dict[Fraction, int] = {}
        for j in neigh:
            e = events[j].epsilon
            eps_counts[e] = eps_counts.get(e, 0) + 1
        ok = None
        mlo = mhi = None
        prec = 64
        while prec <= 512:
            lhs_lo, lhs_hi = _log2_cached(cache, ev.probability, prec)
            r_lo, r_hi = _log2_cached(cache, ev.epsilon, prec)
            for e, cnt in eps_counts.items():
                t_lo, t_hi = _log2_cached(cache, 1 - e, prec)
                r_lo += cnt * t_lo
                r_hi += cnt * t_hi
            mlo, mhi = r_lo - lhs_hi, r_hi - lhs_lo
            if lhs_hi <= r_lo:
                ok = True
                break
            if lhs_lo > r_hi:
                ok = False
                break
            prec *= 2
        if ok is None:
            # brackets would not separate: the sides may be exactly equal
            rhs = ev.epsilon
            for e, cnt in eps_counts.items():
                rhs *= (1 - e) ** cnt
            ok = ev.probability <= rhs
        rows.append(
            SlackRow(ev.tag, ev.probability, ev.epsilon, len(neigh), ok,
                     float(mlo), float(mhi))
        )
        all_ok &= ok
    return ConditionReport(bool(all_ok), tuple(rows))


# ---------------------------------------------------------------------------
# threshold


def threshold_N(gamma: Fraction, beta: Fraction) -> int:
    """Smallest N >= 1 with 2**(beta-1) <= 1 - sum_{m>N} 2**((gamma-beta)m).

    The geometric tail is evaluated in closed form with outward-rounded
    dyadic brackets, so the returned N is certified: the inequality holds
    at N and (for N > 1) fails at N - 1.
    """
    gamma = Fraction(gamma)
    beta = Fraction(beta)
    if not (0 < gamma < beta < 1):
        raise ValueError("need 0 < gamma < beta < 1")
    lhs_exp = beta - 1
    x_exp = gamma - beta

    def verdict(n: int, prec: int):
        lhs_lo, lhs_hi = pow2_bounds(lhs_exp, prec)
        x_lo, x_hi = pow2_bounds(x_exp, prec)
        if x_hi >= 1:
            return None
        tail_hi = x_hi ** (n + 1) / (1 - x_hi)
        tail_lo = x_lo ** (n + 1) / (1 - x_lo)
        if lhs_hi <= 1 - tail_hi:
            return True
        if lhs_lo > 1 - tail_lo:
            return False
        return None

    def decide(n: int) -> bool:
        prec = 64
        while True:
            v = verdict(n, prec)
            if v is not None:
                return v
            prec *= 2
            if prec > 1 << 14:  # pragma: no cover - inequality is never tight
                raise ArithmeticError("threshold bracket did not separate")

    n = 1
    while True:
        if decide(n):
            assert n == 1 or not decide(n - 1)
            return n
        n += 1
        if n > 10**5:
            raise ArithmeticError("threshold exceeds supported range")


# ---------------------------------------------------------------------------
# window-power event family


def _window_geometry(n: int, beta: Fraction, p_min: int):
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    if p_min < 1:
        raise ValueError("p_min must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    bn, bd = beta.numerator, beta.denominator
    p_max = (n * bd) // bn
    win_len = {p: (bn * p + bd - 1) // bd for p in range(p_min, p_max + 1)}
    return p_max, win_len


def build_power_events(
    pattern: RepetitionPattern,
    n: int,
    beta: Fraction,
    p_min: int = 1,
    beta_prime: Fraction | None = None,
) -> EventSystem:
    """One bad event per (start, period): the window is an exact power.

    For each period p in [p_min, n/beta] and each start s, the event says
    the window of length ceil(beta*p) at s is p-periodic. Variables are the
    pattern's equivalence classes; the probability is 2**-c where c is the
    number of independent class equalities the window forces beyond the
    pattern, and events the pattern already forces (c = 0) are excluded.
    Epsilons are 2**-ceil(beta_prime * support_size); when beta_prime is
    omitted it defaults to nine tenths of the way from the family's largest
    constraints/support ratio up to 1.
    """
    p_max, win_len = _window_geometry(n, beta, p_min)
    cmap = build_class_map(pattern, n)
    ids = cmap.ids
    raw = []
    for p in range(p_min, p_max + 1):
        length = win_len[p]
        for s in range(0, n - length + 1):
            support = sorted(set(ids[s : s + length]))
            index = {c: t for t, c in enumerate(support)}
            parent = list(range(len(support)))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            comps = len(support)
            for i in range(s, s + length - p):
                a = find(index[ids[i]])
                b = find(index[ids[i + p]])
                if a != b:
                    parent[a] = b
                    comps -= 1
            constraints = len(support) - comps
            if constraints == 0:
                continue
            raw.append((s, p, tuple(support), constraints))
    if beta_prime is None:
        gamma_eq = max(
            (Fraction(c, len(sup)) for _, _, sup, c in raw), default=Fraction(0)
        )
        beta_prime = gamma_eq + Fraction(9, 10) * (1 - gamma_eq)
    if not (0 < beta_prime < 1):
        raise ValueError("beta_prime must lie in (0, 1)")
    events = tuple(
        Event(
            sup,
            Fraction(1, 1 << c),
            Fraction(1, 1 << math.ceil(beta_prime * len(sup))),
            (s, p),
        )
        for s, p, sup, c in raw
    )
    return EventSystem(max(cmap.class_count, 1), events)


# ---------------------------------------------------------------------------
# resampling


class _ViolationTracker:
    """Heap of candidate violated events, keyed (start, period).

    Invariant: for every maximal stretch of period-p matches long enough to
    host an event window, the stretch's smallest valid start is present in
    the heap. Pops re-verify lazily, so stale entries are harmless; pushes
    happen on every match-bit flip (vectorized with a capped neighborhood
    scan, falling back to explicit walks when the cap is reached).
    """

    def __init__(self, w, np_w, n, p_min, p_max, win_len):
        self.w = w
        self.np_w = np_w
        self.n = n
        self.p_min = p_min
        self.p_max = p_max
        self.win_len = win_len
        self.k_req = {p: win_len[p] - p for p in win_len}
        self.max_start = {p: n - win_len[p] for p in win_len}
        self.heap: list[tuple[int, int]] = []
        self.in_heap: set[tuple[int, int]] = set()
        if p_max >= p_min:
            self._p_vec = np.arange(p_min, p_max + 1, dtype=np.int64)
            self._k_vec = np.array(
                [self.k_req[p] for p in range(p_min, p_max + 1)], dtype=np.int64
            )
        else:
            self._p_vec = np.zeros(0, dtype=np.int64)
            self._k_vec = np.zeros(0, dtype=np.int64)

    def push(self, s: int, p: int) -> None:
        if s < 0 or s > self.max_start[p]:
            return
        key = (s, p)
        if key not in self.in_heap:
            self.in_heap.add(key)
            heapq.heappush(self.heap, key)

    def full_sweep(self) -> None:
        np_w, n = self.np_w, self.n
        for p in range(self.p_min, self.p_max + 1):
            k = self.k_req[p]
            m = (np_w[: n - p] == np_w[p:]).view(np.int8)
            edges = np.flatnonzero(np.diff(np.concatenate(([0], m, [0]))))
            starts = edges[0::2]
            ends = edges[1::2]
            for s0, e0 in zip(starts, ends):
                if e0 - s0 >= k:
                    self.push(int(s0), p)

    def window_all_match(self, s: int, p: int) -> bool:
        k = self.k_req[p]
        if k > 48:
            return bool(
                np.array_equal(self.np_w[s : s + k], self.np_w[s + p : s + p + k])
            )
        w = self.w
        for i in range(s, s + k):
            if w[i] != w[i + p]:
                return False
        return True

    def _walk_up(self, i: int, p: int, k: int) -> None:
        w = self.w
        u = i
        while u > 0 and w[u - 1] == w[u - 1 + p]:
            u -= 1
        length = i - u + 1
        v = i
        vmax = self.n - p - 1
        while length < k and v < vmax and w[v + 1] == w[v + 1 + p]:
            v += 1
            length += 1
        if length >= k:
            self.push(u, p)

    def _walk_down(self, i: int, p: int, k: int) -> None:
        w = self.w
        j = i + 1
        vmax = self.n - p
        length = 0
        while length < k and j < vmax and w[j] == w[j + p]:
            j += 1
            length += 1
        if length >= k:
            self.push(i + 1, p)

    def apply_changes(self, changed: list[int], np_prev) -> None:
        """Re-establish the heap invariant after symbol changes.

        ``changed`` lists the positions whose symbols differ between
        np_prev and the current arrays.
        """
        if self._p_vec.size == 0 or not changed:
            return
        np_w, n = self.np_w, self.n
        A = np.asarray(changed, dtype=np.int64)
        P = self._p_vec[None, :]
        K = self._k_vec
        # match indices possibly affected: a - p (partner a) and a (partner a + p)
        I = np.concatenate([A[:, None] - P, np.broadcast_to(A[:, None], (A.size, P.size))])
        V = np.concatenate([(A[:, None] - P) >= 0, (A[:, None] + P) < n])
        Ic = np.clip(I, 0, n - 1)
        Jc = np.clip(I + P, 0, n - 1)
        old = np_prev[Ic] == np_prev[Jc]
        new = np_w[Ic] == np_w[Jc]
        ups = V & new & ~old
        downs = V & old & ~new
        if not (ups.any() or downs.any()):
            return
        cap = _SCAN_CAP

        def counts(rows, cols, offsets):
            idx = I[rows, cols]
            per = self._p_vec[cols]
            cur = np.ones(rows.size, dtype=bool)
            total = np.zeros(rows.size, dtype=np.int64)
            for d in offsets:
                ii = idx + d
                okl = (ii >= 0) & (ii + per < n)
                iic = np.clip(ii, 0, n - 1)
                jjc = np.clip(ii + per, 0, n - 1)
                cur = cur & okl & (np_w[iic] == np_w[jjc])
                total += cur
            return total

        if ups.any():
            rows, cols = np.nonzero(ups)
            left = counts(rows, cols, range(-1, -cap - 1, -1))
            right = counts(rows, cols, range(1, cap + 1))
            fk = K[cols]
            runlen = left + 1 + right
            needs_walk = (left == cap) | ((right == cap) & (runlen < fk))
            push_now = ~needs_walk & (runlen >= fk)
            idx_all = I[rows, cols]
            per_all = self._p_vec[cols]
            for t in np.flatnonzero(push_now):
                self.push(int(idx_all[t] - left[t]), int(per_all[t]))
            for t in np.flatnonzero(needs_walk):
                self._walk_up(int(idx_all[t]), int(per_all[t]), int(fk[t]))
        if downs.any():
            rows, cols = np.nonzero(downs)
            right = counts(rows, cols, range(1, cap + 1))
            fk = K[cols]
            idx_all = I[rows, cols]
            per_all = self._p_vec[cols]
            push_now = ((right < cap) & (right >= fk)) | ((right == cap) & (fk <= cap))
            needs_walk = (right == cap) & (fk > cap)
            for t in np.flatnonzero(push_now):
                self.push(int(idx_all[t] + 1), int(per_all[t]))
            for t in np.flatnonzero(needs_walk):
                self._walk_down(int(idx_all[t]), int(per_all[t]), int(fk[t]))


def resample_fill(
    pattern: RepetitionPattern,
    n: int,
    beta: Fraction,
    p_min: int,
    seed: int,
    max_rounds: int,
) -> tuple[list[int], ResampleTrace]:
    """Fill the pattern's free classes avoiding every window-power event.

    Deterministic for fixed arguments: class bits are initialized from the
    pinned generator in class-id order; each round redraws, in ascending
    class-id order, the support of the violated event with the smallest
    (start, period). Raises ResampleFailure (with the trace so far) when
    max_rounds resamplings were not enough.

    The returned assignment is guaranteed, by a final full scan, to admit
    no event of build_power_events for the same parameters.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    p_max, win_len = _window_geometry(n, beta, p_min)
    cmap = build_class_map(pattern, n)
    ids = cmap.ids
    prng = Xorshift64(seed)
    tau = [prng.bit() for _ in range(cmap.class_count)]
    w = [tau[c] for c in ids]
    np_w = np.array(w, dtype=np.int8)
    tracker = _ViolationTracker(w, np_w, n, p_min, p_max, win_len)

    def window_has_free_pair(s: int, p: int) -> bool:
        k = tracker.k_req[p]
        for i in range(s, s + k):
            if ids[i] != ids[i + p]:
                return True
        return False

    def pop_event():
        while tracker.heap:
            key = heapq.heappop(tracker.heap)
            tracker.in_heap.discard(key)
            s, p = key
            if not tracker.window_all_match(s, p):
                continue
            if not window_has_free_pair(s, p):
                # forced by the pattern: not an event; try the next start
                tracker.push(s + 1, p)
                continue
            return key
        return None

    rounds = 0
    tags: list[tuple[int, int]] = []
    if p_max >= p_min:
        tracker.full_sweep()
    while True:
        ev = pop_event()
        if ev is None:
            tracker.full_sweep()  # backstop before declaring success
            ev = pop_event()
            if ev is None:
                break
        if rounds >= max_rounds:
            raise ResampleFailure(ResampleTrace(rounds, tuple(tags), seed))
        s, p = ev
        rounds += 1
        tags.append((s, p))
        length = win_len[p]
        support = sorted({ids[i] for i in range(s, s + length)})
        changed: list[int] = []
        for c in support:
            b = prng.bit()
            if b != tau[c]:
                tau[c] = b
                changed.extend(cmap.members[c])
        tracker.push(s, p)  # may still be violated after the redraw
        if not changed:
            continue
        changed.sort()
        np_prev = np_w.copy()
        for i in changed:
            w[i] = tau[ids[i]]
        np_w[changed] = [w[i] for i in changed]
        tracker.apply_changes(changed, np_prev)
    return tau, ResampleTrace(rounds, tuple(tags), seed)
