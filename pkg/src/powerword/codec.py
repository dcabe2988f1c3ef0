"""Self-delimiting codecs for exact and approximate periodic words.

Integer headers use a pinned universal code so code lengths are stable
across implementations: a nonnegative integer n is written as the Elias
gamma code of n + 1 (for m = n + 1 with b = floor(log2 m): b zero bits,
then the b + 1 bits of m, most significant first). Examples: 0 -> "1",
1 -> "010", 2 -> "011", 6 -> "00111".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .words import Word
from .analysis import defect_to_periodic


@dataclass(frozen=True)
class BitCode:
    """An immutable bit string with unambiguous self-delimiting headers."""

    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def to01(self) -> str:
        return "".join("01"[b] for b in self.bits)

    @classmethod
    def from01(cls, text: str) -> "BitCode":
        text = text.strip()
        if any(c not in "01" for c in text):
            raise ValueError("bit string may contain only 0 and 1")
        return cls(tuple(int(c) for c in text))


class _BitReader:
    def __init__(self, bits):
        self.bits = bits
        self.pos = 0

    def take(self, k: int) -> int:
        if self.pos + k > len(self.bits):
            raise ValueError("truncated code")
        val = 0
        for b in self.bits[self.pos : self.pos + k]:
            val = (val << 1) | b
        self.pos += k
        return val

    def take_uint(self) -> int:
        zeros = 0
        bits = self.bits
        while self.pos < len(bits) and bits[self.pos] == 0:
            zeros += 1
            self.pos += 1
        m = self.take(zeros + 1)
        return m - 1


def _append_uint(out: list[int], n: int) -> None:
    if n < 0:
        raise ValueError("headers encode nonnegative integers only")
    m = n + 1
    b = m.bit_length() - 1
    out.extend([0] * b)
    for i in range(b, -1, -1):
        out.append((m >> i) & 1)


def _append_fixed(out: list[int], val: int, width: int) -> None:
    for i in range(width - 1, -1, -1):
        out.append((val >> i) & 1)


def _symbol_bits(sigma: int) -> int:
    return (sigma - 1).bit_length()


def encode_power(w: Word, p: int) -> BitCode:
    """Code a p-periodic word as headers plus its first p symbols."""
    if not (1 <= p <= len(w.symbols)):
        raise ValueError("period out of range")
    s = w.symbols
    for i in range(len(s) - p):
        if s[i] != s[i + p]:
            raise ValueError(f"word is not {p}-periodic")
    out: list[int] = []
    _append_uint(out, len(s))
    _append_uint(out, p)
    width = _symbol_bits(w.alphabet_size)
    for sym in s[:p]:
        _append_fixed(out, sym, width)
    return BitCode(tuple(out))


def decode_power(code: BitCode, alphabet_size: int) -> Word:
    rd = _BitReader(code.bits)
    n = rd.take_uint()
    p = rd.take_uint()
    width = _symbol_bits(alphabet_size)
    base = [rd.take(width) for _ in range(p)]
    syms = tuple(base[i % p] for i in range(n))
    return Word(syms, alphabet_size)


def periodic_base(w: Word, p: int) -> Word:
    """Nearest p-periodic word: per-residue majority, ties to smaller id."""
    s = w.symbols
    n = len(s)
    if not (1 <= p <= n):
        raise ValueError("period out of range")
    base = []
    for r in range(p):
        counts: dict[int, int] = {}
        for sym in s[r::p]:
            counts[sym] = counts.get(sym, 0) + 1
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        base.append(best)
    return Word(tuple(base[i % p] for i in range(n)), w.alphabet_size)


def subset_rank(positions) -> int:
    """Rank of a subset of [0, l) in the combinatorial number system."""
    return sum(math.comb(c, i + 1) for i, c in enumerate(sorted(positions)))


def subset_unrank(rank: int, l: int, d: int) -> tuple[int, ...]:
    """Inverse of subset_rank for d-subsets of [0, l)."""
    out = []
    r = rank
    for i in range(d, 0, -1):
        c = i - 1
        while c + 1 < l and math.comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= math.comb(c, i)
    out.reverse()
    return tuple(out)


def encode_approx_power(w: Word, p: int) -> BitCode:
    """Code any word as its nearest p-periodic base plus ranked corrections.

    Layout: len, period, defect headers; base period symbols; the error
    position set ranked among C(len, defect) subsets; then, for alphabets
    beyond 2, each true symbol re-indexed among the symbols differing from
    the base. Cost beyond the exact-power code is about the binary entropy
    of the error fraction per position.
    """
    s = w.symbols
    n = len(s)
    if not (1 <= p <= n):
        raise ValueError("period out of range")
    base = periodic_base(w, p)
    errors = [i for i in range(n) if s[i] != base.symbols[i]]
    d = len(errors)
    out: list[int] = []
    _append_uint(out, n)
    _append_uint(out, p)
    _append_uint(out, d)
    width = _symbol_bits(w.alphabet_size)
    for sym in base.symbols[:p]:
        _append_fixed(out, sym, width)
    total = math.comb(n, d)
    rank_width = (total - 1).bit_length() if total > 1 else 0
    _append_fixed(out, subset_rank(errors), rank_width)
    repl_width = _symbol_bits(w.alphabet_size - 1) if w.alphabet_size > 1 else 0
    if repl_width:
        for i in errors:
            sym = s[i]
            ref = base.symbols[i]
            _append_fixed(out, sym if sym < ref else sym - 1, repl_width)
    return BitCode(tuple(out))


def decode_approx_power(code: BitCode, alphabet_size: int) -> Word:
    rd = _BitReader(code.bits)
    n = rd.take_uint()
    p = rd.take_uint()
    d = rd.take_uint()
    width = _symbol_bits(alphabet_size)
    base_period = [rd.take(width) for _ in range(p)]
    total = math.comb(n, d)
    rank_width = (total - 1).bit_length() if total > 1 else 0
    errors = subset_unrank(rd.take(rank_width), n, d)
    syms = [base_period[i % p] for i in range(n)]
    repl_width = _symbol_bits(alphabet_size - 1) if alphabet_size > 1 else 0
    for i in errors:
        if repl_width:
            idx = rd.take(repl_width)
            syms[i] = idx if idx < syms[i] else idx + 1
        else:
            syms[i] = 1 - syms[i]
    return Word(tuple(syms), alphabet_size)


def exact_power_bound(w: Word, p: int) -> int:
    """Documented ceiling for encode_power lengths (headers are O(log l))."""
    l = len(w.symbols)
    return p * _symbol_bits(w.alphabet_size) + math.ceil(4 * math.log2(l + 2)) + 16


def binary_entropy(eps) -> float:
    """H(eps) = -eps*log2(eps) - (1-eps)*log2(1-eps), with H(0) = H(1) = 0."""
    x = float(eps)
    if x < 0 or x > 1:
        raise ValueError("entropy argument must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def lz_phrase_count(w: Word) -> int:
    """Incremental-parse phrase count (longest seen prefix plus one symbol).

    Reported alongside analyzer output as an empirical complexity proxy;
    never used in any verdict.
    """
    s = w.symbols
    if not s:
        raise ValueError("phrase count is undefined for the empty word")
    children: dict[tuple[int, int], int] = {}
    next_id = 1
    count = 0
    node = 0
    for sym in s:
        key = (node, sym)
        child = children.get(key)
        if child is None:
            children[key] = next_id
            next_id += 1
            count += 1
            node = 0
        else:
            node = child
    if node != 0:
        count += 1
    return count


def approx_power_overhead(code: BitCode, w: Word, p: int) -> tuple[int, float]:
    """(defect, measured bits beyond period payload) for bound reporting."""
    d = defect_to_periodic(w, p)
    payload = p * _symbol_bits(w.alphabet_size)
    return d, len(code.bits) - payload
