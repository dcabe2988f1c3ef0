"""Words over small integer alphabets and elementary periodicity primitives.

Everything here is a pure function on immutable values; all exponents and
ratios are exact ``fractions.Fraction`` values, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

#: Exact rational type used for every exponent, density and threshold.
Rational = Fraction

#: Character map for compact text serialization (alphabets up to 36).
SYMBOL_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"
_CHAR_TO_ID = {c: i for i, c in enumerate(SYMBOL_CHARS)}


@dataclass(frozen=True)
class Word:
    """A finite word: a tuple of symbol ids below ``alphabet_size``."""

    symbols: tuple[int, ...]
    alphabet_size: int

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        if self.symbols:
            lo = min(self.symbols)
            hi = max(self.symbols)
            if lo < 0 or hi >= self.alphabet_size:
                raise ValueError(
                    f"symbol out of range [0, {self.alphabet_size}): {lo if lo < 0 else hi}"
                )

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    @classmethod
    def from_text(cls, text: str, alphabet_size: int | None = None) -> "Word":
        """Parse a word from its line format.

        Plain character form maps '0'-'9','a'-'z' to ids 0..35; a line
        containing commas is read as comma-separated integer ids.
        """
        text = text.strip()
        if not text:
            syms: tuple[int, ...] = ()
        elif "," in text:
            syms = tuple(int(part) for part in text.split(","))
        else:
            try:
                syms = tuple(_CHAR_TO_ID[c] for c in text)
            except KeyError as exc:
                raise ValueError(f"unknown symbol character {exc.args[0]!r}") from exc
        if alphabet_size is None:
            alphabet_size = (max(syms) + 1) if syms else 1
        return cls(syms, alphabet_size)

    def to_text(self) -> str:
        if self.alphabet_size <= len(SYMBOL_CHARS):
            return "".join(SYMBOL_CHARS[s] for s in self.symbols)
        return ",".join(str(s) for s in self.symbols)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = self.to_text()
        if len(body) > 40:
            body = body[:40] + "..."
        return f"Word({body!r}, sigma={self.alphabet_size})"


def word(text: str, alphabet_size: int | None = None) -> Word:
    """Shorthand constructor used heavily in tests."""
    return Word.from_text(text, alphabet_size)


def exponent_of(total_len: int, period: int) -> Fraction:
    """Exponent of a repetition: total length divided by its period, exact."""
    if period < 1:
        raise ValueError("period must be >= 1")
    if total_len < 1:
        raise ValueError("total_len must be >= 1")
    return Fraction(total_len, period)


def is_periodic(w: Word, p: int) -> bool:
    """True iff w[i] == w[i+p] wherever both sides exist (1 <= p <= |w|)."""
    n = len(w.symbols)
    if p < 1 or p > n:
        raise ValueError(f"period {p} out of range for word of length {n}")
    s = w.symbols
    return s[p:] == s[:-p] if p < n else True


def _seq_is_periodic(s, p: int) -> bool:
    # internal: no bounds validation, works on any indexable sequence
    return s[p:] == s[: len(s) - p] if p < len(s) else True


def smallest_period(w: Word) -> int:
    """Least p such that w is p-periodic; computed from the border table."""
    s = w.symbols
    n = len(s)
    if n == 0:
        raise ValueError("smallest_period is undefined for the empty word")
    border = [0] * n
    k = 0
    for i in range(1, n):
        c = s[i]
        while k and s[k] != c:
            k = border[k - 1]
        if s[k] == c:
            k += 1
        border[i] = k
    return n - border[n - 1]


def cartesian_product(w1: Word, w2: Word) -> Word:
    """Pair two equal-length words symbol-wise.

    Output symbol i is ``w1[i] * s2 + w2[i]`` over alphabet size ``s1 * s2``,
    so a period of the product is a period of both layers and conversely.
    """
    if len(w1.symbols) != len(w2.symbols):
        raise ValueError("cartesian_product requires equal-length words")
    s2 = w2.alphabet_size
    syms = tuple(a * s2 + b for a, b in zip(w1.symbols, w2.symbols))
    return Word(syms, w1.alphabet_size * s2)


def hamming_distance(w1: Word, w2: Word) -> int:
    """Number of positions where the two (equal-length) words differ."""
    if len(w1.symbols) != len(w2.symbols):
        raise ValueError("hamming_distance requires equal-length words")
    return sum(a != b for a, b in zip(w1.symbols, w2.symbols))


# ---------------------------------------------------------------------------
# word files: one word per line, optional "#alphabet <n>" header


def read_words(fp: TextIO) -> list[Word]:
    """Read words from a file object (one per line, blank lines skipped).

    Empty words are not representable in the file format.
    """
    alphabet: int | None = None
    out: list[Word] = []
    for lineno, raw in enumerate(fp):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#alphabet"):
            if lineno == 0 or not out:
                alphabet = int(line.split()[1])
                continue
            raise ValueError("#alphabet header must precede all words")
        if line.startswith("#"):
            continue
        out.append(Word.from_text(line, alphabet))
    return out


def write_words(words: Iterable[Word], fp: TextIO) -> None:
    """Write words in the shared line format with an alphabet header."""
    ws = list(words)
    sigma = max((w.alphabet_size for w in ws), default=1)
    fp.write(f"#alphabet {sigma}\n")
    for w in ws:
        if w.alphabet_size != sigma:
            w = Word(w.symbols, sigma)
        fp.write(w.to_text() + "\n")
