import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerword.codec import (
    BitCode,
    _append_uint,
    binary_entropy,
    decode_approx_power,
    decode_power,
    encode_approx_power,
    encode_power,
    exact_power_bound,
    lz_phrase_count,
    periodic_base,
    subset_rank,
    subset_unrank,
)
from powerword.analysis import defect_to_periodic
from powerword.words import Word, word
from conftest import all_binary_words, random_word


def selfdelim(n):
    out = []
    _append_uint(out, n)
    return "".join(map(str, out))


def test_header_code_pins():
    assert selfdelim(0) == "1"
    assert selfdelim(1) == "010"
    assert selfdelim(2) == "011"
    assert selfdelim(6) == "00111"
    # self-delimiting: distinct values give prefix-free codes
    codes = [selfdelim(n) for n in range(64)]
    for a, b in combinations(codes, 2):
        assert not b.startswith(a) and not a.startswith(b) or a == b


def test_encode_power_worked_example():
    code = encode_power(word("010101"), 2)
    assert len(code) == 10
    assert code.to01() == "00111" + "011" + "01"


def test_encode_power_smallest_case():
    w = word("0", 2)
    code = encode_power(w, 1)
    assert decode_power(code, 2) == w
    # one-letter alphabets need zero payload bits
    tiny = Word((0, 0), 1)
    assert decode_power(encode_power(tiny, 1), 1) == tiny


def test_encode_power_rejects_aperiodic():
    with pytest.raises(ValueError):
        encode_power(word("0110"), 2)


def test_power_round_trip_exhaustive():
    for n in range(1, 9):
        for w in all_binary_words(n):
            for p in range(1, n + 1):
                if w.symbols[p:] != w.symbols[: n - p]:
                    continue
                assert decode_power(encode_power(w, p), 2) == w


def test_power_code_length_ratio_vanishes():
    for k in (4, 16, 64, 256):
        w = Word((0, 1) * k, 2)
        code = encode_power(w, 2)
        assert len(code) <= exact_power_bound(w, 2)
    long = Word((0, 1) * 512, 2)
    assert len(encode_power(long, 2)) / len(long.symbols) < 0.05


def test_periodic_base_majority_with_ties_to_smaller():
    assert periodic_base(word("0111"), 2).to_text() == "0101"
    # residue class {0,2} sees 0 and 1: tie resolved to 0
    assert periodic_base(word("0110"), 2).to_text() == "0000"


def test_approx_worked_example():
    w = word("0111")
    code = encode_approx_power(w, 2)
    assert decode_approx_power(code, 2) == w
    assert defect_to_periodic(w, 2) == 1
    # headers 4,2,1 then base "01", rank of {2} in C(4,1)=4 (2 bits)
    assert code.to01() == "00101" + "011" + "010" + "01" + "10"


def test_approx_degenerate_is_power_code_plus_one_header():
    w = word("0101")
    exact = encode_power(w, 2)
    approx = encode_approx_power(w, 2)
    assert len(approx) == len(exact) + 1  # selfdelim(0) is a single bit


def test_approx_round_trip_exhaustive():
    for n in range(1, 9):
        for w in all_binary_words(n):
            for p in range(1, n + 1):
                assert decode_approx_power(encode_approx_power(w, p), 2) == w


def test_approx_round_trip_larger_alphabet(rng):
    for _ in range(60):
        w = random_word(rng, 24, max_sigma=5)
        p = rng.randint(1, len(w.symbols))
        assert decode_approx_power(encode_approx_power(w, p), w.alphabet_size) == w


def test_subset_rank_unrank_bijection():
    for l in range(0, 13):
        for d in range(0, l + 1):
            for rank, subset in enumerate(combinations(range(l), d)):
                # combinations yields lexicographic order; ranking is colex,
                # so check the bijection rather than the order
                assert subset_unrank(subset_rank(subset), l, d) == subset
    # ranks must be a bijection onto [0, C(l, d))
    l, d = 12, 5
    ranks = {subset_rank(c) for c in combinations(range(l), d)}
    assert ranks == set(range(math.comb(l, d)))


def test_subset_rank_unrank_sampled_large(rng):
    for _ in range(200):
        l = rng.randint(1, 20)
        d = rng.randint(0, l)
        subset = tuple(sorted(rng.sample(range(l), d)))
        assert subset_unrank(subset_rank(subset), l, d) == subset


def test_binary_entropy_values():
    assert binary_entropy(Fraction(1, 2)) == 1.0
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    assert abs(binary_entropy(Fraction(1, 4)) - 0.8112781244591328) < 1e-9
    with pytest.raises(ValueError):
        binary_entropy(1.5)


def test_lz_examples():
    assert lz_phrase_count(word("0")) == 1
    zeros = lz_phrase_count(Word((0,) * 16, 2))
    de_bruijn = lz_phrase_count(word("0000100110101111"))
    assert zeros < de_bruijn
    with pytest.raises(ValueError):
        lz_phrase_count(Word((), 2))


def test_lz_doubling_bound(rng):
    for _ in range(40):
        w = random_word(rng, 64, max_sigma=3)
        ww = Word(w.symbols * 2, w.alphabet_size)
        assert lz_phrase_count(ww) <= 2 * lz_phrase_count(w)


def test_bitcode_text_round_trip():
    code = BitCode((1, 0, 1, 1, 0))
    assert BitCode.from01(code.to01()) == code
    with pytest.raises(ValueError):
        BitCode.from01("01x")
