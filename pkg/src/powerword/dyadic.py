"""Certified rational bounds for powers of two and base-2 logarithms.

All routines return (lo, hi) Fraction pairs that are guaranteed to bracket
the exact real value; callers decide comparisons only when the brackets
separate, so verdicts built on top of these are never floating-point.
"""

from __future__ import annotations

from fractions import Fraction


def int_nth_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) for x >= 0, n >= 1, by Newton iteration."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0, n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    r = 1 << (x.bit_length() // n + 1)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    return r


def pow2_bounds(e: Fraction, prec: int = 64) -> tuple[Fraction, Fraction]:
    """Bracket 2**e between two dyadic rationals, width 2**-prec relative."""
    a, b = e.numerator, e.denominator
    k = prec
    if a < 0:
        k += -(a // b)  # make the scaled exponent nonnegative
    t = a + k * b
    root = int_nth_root(1 << t, b)
    scale = Fraction(1, 1 << k)
    return root * scale, (root + 1) * scale


def floor_log2(x: Fraction) -> int:
    """Largest integer m with 2**m <= x, for x > 0."""
    if x <= 0:
        raise ValueError("need x > 0")
    num, den = x.numerator, x.denominator
    m = num.bit_length() - den.bit_length()
    # 2**m <= x < 2**(m+2); fix up by direct comparison
    if m >= 0:
        if (den << m) > num:
            m -= 1
        elif (den << (m + 1)) <= num:
            m += 1
    else:
        if den > (num << -m):
            m -= 1
        elif (den << 1) <= (num << -m):
            m += 1
    return m


def log2_bounds(x: Fraction, prec: int = 64) -> tuple[Fraction, Fraction]:
    """Bracket log2(x) for x > 0 within 2**-prec (or a wider certified
    bracket if a squaring step cannot be resolved at working precision)."""
    if x <= 0:
        raise ValueError("need x > 0")
    m = floor_log2(x)
    y = x / (1 << m) if m >= 0 else x * (1 << -m)
    # y in [1, 2); extract fractional log bits by repeated squaring with
    # outward-rounded fixed-point arithmetic
    guard = prec + 16
    one = 1 << guard
    ylo = (y.numerator << guard) // y.denominator
    yhi = -((-y.numerator << guard) // y.denominator)
    acc = Fraction(0)
    for j in range(1, prec + 1):
        ylo = (ylo * ylo) >> guard
        yhi = -((-(yhi * yhi)) >> guard)
        if yhi < 2 * one:
            pass  # digit 0
        elif ylo >= 2 * one:
            acc += Fraction(1, 1 << j)
            ylo >>= 1
            yhi >>= 1
        else:
            # straddles 2: certified but coarser bracket
            return m + acc, m + acc + Fraction(1, 1 << (j - 1))
        if yhi >= 4 * one:  # keep the fixed point well-scaled
            return m + acc, m + acc + Fraction(1, 1 << (j - 1))
    return m + acc, m + acc + Fraction(1, 1 << prec)
